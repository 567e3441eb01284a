#include "scamtrace/trace.hpp"

#include <algorithm>
#include <cmath>

#include "scamtrace/errors.hpp"

namespace scamtrace::trace {

namespace {

struct FlowEvent {
    std::size_t tx = 0;       // index into the ordered tx list
    double value = 0.0;       // native units of the moved output
    int peer_cluster = -1;    // cluster on the far side (-1 for coinbase)
};

// Precomputed per-cluster flow lists plus tx ordering. Walks consult inflows
// (backward) or outflows (forward) strictly beyond the current position.
struct Graph {
    std::vector<const ChainTransaction*> txs;      // sorted by (timestamp, tx_id)
    std::vector<int> input_cluster;                // -1 for coinbase
    std::map<int, std::vector<FlowEvent>> inflows;   // cross-cluster outputs into c
    std::map<int, std::vector<FlowEvent>> outflows;  // cross-cluster outputs out of c
    std::map<CryptoAddress, int> cluster_of;

    Date date_at(std::size_t pos) const { return date_of(txs[pos]->timestamp); }
};

Graph build_graph(const std::vector<BlockchainCluster>& clusters,
                  const std::vector<ChainTransaction>& raw_txs) {
    Graph g;
    g.cluster_of = chain::address_cluster_index(clusters);
    g.txs.reserve(raw_txs.size());
    for (const auto& tx : raw_txs) g.txs.push_back(&tx);
    std::sort(g.txs.begin(), g.txs.end(), [](const auto* a, const auto* b) {
        return std::tie(a->timestamp, a->tx_id) < std::tie(b->timestamp, b->tx_id);
    });

    g.input_cluster.assign(g.txs.size(), -1);
    for (std::size_t pos = 0; pos < g.txs.size(); ++pos) {
        const auto& tx = *g.txs[pos];
        if (!tx.coinbase && !tx.inputs.empty()) {
            auto it = g.cluster_of.find(tx.inputs.front().address);
            if (it != g.cluster_of.end()) g.input_cluster[pos] = it->second;
        }
        int from = g.input_cluster[pos];
        for (const auto& slot : tx.outputs) {
            auto it = g.cluster_of.find(slot.address);
            if (it == g.cluster_of.end()) continue;
            int to = it->second;
            if (to == from) continue;  // internal churn is not a flow
            double v = amount_to_double(slot.value);
            if (v <= 0) continue;
            g.inflows[to].push_back({pos, v, from});
            if (from >= 0) g.outflows[from].push_back({pos, v, to});
        }
    }
    return g;
}

struct Walker {
    const Graph& graph;
    const std::vector<BlockchainCluster>& clusters;
    const PriceTable& prices;
    const TraceParams& params;
    Direction direction;
    Chain chain;

    // Accumulators for the scam cluster currently being traced.
    std::map<std::pair<Category, std::optional<std::string>>, double>* attributed = nullptr;
    double* unattributed = nullptr;

    double to_usd_at(double native, std::size_t pos) const {
        double per_unit = chain::to_usd(1, chain, graph.date_at(pos), prices);
        return native * per_unit;
    }

    void attribute(const EntityLabel& label, double native, std::size_t pos) const {
        (*attributed)[{label.category, label.country}] += to_usd_at(native, pos);
    }

    void drop(double native, std::size_t pos) const {
        *unattributed += to_usd_at(native, pos);
    }

    // Value `native` crossed the tx at `pos` and now sits at `cluster`
    // (backward: the delivering side; forward: the receiving side).
    void walk(int cluster, double native, std::size_t pos, std::size_t hops) const {
        if (cluster < 0) {  // coinbase reached on a backward walk
            attribute(EntityLabel{"coinbase", Category::Miner, std::nullopt}, native, pos);
            return;
        }
        const auto& entity = clusters[static_cast<std::size_t>(cluster)].entity;
        if (entity) {
            attribute(*entity, native, pos);
            return;
        }
        const auto* events = [&]() -> const std::vector<FlowEvent>* {
            const auto& m = direction == Direction::Source ? graph.inflows : graph.outflows;
            auto it = m.find(cluster);
            return it == m.end() ? nullptr : &it->second;
        }();

        double total = 0.0;
        std::vector<const FlowEvent*> next;
        if (events) {
            for (const auto& e : *events) {
                bool beyond = direction == Direction::Source ? e.tx < pos : e.tx > pos;
                if (!beyond) continue;
                next.push_back(&e);
                total += e.value;
            }
        }
        if (next.empty() || total <= 0) {
            drop(native, pos);  // value appears from / parks into nowhere visible
            return;
        }
        if (hops + 1 > params.max_hops) {
            drop(native, pos);
            return;
        }
        for (const auto* e : next) {
            double share = native * (e->value / total);
            if (to_usd_at(share, e->tx) < params.dust_threshold_usd)
                drop(share, e->tx);
            else
                walk(e->peer_cluster, share, e->tx, hops + 1);
        }
    }
};

FlowAttribution run_trace(Direction direction, const std::set<int>& scam_clusters,
                          const std::vector<BlockchainCluster>& clusters,
                          const std::vector<ChainTransaction>& txs,
                          const chain::LabelMap& labels, const PriceTable& prices,
                          const TraceParams& params) {
    auto annotated = clusters;
    chain::annotate_clusters(annotated, labels);
    Graph graph = build_graph(annotated, txs);

    FlowAttribution out;
    out.direction = direction;

    for (int scam : scam_clusters) {
        std::map<std::pair<Category, std::optional<std::string>>, double> attributed;
        double unattributed = 0.0;

        const auto& m = direction == Direction::Source ? graph.inflows : graph.outflows;
        auto it = m.find(scam);
        if (it != m.end()) {
            for (const auto& e : it->second) {
                Walker w{graph, annotated, prices, params, direction,
                         graph.txs[e.tx]->chain, &attributed, &unattributed};
                // The first tx crossing is hop 1.
                w.walk(e.peer_cluster, e.value, e.tx, 1);
            }
        }

        double total = unattributed;
        for (const auto& [key, usd] : attributed) {
            out.rows.push_back({scam, key.first, key.second, usd});
            total += usd;
        }
        out.unattributed_usd += unattributed;
        if (unattributed > 0) out.unattributed_by_scam[scam] = unattributed;
        out.traced_total_by_scam[scam] = total;
    }
    return out;
}

}  // namespace

FlowAttribution trace_sources(const std::set<int>& scam_clusters,
                              const std::vector<BlockchainCluster>& clusters,
                              const std::vector<ChainTransaction>& txs,
                              const chain::LabelMap& labels, const PriceTable& prices,
                              const TraceParams& params) {
    return run_trace(Direction::Source, scam_clusters, clusters, txs, labels, prices, params);
}

FlowAttribution trace_destinations(const std::set<int>& scam_clusters,
                                   const std::vector<BlockchainCluster>& clusters,
                                   const std::vector<ChainTransaction>& txs,
                                   const chain::LabelMap& labels, const PriceTable& prices,
                                   const TraceParams& params) {
    return run_trace(Direction::Destination, scam_clusters, clusters, txs, labels, prices,
                     params);
}

std::vector<CategoryRow> category_table(const FlowAttribution& attr) {
    std::map<Category, double> sums;
    for (const auto& row : attr.rows) sums[row.category] += row.usd;
    if (attr.unattributed_usd > 0) sums[Category::Other] += attr.unattributed_usd;

    double total = 0;
    for (const auto& [cat, usd] : sums) total += usd;
    std::vector<CategoryRow> out;
    for (const auto& [cat, usd] : sums)
        out.push_back({cat, usd, total > 0 ? usd / total * 100.0 : 0.0});
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.usd != b.usd) return a.usd > b.usd;
        return a.category < b.category;
    });
    return out;
}

std::vector<CountryRow> country_table(const FlowAttribution& attr) {
    std::map<std::string, double> sums;
    double total = 0;
    for (const auto& row : attr.rows) {
        if (!is_exchange_category(row.category)) continue;
        sums[row.country.value_or("Unknown")] += row.usd;
        total += row.usd;
    }
    std::vector<CountryRow> out;
    for (const auto& [country, usd] : sums)
        out.push_back({country, usd, total > 0 ? usd / total * 100.0 : 0.0});
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.usd != b.usd) return a.usd > b.usd;
        return a.country < b.country;
    });
    return out;
}

std::vector<std::pair<int, double>> detect_scam_to_scam(const FlowAttribution& source_attr) {
    if (source_attr.direction != Direction::Source)
        throw InvalidConfig("detect_scam_to_scam needs a source attribution");
    std::map<int, double> per_scam;
    for (const auto& row : source_attr.rows)
        if (row.category == Category::Scam) per_scam[row.scam_cluster] += row.usd;
    std::vector<std::pair<int, double>> out(per_scam.begin(), per_scam.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return out;
}

}  // namespace scamtrace::trace
