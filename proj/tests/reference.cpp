#include "reference.hpp"

#include <algorithm>

#include "scamtrace/chain.hpp"

namespace reference {

using scamtrace::BlockchainCluster;
using scamtrace::ChainTransaction;
using scamtrace::CryptoAddress;

std::vector<int> dbscan(std::size_t n, const scamtrace::clusterer::Metric& metric, double eps,
                        std::size_t min_pts) {
    constexpr int kUnclassified = -2;
    constexpr int kNoise = -1;
    std::vector<int> labels(n, kUnclassified);

    auto region = [&](std::size_t p) {
        std::vector<std::size_t> out;
        for (std::size_t j = 0; j < n; ++j)
            if (j == p || metric(p, j) <= eps) out.push_back(j);
        return out;
    };

    int cluster_id = 0;
    for (std::size_t p = 0; p < n; ++p) {
        if (labels[p] != kUnclassified) continue;
        auto seeds = region(p);
        if (seeds.size() < min_pts) {
            labels[p] = kNoise;
            continue;
        }
        for (auto s : seeds) labels[s] = cluster_id;
        std::vector<std::size_t> queue(seeds.begin(), seeds.end());
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            auto q = queue[qi];
            auto q_region = region(q);
            if (q_region.size() < min_pts) continue;  // not core
            for (auto r : q_region) {
                if (labels[r] == kUnclassified || labels[r] == kNoise) {
                    if (labels[r] == kUnclassified) queue.push_back(r);
                    labels[r] = cluster_id;
                }
            }
        }
        ++cluster_id;
    }
    return labels;
}

std::vector<int> canonical_labels(const std::vector<int>& labels) {
    std::map<int, int> rename;
    std::vector<int> out;
    out.reserve(labels.size());
    for (int l : labels) {
        if (l < 0) {
            out.push_back(-1);
            continue;
        }
        auto [it, fresh] = rename.try_emplace(l, static_cast<int>(rename.size()));
        out.push_back(it->second);
    }
    return out;
}

std::vector<std::set<CryptoAddress>> closure_clusters(const std::vector<ChainTransaction>& txs) {
    std::vector<std::set<CryptoAddress>> groups;
    for (const auto& tx : txs) {
        for (const auto& slot : tx.outputs) groups.push_back({slot.address});
        if (tx.coinbase || tx.chain != scamtrace::Chain::Bitcoin) {
            for (const auto& slot : tx.inputs) groups.push_back({slot.address});
            continue;
        }
        std::set<CryptoAddress> joint;
        for (const auto& slot : tx.inputs) joint.insert(slot.address);
        if (!joint.empty()) groups.push_back(std::move(joint));
    }
    bool merged = true;
    while (merged) {
        merged = false;
        for (std::size_t i = 0; i < groups.size() && !merged; ++i) {
            for (std::size_t j = i + 1; j < groups.size() && !merged; ++j) {
                bool overlap = std::any_of(groups[i].begin(), groups[i].end(),
                                           [&](const auto& a) { return groups[j].count(a); });
                if (!overlap) continue;
                groups[i].insert(groups[j].begin(), groups[j].end());
                groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(j));
                merged = true;
            }
        }
    }
    std::sort(groups.begin(), groups.end(),
              [](const auto& a, const auto& b) { return *a.begin() < *b.begin(); });
    return groups;
}

namespace {

struct PathWalker {
    const std::vector<ChainTransaction>& txs;
    const std::map<CryptoAddress, int>& cluster_of;
    const std::vector<BlockchainCluster>& clusters;
    double usd_per_unit;
    std::map<std::string, double>* out;

    int input_cluster(const ChainTransaction& tx) const {
        if (tx.coinbase || tx.inputs.empty()) return -1;
        return cluster_of.at(tx.inputs.front().address);
    }

    // Inflow outputs into `cluster` strictly before time t.
    std::vector<std::pair<const ChainTransaction*, double>> inflows_before(
        int cluster, scamtrace::Timestamp t, const std::string& tx_id) const {
        std::vector<std::pair<const ChainTransaction*, double>> events;
        for (const auto& tx : txs) {
            if (std::tie(tx.timestamp, tx.tx_id) >= std::tie(t, tx_id)) continue;
            int from = input_cluster(tx);
            for (const auto& slot : tx.outputs) {
                auto it = cluster_of.find(slot.address);
                if (it == cluster_of.end() || it->second != cluster) continue;
                if (from == cluster) continue;
                events.emplace_back(&tx, scamtrace::amount_to_double(slot.value));
            }
        }
        return events;
    }

    void descend(const ChainTransaction& via, double native) const {
        if (via.coinbase) {
            (*out)["Miner"] += native * usd_per_unit;
            return;
        }
        int from = input_cluster(via);
        const auto& entity = clusters[static_cast<std::size_t>(from)].entity;
        if (entity) {
            (*out)[scamtrace::category_name(entity->category)] += native * usd_per_unit;
            return;
        }
        auto events = inflows_before(from, via.timestamp, via.tx_id);
        double total = 0;
        for (const auto& [tx, v] : events) total += v;
        if (events.empty() || total <= 0) {
            (*out)["unattributed"] += native * usd_per_unit;
            return;
        }
        for (const auto& [tx, v] : events) descend(*tx, native * v / total);
    }
};

}  // namespace

std::map<std::string, double> enumerate_source_attribution(
    const std::vector<ChainTransaction>& txs, const std::vector<BlockchainCluster>& clusters,
    const scamtrace::chain::LabelMap& labels, const std::set<int>& scam_clusters,
    double usd_per_unit) {
    auto annotated = clusters;
    scamtrace::chain::annotate_clusters(annotated, labels);
    auto cluster_of = scamtrace::chain::address_cluster_index(annotated);

    std::map<std::string, double> out;
    PathWalker walker{txs, cluster_of, annotated, usd_per_unit, &out};
    for (const auto& tx : txs) {
        int from = walker.input_cluster(tx);
        for (const auto& slot : tx.outputs) {
            auto it = cluster_of.find(slot.address);
            if (it == cluster_of.end() || !scam_clusters.count(it->second)) continue;
            if (from == it->second) continue;
            walker.descend(tx, scamtrace::amount_to_double(slot.value));
        }
    }
    return out;
}

}  // namespace reference
