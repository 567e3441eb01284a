#include "scamtrace/chain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "scamtrace/errors.hpp"

namespace scamtrace::chain {

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;

    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

std::vector<BlockchainCluster> clusters_from_partition(
    const std::vector<CryptoAddress>& universe, UnionFind& uf) {
    // The universe is sorted, so the first index seen for a root is the
    // cluster's smallest member; ids follow that order.
    std::vector<BlockchainCluster> out;
    std::map<std::size_t, std::size_t> cluster_of_root;
    for (std::size_t i = 0; i < universe.size(); ++i) {
        std::size_t root = uf.find(i);
        auto [it, fresh] = cluster_of_root.try_emplace(root, out.size());
        if (fresh)
            out.push_back(BlockchainCluster{static_cast<int>(out.size()), {}, false, std::nullopt});
        out[it->second].addresses.insert(universe[i]);
    }
    return out;
}

std::vector<CryptoAddress> address_universe(const std::vector<ChainTransaction>& txs) {
    std::set<CryptoAddress> seen;
    for (const auto& tx : txs) {
        for (const auto& slot : tx.inputs) seen.insert(slot.address);
        for (const auto& slot : tx.outputs) seen.insert(slot.address);
    }
    return {seen.begin(), seen.end()};
}

}  // namespace

std::vector<BlockchainCluster> build_clusters(const std::vector<ChainTransaction>& txs) {
    auto universe = address_universe(txs);
    std::map<CryptoAddress, std::size_t> index;
    for (std::size_t i = 0; i < universe.size(); ++i) index[universe[i]] = i;

    UnionFind uf(universe.size());
    for (const auto& tx : txs) {
        if (tx.chain != Chain::Bitcoin || tx.coinbase || tx.inputs.empty()) continue;
        std::size_t first = index.at(tx.inputs.front().address);
        for (const auto& slot : tx.inputs) uf.unite(index.at(slot.address), first);
    }
    return clusters_from_partition(universe, uf);
}

std::vector<BlockchainCluster> apply_change_heuristic(
    const std::vector<ChainTransaction>& txs, const std::vector<BlockchainCluster>& clusters,
    bool enabled) {
    if (!enabled) return clusters;

    auto universe = address_universe(txs);
    std::map<CryptoAddress, std::size_t> index;
    for (std::size_t i = 0; i < universe.size(); ++i) index[universe[i]] = i;

    UnionFind uf(universe.size());
    for (const auto& cluster : clusters) {
        if (cluster.addresses.empty()) continue;
        auto first = index.at(*cluster.addresses.begin());
        for (const auto& addr : cluster.addresses) uf.unite(index.at(addr), first);
    }

    // Deterministic tx order for "earlier"/"later".
    std::vector<const ChainTransaction*> ordered;
    ordered.reserve(txs.size());
    for (const auto& tx : txs) ordered.push_back(&tx);
    std::sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) {
        return std::tie(a->timestamp, a->tx_id) < std::tie(b->timestamp, b->tx_id);
    });

    // First (ts, tx_id) position at which each address appears in any role,
    // and every position where it appears as an output.
    std::map<CryptoAddress, std::size_t> first_seen;
    std::map<CryptoAddress, std::vector<std::size_t>> output_positions;
    for (std::size_t pos = 0; pos < ordered.size(); ++pos) {
        for (const auto& slot : ordered[pos]->inputs)
            first_seen.try_emplace(slot.address, pos);
        for (const auto& slot : ordered[pos]->outputs) {
            first_seen.try_emplace(slot.address, pos);
            output_positions[slot.address].push_back(pos);
        }
    }

    for (std::size_t pos = 0; pos < ordered.size(); ++pos) {
        const auto& tx = *ordered[pos];
        if (tx.chain != Chain::Bitcoin || tx.coinbase || tx.inputs.empty()) continue;
        if (tx.outputs.size() < 2) continue;
        std::vector<const CryptoAddress*> fresh;
        for (const auto& slot : tx.outputs) {
            if (first_seen.at(slot.address) < pos) continue;  // seen earlier
            const auto& outs = output_positions.at(slot.address);
            bool later_output = std::any_of(outs.begin(), outs.end(),
                                            [&](std::size_t p) { return p > pos; });
            if (!later_output) fresh.push_back(&slot.address);
        }
        if (fresh.size() == 1)
            uf.unite(index.at(*fresh.front()), index.at(tx.inputs.front().address));
    }
    return clusters_from_partition(universe, uf);
}

void annotate_clusters(std::vector<BlockchainCluster>& clusters, const LabelMap& labels) {
    for (auto& cluster : clusters) {
        cluster.entity.reset();
        cluster.custodial = false;
        for (const auto& addr : cluster.addresses) {
            auto it = labels.find(addr);
            if (it == labels.end()) continue;
            cluster.entity = it->second;
            break;
        }
        if (cluster.entity && is_custodial_category(cluster.entity->category))
            cluster.custodial = true;
    }
}

FilterResult filter_custodial(const std::vector<BlockchainCluster>& clusters,
                              const LabelMap& labels, const CustodialThresholds& thresholds,
                              const std::vector<ChainTransaction>& txs,
                              const PriceTable& prices) {
    // Total received per cluster, in USD at each delivering tx date.
    auto index = address_cluster_index(clusters);
    std::map<int, double> received_usd;
    for (const auto& tx : txs) {
        Date d = date_of(tx.timestamp);
        for (const auto& slot : tx.outputs) {
            auto it = index.find(slot.address);
            if (it == index.end()) continue;
            received_usd[it->second] += to_usd(slot.value, tx.chain, d, prices);
        }
    }

    FilterResult out;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        BlockchainCluster c = clusters[i];
        bool labeled_custodial = false;
        for (const auto& addr : c.addresses) {
            auto it = labels.find(addr);
            if (it != labels.end() && is_custodial_category(it->second.category)) {
                labeled_custodial = true;
                break;
            }
        }
        bool remove = labeled_custodial || c.addresses.size() > thresholds.max_addresses;
        if (!remove) {
            auto it = received_usd.find(static_cast<int>(i));
            if (it != received_usd.end() && it->second > thresholds.max_received_usd)
                remove = true;
        }
        c.custodial = remove;
        (remove ? out.removed : out.kept).push_back(std::move(c));
    }
    return out;
}

SizeStats cluster_size_stats(const std::vector<BlockchainCluster>& clusters) {
    if (clusters.empty()) throw EmptyInput("no clusters");
    std::vector<std::size_t> sizes;
    sizes.reserve(clusters.size());
    for (const auto& c : clusters) sizes.push_back(c.addresses.size());
    std::sort(sizes.begin(), sizes.end());
    auto nearest_rank = [&](double pct) {
        std::size_t rank = static_cast<std::size_t>(
            std::ceil(pct / 100.0 * static_cast<double>(sizes.size())));
        if (rank == 0) rank = 1;
        return sizes[rank - 1];
    };
    return {nearest_rank(50), nearest_rank(75), nearest_rank(90)};
}

double to_usd(Amount value, Chain chain, Date date, const PriceTable& prices) {
    if (value == 0) return 0.0;
    for (Date d = date; d >= date - 7; --d) {
        auto it = prices.usd_per_coin.find({chain, d});
        if (it != prices.usd_per_coin.end())
            return amount_to_double(value) / chain_unit_scale(chain) * it->second;
    }
    throw MissingPrice("no " + chain_name(chain) + " price on or within 7 days before " +
                       format_date(date));
}

std::map<CryptoAddress, int> address_cluster_index(
    const std::vector<BlockchainCluster>& clusters) {
    std::map<CryptoAddress, int> out;
    for (std::size_t i = 0; i < clusters.size(); ++i)
        for (const auto& addr : clusters[i].addresses)
            out[addr] = static_cast<int>(i);
    return out;
}

}  // namespace scamtrace::chain
