#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "scamtrace/types.hpp"

// Transaction modelling: common-spend clustering, the opt-in change
// heuristic, custodial filtering, and USD conversion.
namespace scamtrace::chain {

// Union-find over Bitcoin inputs; Ethereum addresses stay singletons.
// Cluster ids follow the ascending order of each cluster's smallest member.
std::vector<BlockchainCluster> build_clusters(const std::vector<ChainTransaction>& txs);

// When enabled, merges the single fresh output of a >=2-output Bitcoin
// transaction into its input cluster. Disabled returns `clusters` unchanged.
std::vector<BlockchainCluster> apply_change_heuristic(
    const std::vector<ChainTransaction>& txs, const std::vector<BlockchainCluster>& clusters,
    bool enabled);

using LabelMap = std::map<CryptoAddress, EntityLabel>;

// Attaches the first labelled member's entity to each cluster (by address
// order) and marks custodial-category clusters.
void annotate_clusters(std::vector<BlockchainCluster>& clusters, const LabelMap& labels);

struct CustodialThresholds {
    std::size_t max_addresses = 10000;
    double max_received_usd = 1e8;
};

struct FilterResult {
    std::vector<BlockchainCluster> kept;
    std::vector<BlockchainCluster> removed;
};

// Removes clusters labelled with a custodial category, larger than
// max_addresses, or with total received above max_received_usd.
FilterResult filter_custodial(const std::vector<BlockchainCluster>& clusters,
                              const LabelMap& labels, const CustodialThresholds& thresholds,
                              const std::vector<ChainTransaction>& txs,
                              const PriceTable& prices);

struct SizeStats {
    std::size_t p50 = 0;
    std::size_t p75 = 0;
    std::size_t p90 = 0;
};

// Nearest-rank percentiles of cluster address counts. Throws EmptyInput.
SizeStats cluster_size_stats(const std::vector<BlockchainCluster>& clusters);

// value * price at `date`, falling back to the nearest earlier date within
// 7 days. Throws MissingPrice beyond the lookback.
double to_usd(Amount value, Chain chain, Date date, const PriceTable& prices);

// Cluster id for each address (index into the `clusters` vector order).
std::map<CryptoAddress, int> address_cluster_index(const std::vector<BlockchainCluster>& clusters);

}  // namespace scamtrace::chain
