#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "scamtrace/clusterer.hpp"
#include "scamtrace/textfeat.hpp"
#include "scamtrace/types.hpp"

// The paper-style studies: type clustering, campaign clustering, blockchain
// cluster reuse, campaign overlap, registration-to-payment ECDF, keyword and
// inflow trends.
namespace scamtrace::analysis {

struct TypeCluster {
    int cluster_id = 0;
    std::size_t member_count = 0;
    std::vector<std::string> top_terms;  // up to 10, by mean tf-idf weight
    std::vector<std::string> domains;
};

struct TypeClusterReport {
    clusterer::ClusterAssignment assignment;  // one label per snapshot
    std::vector<TypeCluster> clusters;
    std::size_t noise_count = 0;
    double eps = 0.0;
    bool degenerate_eps = false;  // all k-distances were zero; fallback eps used
};

TypeClusterReport cluster_types(const std::vector<WebsiteSnapshot>& snapshots,
                                const std::set<std::string>& stop_words, std::size_t min_pts,
                                std::optional<double> eps_override = std::nullopt,
                                unsigned threads = 1);

struct Campaign {
    int cluster_id = 0;
    std::vector<std::string> domains;
    std::set<std::string> ips;
    std::set<std::string> registrars;
    bool ga_overlap = false;  // some GA id appears on >= 2 member sites
    std::set<int> type_ids;   // scam types present (from the type assignment)
};

struct CampaignReport {
    clusterer::ClusterAssignment assignment;  // one label per input record
    std::vector<std::string> record_domains;
    std::vector<Campaign> campaigns;
    std::size_t noise_count = 0;
    double eps = 0.0;
    bool degenerate_eps = false;
    double multi_type_fraction = 0.0;  // campaigns running > 1 scam type
    double ga_overlap_fraction = 0.0;  // campaigns with >= 2 matching GA ids
};

CampaignReport cluster_campaigns(const std::vector<clusterer::CampaignRecord>& records,
                                 const std::map<std::string, int>& domain_type,
                                 std::size_t min_pts,
                                 std::optional<double> eps_override = std::nullopt,
                                 unsigned threads = 1);

struct OverlapGraph {
    std::vector<int> nodes;  // campaign ids
    struct Edge {
        int a = 0;
        int b = 0;
        std::set<int> shared_clusters;
    };
    std::vector<Edge> edges;
    std::vector<std::set<int>> components;
};

// Edge between campaigns whose advertised addresses fall in intersecting
// blockchain-cluster sets; components by union-find.
OverlapGraph campaign_overlap_graph(
    const CampaignReport& campaigns,
    const std::map<std::string, std::set<CryptoAddress>>& domain_addresses,
    const std::map<CryptoAddress, int>& address_cluster);

struct ReuseStats {
    std::map<int, double> reuse_fraction;  // absent when a type has no clusters
    std::map<std::pair<int, int>, double> shared_fraction;
};

enum class SharedDenominator { Union, Min };  // Jaccard vs overlap coefficient

ReuseStats reuse_stats(const std::map<int, std::set<int>>& type_clusters,
                       const std::map<std::pair<int, int>, std::size_t>& websites_per_type_cluster,
                       SharedDenominator denom = SharedDenominator::Union);

struct Ecdf {
    std::vector<std::pair<long, double>> points;  // (lag days, cumulative fraction)
    std::size_t included = 0;
    std::size_t excluded_negative = 0;
    double at7 = 0.0, at14 = 0.0, at30 = 0.0;

    double at(long lag) const;
};

struct Payment {
    std::string domain;
    Timestamp when = 0;
    double usd = 0.0;
};

// Day lags between registration and payment; negative lags excluded.
// Throws NoIncludedPayments when nothing remains.
Ecdf registration_payment_ecdf(const std::map<std::string, Date>& registrations,
                               const std::vector<Payment>& payments);

// Fraction of domains registered inside [start, end] whose name contains any
// keyword (case-insensitive substring). Throws EmptyWindow.
double keyword_trend(const std::map<std::string, Date>& registrations,
                     std::pair<Date, Date> window, const std::set<std::string>& keywords);

struct InflowBucket {
    int type_id = 0;
    Timestamp bucket_start = 0;
    Chain chain = Chain::Bitcoin;
    double usd = 0.0;
    std::size_t tx_count = 0;
};

// Inflows into each type's blockchain clusters, bucketed by time and chain.
// Clusters tied to more than one type are excluded entirely.
std::vector<InflowBucket> inflow_timeseries(const std::map<int, std::set<int>>& type_clusters,
                                            const std::vector<BlockchainCluster>& clusters,
                                            const std::vector<ChainTransaction>& txs,
                                            const PriceTable& prices, std::int64_t bucket_seconds);

}  // namespace scamtrace::analysis
