#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "scamtrace/types.hpp"

// DBSCAN with automatic epsilon selection, one-hot campaign features, and
// clustering-quality metrics.
namespace scamtrace::clusterer {

constexpr int kNoise = -1;

struct DbscanParams {
    double eps = 0.0;
    std::size_t min_pts = 5;
};

struct ClusterAssignment {
    std::vector<int> labels;  // cluster ids 0..K-1, contiguous; kNoise = -1

    std::size_t size() const { return labels.size(); }
    int cluster_count() const;
};

using Metric = std::function<double(std::size_t, std::size_t)>;

// Classic DBSCAN over a distance oracle. Deterministic: points are seeded in
// ascending index order and neighbor lists expanded in ascending index order;
// a border point keeps the first cluster that reaches it. `threads` only
// parallelizes neighbor queries and never changes the result.
ClusterAssignment dbscan(std::size_t n, const Metric& metric, const DbscanParams& params,
                         unsigned threads = 1);

// Sorted k-distance curve elbow: the value whose point lies farthest from the
// chord between the curve's endpoints. Flat nonzero curve returns the common
// value; flat zero curve throws DegenerateDistances; n <= k throws
// TooFewPoints.
double select_eps(std::size_t n, const Metric& metric, std::size_t k, unsigned threads = 1);

std::vector<double> k_distance_curve(std::size_t n, const Metric& metric, std::size_t k,
                                     unsigned threads = 1);

enum class FeatureField { GaId, EmailAccount, EmailProvider, RegistrantCountry, Registrar, Ip };

std::string feature_field_name(FeatureField f);

struct CampaignRecord {
    std::string domain;
    RegistrationRecord registration;
    std::set<std::string> analytics_ids;
    std::optional<std::string> ip;
};

struct CampaignFeatureMatrix {
    std::vector<std::pair<FeatureField, std::string>> columns;  // sorted (field, value)
    std::vector<std::vector<std::uint32_t>> rows;               // sorted active column indexes

    std::size_t dimension() const { return columns.size(); }
};

// One binary column per observed (field, value); a row activates the columns
// for its values. Multiple GA ids on one record all activate.
CampaignFeatureMatrix encode_campaign_features(const std::vector<CampaignRecord>& records);

// Binary rows: sqrt of the symmetric-difference count.
double euclidean_distance(const std::vector<std::uint32_t>& row_u,
                          const std::vector<std::uint32_t>& row_v);

// Adjusted Rand index; NOISE scored as singleton clusters.
double adjusted_rand_index(const ClusterAssignment& a, const ClusterAssignment& b);

// F1 over same-cluster point pairs; NOISE pairs with nothing.
double pairwise_f1(const ClusterAssignment& predicted, const ClusterAssignment& truth);

}  // namespace scamtrace::clusterer
