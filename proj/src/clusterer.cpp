#include "scamtrace/clusterer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <thread>

#include "scamtrace/errors.hpp"

namespace scamtrace::clusterer {

namespace {

constexpr int kUnvisited = -2;

// Runs fn(i) for i in [0, n); chunked across threads. Each index writes only
// its own output slot, so the result is independent of the thread count.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    unsigned workers = std::min<unsigned>(threads, static_cast<unsigned>(n));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

std::vector<std::size_t> region_query(std::size_t n, const Metric& metric, std::size_t p,
                                      double eps, unsigned threads) {
    std::vector<char> hit(n, 0);
    parallel_for(n, threads, [&](std::size_t j) {
        hit[j] = (j == p) || metric(p, j) <= eps;
    });
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < n; ++j)
        if (hit[j]) out.push_back(j);
    return out;
}

}  // namespace

int ClusterAssignment::cluster_count() const {
    int max_id = -1;
    for (int l : labels) max_id = std::max(max_id, l);
    return max_id + 1;
}

ClusterAssignment dbscan(std::size_t n, const Metric& metric, const DbscanParams& params,
                         unsigned threads) {
    ClusterAssignment out;
    out.labels.assign(n, kUnvisited);
    int next_cluster = 0;

    for (std::size_t seed = 0; seed < n; ++seed) {
        if (out.labels[seed] != kUnvisited) continue;
        auto neighbors = region_query(n, metric, seed, params.eps, threads);
        if (neighbors.size() < params.min_pts) {
            out.labels[seed] = kNoise;
            continue;
        }
        int cluster = next_cluster++;
        out.labels[seed] = cluster;
        std::deque<std::size_t> frontier(neighbors.begin(), neighbors.end());
        while (!frontier.empty()) {
            std::size_t q = frontier.front();
            frontier.pop_front();
            if (out.labels[q] == kNoise) out.labels[q] = cluster;  // border point
            if (out.labels[q] != kUnvisited) continue;
            out.labels[q] = cluster;
            auto q_neighbors = region_query(n, metric, q, params.eps, threads);
            if (q_neighbors.size() >= params.min_pts)
                frontier.insert(frontier.end(), q_neighbors.begin(), q_neighbors.end());
        }
    }
    return out;
}

std::vector<double> k_distance_curve(std::size_t n, const Metric& metric, std::size_t k,
                                     unsigned threads) {
    if (n <= k) throw TooFewPoints("need more than k points for the k-distance curve");
    std::vector<double> kdist(n);
    parallel_for(n, threads, [&](std::size_t i) {
        std::vector<double> d;
        d.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) d.push_back(metric(i, j));
        std::nth_element(d.begin(), d.begin() + (k - 1), d.end());
        kdist[i] = d[k - 1];
    });
    std::sort(kdist.begin(), kdist.end());
    return kdist;
}

double select_eps(std::size_t n, const Metric& metric, std::size_t k, unsigned threads) {
    auto curve = k_distance_curve(n, metric, k, threads);
    std::size_t m = curve.size() - 1;
    double y0 = curve.front(), ym = curve.back();
    if (y0 == ym) {
        if (y0 == 0.0) throw DegenerateDistances("all k-distances are zero");
        return y0;  // flat curve
    }
    // Perpendicular distance from (j, y_j) to the chord (0, y0)-(m, ym);
    // positive scale factors dropped, they do not change the argmax.
    std::size_t best_j = 0;
    double best = -1.0;
    for (std::size_t j = 0; j <= m; ++j) {
        double dev = std::abs((ym - y0) * static_cast<double>(j) -
                              static_cast<double>(m) * (curve[j] - y0));
        if (dev > best) {
            best = dev;
            best_j = j;
        }
    }
    return curve[best_j];
}

std::string feature_field_name(FeatureField f) {
    switch (f) {
        case FeatureField::GaId: return "ga_id";
        case FeatureField::EmailAccount: return "email_account";
        case FeatureField::EmailProvider: return "email_provider";
        case FeatureField::RegistrantCountry: return "registrant_country";
        case FeatureField::Registrar: return "registrar";
        case FeatureField::Ip: return "ip";
    }
    return "?";
}

CampaignFeatureMatrix encode_campaign_features(const std::vector<CampaignRecord>& records) {
    using Key = std::pair<FeatureField, std::string>;
    std::vector<std::vector<Key>> active(records.size());
    std::set<Key> observed;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        auto put = [&](FeatureField f, const std::optional<std::string>& v) {
            if (!v || v->empty()) return;
            active[i].emplace_back(f, *v);
            observed.emplace(f, *v);
        };
        for (const auto& ga : r.analytics_ids) put(FeatureField::GaId, ga);
        put(FeatureField::EmailAccount, r.registration.registrant_email_account);
        put(FeatureField::EmailProvider, r.registration.registrant_email_provider);
        put(FeatureField::RegistrantCountry, r.registration.registrant_country);
        put(FeatureField::Registrar, r.registration.registrar);
        put(FeatureField::Ip, r.ip);
    }

    CampaignFeatureMatrix out;
    out.columns.assign(observed.begin(), observed.end());
    std::map<Key, std::uint32_t> index;
    for (std::uint32_t c = 0; c < out.columns.size(); ++c) index[out.columns[c]] = c;

    out.rows.resize(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        for (const auto& key : active[i]) out.rows[i].push_back(index.at(key));
        std::sort(out.rows[i].begin(), out.rows[i].end());
    }
    return out;
}

double euclidean_distance(const std::vector<std::uint32_t>& row_u,
                          const std::vector<std::uint32_t>& row_v) {
    std::size_t mismatches = 0;
    auto a = row_u.begin();
    auto b = row_v.begin();
    while (a != row_u.end() && b != row_v.end()) {
        if (*a < *b) { ++mismatches; ++a; }
        else if (*b < *a) { ++mismatches; ++b; }
        else { ++a; ++b; }
    }
    mismatches += (row_u.end() - a) + (row_v.end() - b);
    return std::sqrt(static_cast<double>(mismatches));
}

namespace {

// NOISE points become fresh singleton labels before pair counting.
std::vector<int> noise_as_singletons(const std::vector<int>& labels) {
    int next = 0;
    for (int l : labels) next = std::max(next, l + 1);
    std::vector<int> out = labels;
    for (auto& l : out)
        if (l == kNoise) l = next++;
    return out;
}

double comb2(double x) { return x * (x - 1) / 2; }

}  // namespace

double adjusted_rand_index(const ClusterAssignment& a, const ClusterAssignment& b) {
    if (a.labels.size() != b.labels.size())
        throw LengthMismatch("assignments have different lengths");
    auto la = noise_as_singletons(a.labels);
    auto lb = noise_as_singletons(b.labels);

    std::map<std::pair<int, int>, std::size_t> cont;
    std::map<int, std::size_t> row_sum, col_sum;
    for (std::size_t i = 0; i < la.size(); ++i) {
        ++cont[{la[i], lb[i]}];
        ++row_sum[la[i]];
        ++col_sum[lb[i]];
    }
    double sum_ij = 0, sum_a = 0, sum_b = 0;
    for (const auto& [key, n] : cont) sum_ij += comb2(static_cast<double>(n));
    for (const auto& [key, n] : row_sum) sum_a += comb2(static_cast<double>(n));
    for (const auto& [key, n] : col_sum) sum_b += comb2(static_cast<double>(n));
    double total = comb2(static_cast<double>(la.size()));
    if (total == 0) return 1.0;
    double expected = sum_a * sum_b / total;
    double max_index = (sum_a + sum_b) / 2;
    if (max_index == expected) return 1.0;  // both partitions trivial
    return (sum_ij - expected) / (max_index - expected);
}

double pairwise_f1(const ClusterAssignment& predicted, const ClusterAssignment& truth) {
    if (predicted.labels.size() != truth.labels.size())
        throw LengthMismatch("assignments have different lengths");
    std::map<int, std::size_t> pred_sizes, truth_sizes;
    std::map<std::pair<int, int>, std::size_t> joint;
    for (std::size_t i = 0; i < predicted.labels.size(); ++i) {
        int p = predicted.labels[i], t = truth.labels[i];
        if (p != kNoise) ++pred_sizes[p];
        if (t != kNoise) ++truth_sizes[t];
        if (p != kNoise && t != kNoise) ++joint[{p, t}];
    }
    double pred_pairs = 0, truth_pairs = 0, tp = 0;
    for (const auto& [k, n] : pred_sizes) pred_pairs += comb2(static_cast<double>(n));
    for (const auto& [k, n] : truth_sizes) truth_pairs += comb2(static_cast<double>(n));
    for (const auto& [k, n] : joint) tp += comb2(static_cast<double>(n));
    if (pred_pairs == 0 && truth_pairs == 0) return 1.0;
    if (pred_pairs == 0 || truth_pairs == 0 || tp == 0) return 0.0;
    double precision = tp / pred_pairs;
    double recall = tp / truth_pairs;
    return 2 * precision * recall / (precision + recall);
}

}  // namespace scamtrace::clusterer
