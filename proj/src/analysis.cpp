#include "scamtrace/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scamtrace/chain.hpp"
#include "scamtrace/errors.hpp"

namespace scamtrace::analysis {

namespace {

// Eps for a pipeline run: the elbow value, or, when every k-distance is zero
// (coincident points), half the smallest positive pairwise distance so exact
// duplicates still cluster without bridging distinct piles.
double pipeline_eps(std::size_t n, const clusterer::Metric& metric, std::size_t min_pts,
                    std::optional<double> eps_override, unsigned threads, bool& degenerate) {
    degenerate = false;
    if (eps_override) return *eps_override;
    try {
        return clusterer::select_eps(n, metric, min_pts, threads);
    } catch (const DegenerateDistances&) {
        degenerate = true;
        double smallest = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                double d = metric(i, j);
                if (d > 0) smallest = std::min(smallest, d);
            }
        return std::isfinite(smallest) ? smallest / 2 : 1.0;
    }
}

}  // namespace

TypeClusterReport cluster_types(const std::vector<WebsiteSnapshot>& snapshots,
                                const std::set<std::string>& stop_words, std::size_t min_pts,
                                std::optional<double> eps_override, unsigned threads) {
    if (snapshots.size() < min_pts)
        throw TooFewPoints("fewer snapshots than min_pts");

    std::vector<textfeat::TokenList> docs;
    docs.reserve(snapshots.size());
    for (const auto& snap : snapshots) docs.push_back(textfeat::preprocess(snap.page_text, stop_words));

    auto model = textfeat::fit_tfidf(docs);
    std::vector<textfeat::SparseVector> vectors;
    vectors.reserve(docs.size());
    for (const auto& doc : docs) vectors.push_back(textfeat::transform(model, doc));

    clusterer::Metric metric = [&](std::size_t i, std::size_t j) {
        return textfeat::cosine_distance(vectors[i], vectors[j]);
    };

    TypeClusterReport report;
    report.eps = pipeline_eps(snapshots.size(), metric, min_pts, eps_override, threads,
                              report.degenerate_eps);
    report.assignment =
        clusterer::dbscan(snapshots.size(), metric, {report.eps, min_pts}, threads);

    // Term index -> name for top-term reporting.
    std::vector<std::string> term_of(model.vocabulary.size());
    for (const auto& [term, idx] : model.vocabulary) term_of[idx] = term;

    std::map<int, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < report.assignment.labels.size(); ++i) {
        int label = report.assignment.labels[i];
        if (label == clusterer::kNoise)
            ++report.noise_count;
        else
            members[label].push_back(i);
    }
    for (const auto& [id, idxs] : members) {
        TypeCluster tc;
        tc.cluster_id = id;
        tc.member_count = idxs.size();
        std::map<std::uint32_t, double> weight_sum;
        for (auto i : idxs) {
            tc.domains.push_back(snapshots[i].domain);
            for (const auto& [col, w] : vectors[i].entries) weight_sum[col] += w;
        }
        std::vector<std::pair<double, std::string>> ranked;
        for (const auto& [col, sum] : weight_sum)
            ranked.emplace_back(sum / static_cast<double>(idxs.size()), term_of[col]);
        std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        for (std::size_t k = 0; k < ranked.size() && k < 10; ++k)
            tc.top_terms.push_back(ranked[k].second);
        report.clusters.push_back(std::move(tc));
    }
    return report;
}

CampaignReport cluster_campaigns(const std::vector<clusterer::CampaignRecord>& records,
                                 const std::map<std::string, int>& domain_type,
                                 std::size_t min_pts,
                                 std::optional<double> eps_override, unsigned threads) {
    if (records.empty()) throw EmptyInput("no campaign records");
    if (records.size() < min_pts) throw TooFewPoints("fewer records than min_pts");

    auto matrix = clusterer::encode_campaign_features(records);
    clusterer::Metric metric = [&](std::size_t i, std::size_t j) {
        return clusterer::euclidean_distance(matrix.rows[i], matrix.rows[j]);
    };

    CampaignReport report;
    for (const auto& r : records) report.record_domains.push_back(r.domain);
    report.eps = pipeline_eps(records.size(), metric, min_pts, eps_override, threads,
                              report.degenerate_eps);
    report.assignment = clusterer::dbscan(records.size(), metric, {report.eps, min_pts}, threads);

    std::map<int, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < report.assignment.labels.size(); ++i) {
        int label = report.assignment.labels[i];
        if (label == clusterer::kNoise)
            ++report.noise_count;
        else
            members[label].push_back(i);
    }
    std::size_t multi_type = 0, ga_overlap = 0;
    for (const auto& [id, idxs] : members) {
        Campaign c;
        c.cluster_id = id;
        std::map<std::string, std::size_t> ga_counts;
        for (auto i : idxs) {
            const auto& r = records[i];
            c.domains.push_back(r.domain);
            if (r.ip) c.ips.insert(*r.ip);
            if (r.registration.registrar) c.registrars.insert(*r.registration.registrar);
            for (const auto& ga : r.analytics_ids) ++ga_counts[ga];
            auto it = domain_type.find(r.domain);
            if (it != domain_type.end()) c.type_ids.insert(it->second);
        }
        for (const auto& [ga, count] : ga_counts)
            if (count >= 2) c.ga_overlap = true;
        if (c.type_ids.size() > 1) ++multi_type;
        if (c.ga_overlap) ++ga_overlap;
        report.campaigns.push_back(std::move(c));
    }
    if (!report.campaigns.empty()) {
        report.multi_type_fraction =
            static_cast<double>(multi_type) / static_cast<double>(report.campaigns.size());
        report.ga_overlap_fraction =
            static_cast<double>(ga_overlap) / static_cast<double>(report.campaigns.size());
    }
    return report;
}

OverlapGraph campaign_overlap_graph(
    const CampaignReport& campaigns,
    const std::map<std::string, std::set<CryptoAddress>>& domain_addresses,
    const std::map<CryptoAddress, int>& address_cluster) {
    OverlapGraph graph;
    std::map<int, std::set<int>> chain_clusters_of;  // campaign -> blockchain clusters
    for (const auto& campaign : campaigns.campaigns) {
        graph.nodes.push_back(campaign.cluster_id);
        auto& clusters = chain_clusters_of[campaign.cluster_id];
        for (const auto& domain : campaign.domains) {
            auto it = domain_addresses.find(domain);
            if (it == domain_addresses.end()) continue;
            for (const auto& addr : it->second) {
                auto ct = address_cluster.find(addr);
                if (ct != address_cluster.end()) clusters.insert(ct->second);
            }
        }
    }

    std::map<int, int> parent;
    for (int n : graph.nodes) parent[n] = n;
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };

    for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < graph.nodes.size(); ++j) {
            int a = graph.nodes[i], b = graph.nodes[j];
            std::set<int> shared;
            std::set_intersection(chain_clusters_of[a].begin(), chain_clusters_of[a].end(),
                                  chain_clusters_of[b].begin(), chain_clusters_of[b].end(),
                                  std::inserter(shared, shared.begin()));
            if (shared.empty()) continue;
            graph.edges.push_back({a, b, std::move(shared)});
            parent[find(a)] = find(b);
        }
    }

    std::map<int, std::set<int>> comps;
    for (int n : graph.nodes) comps[find(n)].insert(n);
    for (auto& [root, nodes] : comps) graph.components.push_back(std::move(nodes));
    return graph;
}

ReuseStats reuse_stats(const std::map<int, std::set<int>>& type_clusters,
                       const std::map<std::pair<int, int>, std::size_t>& websites_per_type_cluster,
                       SharedDenominator denom) {
    ReuseStats out;
    for (const auto& [type, clusters] : type_clusters) {
        if (clusters.empty()) continue;  // absent, not zero
        std::size_t reused = 0;
        for (int c : clusters) {
            auto it = websites_per_type_cluster.find({type, c});
            if (it != websites_per_type_cluster.end() && it->second >= 2) ++reused;
        }
        out.reuse_fraction[type] =
            static_cast<double>(reused) / static_cast<double>(clusters.size());
    }
    for (auto a = type_clusters.begin(); a != type_clusters.end(); ++a) {
        for (auto b = std::next(a); b != type_clusters.end(); ++b) {
            if (a->second.empty() || b->second.empty()) continue;
            std::set<int> inter;
            std::set_intersection(a->second.begin(), a->second.end(), b->second.begin(),
                                  b->second.end(), std::inserter(inter, inter.begin()));
            double denominator;
            if (denom == SharedDenominator::Union) {
                std::set<int> uni = a->second;
                uni.insert(b->second.begin(), b->second.end());
                denominator = static_cast<double>(uni.size());
            } else {
                denominator = static_cast<double>(std::min(a->second.size(), b->second.size()));
            }
            out.shared_fraction[{a->first, b->first}] =
                static_cast<double>(inter.size()) / denominator;
        }
    }
    return out;
}

double Ecdf::at(long lag) const {
    double value = 0.0;
    for (const auto& [x, y] : points) {
        if (x > lag) break;
        value = y;
    }
    return value;
}

Ecdf registration_payment_ecdf(const std::map<std::string, Date>& registrations,
                               const std::vector<Payment>& payments) {
    std::vector<long> lags;
    Ecdf out;
    for (const auto& p : payments) {
        auto it = registrations.find(p.domain);
        if (it == registrations.end()) continue;  // no known registration date
        long lag = static_cast<long>(
            std::floor(static_cast<double>(p.when - midnight(it->second)) /
                       static_cast<double>(kSecondsPerDay)));
        if (lag < 0) {
            ++out.excluded_negative;
            continue;
        }
        lags.push_back(lag);
    }
    if (lags.empty()) throw NoIncludedPayments("no payments after registration");
    std::sort(lags.begin(), lags.end());
    out.included = lags.size();
    std::size_t i = 0;
    while (i < lags.size()) {
        std::size_t j = i;
        while (j < lags.size() && lags[j] == lags[i]) ++j;
        out.points.emplace_back(lags[i],
                                static_cast<double>(j) / static_cast<double>(lags.size()));
        i = j;
    }
    out.at7 = out.at(7);
    out.at14 = out.at(14);
    out.at30 = out.at(30);
    return out;
}

double keyword_trend(const std::map<std::string, Date>& registrations,
                     std::pair<Date, Date> window, const std::set<std::string>& keywords) {
    if (window.first > window.second) throw InvalidConfig("window start after end");
    std::size_t in_window = 0, matched = 0;
    for (const auto& [domain, date] : registrations) {
        if (date < window.first || date > window.second) continue;
        ++in_window;
        std::string lowered = domain;
        std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        for (const auto& kw : keywords) {
            std::string k = kw;
            std::transform(k.begin(), k.end(), k.begin(),
                           [](unsigned char c) { return std::tolower(c); });
            if (!k.empty() && lowered.find(k) != std::string::npos) {
                ++matched;
                break;
            }
        }
    }
    if (in_window == 0) throw EmptyWindow("no registrations in window");
    return static_cast<double>(matched) / static_cast<double>(in_window);
}

std::vector<InflowBucket> inflow_timeseries(const std::map<int, std::set<int>>& type_clusters,
                                            const std::vector<BlockchainCluster>& clusters,
                                            const std::vector<ChainTransaction>& txs,
                                            const PriceTable& prices,
                                            std::int64_t bucket_seconds) {
    if (bucket_seconds <= 0) throw InvalidConfig("bucket must be positive");

    // Clusters associated with more than one type are excluded outright.
    std::map<int, int> type_of_cluster;
    std::set<int> ambiguous;
    for (const auto& [type, cset] : type_clusters) {
        for (int c : cset) {
            auto [it, fresh] = type_of_cluster.try_emplace(c, type);
            if (!fresh && it->second != type) ambiguous.insert(c);
        }
    }
    for (int c : ambiguous) type_of_cluster.erase(c);

    auto index = chain::address_cluster_index(clusters);
    std::map<std::tuple<int, Timestamp, Chain>, std::pair<double, std::set<std::string>>> agg;
    for (const auto& tx : txs) {
        int from = -1;
        if (!tx.coinbase && !tx.inputs.empty()) {
            auto it = index.find(tx.inputs.front().address);
            if (it != index.end()) from = it->second;
        }
        for (const auto& slot : tx.outputs) {
            auto ci = index.find(slot.address);
            if (ci == index.end() || ci->second == from) continue;
            auto ti = type_of_cluster.find(ci->second);
            if (ti == type_of_cluster.end()) continue;
            Timestamp bucket =
                (tx.timestamp / bucket_seconds) * bucket_seconds -
                (tx.timestamp % bucket_seconds < 0 ? bucket_seconds : 0);
            auto& cell = agg[{ti->second, bucket, tx.chain}];
            cell.first += chain::to_usd(slot.value, tx.chain, date_of(tx.timestamp), prices);
            cell.second.insert(tx.tx_id);
        }
    }
    std::vector<InflowBucket> out;
    for (const auto& [key, cell] : agg) {
        auto [type, bucket, chain_id] = key;
        out.push_back({type, bucket, chain_id, cell.first, cell.second.size()});
    }
    return out;
}

}  // namespace scamtrace::analysis
