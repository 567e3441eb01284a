#include <doctest.h>

#include "reference.hpp"
#include "scamtrace/analysis.hpp"
#include "scamtrace/corpus.hpp"
#include "scamtrace/errors.hpp"
#include "scamtrace/io.hpp"
#include "scamtrace/synth.hpp"
#include "scamtrace/textfeat.hpp"
#include "scamtrace/trace.hpp"

using namespace scamtrace;
using synth::SynthConfig;

namespace {

std::vector<WebsiteSnapshot> parse_all(const synth::Ecosystem& eco) {
    std::vector<WebsiteSnapshot> out;
    for (const auto& rec : eco.snapshots) out.push_back(corpus::parse_snapshot(rec.dump()));
    return out;
}

chain::LabelMap label_map(const synth::Ecosystem& eco) {
    chain::LabelMap out;
    for (const auto& row : eco.labels) out[row.address] = row.label;
    return out;
}

}  // namespace

TEST_CASE("generation is deterministic in the seed") {
    SynthConfig cfg;
    auto a = synth::generate_ecosystem(cfg);
    auto b = synth::generate_ecosystem(cfg);
    REQUIRE(a.snapshots.size() == b.snapshots.size());
    for (std::size_t i = 0; i < a.snapshots.size(); ++i)
        CHECK(a.snapshots[i].dump() == b.snapshots[i].dump());
    CHECK(a.txs.size() == b.txs.size());
    CHECK(io::ground_truth_to_json(a.truth).dump() == io::ground_truth_to_json(b.truth).dump());

    SynthConfig other = cfg;
    other.seed = 2;
    auto c = synth::generate_ecosystem(other);
    CHECK(a.snapshots[0].dump() != c.snapshots[0].dump());
}

TEST_CASE("generated transactions satisfy chain invariants") {
    SynthConfig cfg;
    cfg.outlier_sites = 2;
    auto eco = synth::generate_ecosystem(cfg);
    CHECK_FALSE(eco.txs.empty());
    for (const auto& tx : eco.txs) {
        if (tx.chain == Chain::Ethereum) {
            CHECK(tx.inputs.size() == 1);
            CHECK(tx.outputs.size() == 1);
        }
        if (tx.chain == Chain::Bitcoin && !tx.coinbase) CHECK_FALSE(tx.inputs.empty());
        CHECK(eco.truth.tx_role.count(tx.tx_id) == 1);
    }
}

TEST_CASE("every generated snapshot parses and advertises its address") {
    auto eco = synth::generate_ecosystem(SynthConfig{});
    auto snaps = parse_all(eco);
    for (const auto& s : snaps) {
        REQUIRE(eco.truth.site_type.count(s.domain) == 1);
        CHECK(s.addresses.size() == 1);
    }
}

TEST_CASE("planted owner pools are recovered by common-spend clustering") {
    auto eco = synth::generate_ecosystem(SynthConfig{});
    auto clusters = chain::build_clusters(eco.txs);
    auto index = chain::address_cluster_index(clusters);

    // For Bitcoin owners: all addresses of one owner in one cluster.
    std::map<int, std::set<int>> owner_clusters;
    for (const auto& [addr, owner] : eco.truth.address_owner) {
        if (addr.chain != Chain::Bitcoin) continue;
        owner_clusters[owner].insert(index.at(addr));
    }
    for (const auto& [owner, cs] : owner_clusters) CHECK(cs.size() == 1);
    // ...and distinct owners get distinct clusters.
    std::set<int> all;
    for (const auto& [owner, cs] : owner_clusters) all.insert(*cs.begin());
    CHECK(all.size() == owner_clusters.size());
}

TEST_CASE("noise-free default recovers types and campaigns exactly") {
    auto eco = synth::generate_ecosystem(SynthConfig{});
    auto snaps = parse_all(eco);

    auto report = analysis::cluster_types(snaps, textfeat::default_stop_words(), 5);
    std::vector<int> truth;
    for (const auto& s : snaps) truth.push_back(eco.truth.site_type.at(s.domain));
    auto eval = synth::evaluate(report.assignment, truth);
    CHECK(eval.ari == doctest::Approx(1.0));
    CHECK(eval.pairwise_f1 == doctest::Approx(1.0));
}

TEST_CASE("victim conservation through source tracing") {
    SynthConfig cfg;
    cfg.scam_to_scam_fraction = 0.2;
    auto eco = synth::generate_ecosystem(cfg);
    auto snaps = parse_all(eco);
    auto labels = label_map(eco);
    auto clusters = chain::build_clusters(eco.txs);
    auto index = chain::address_cluster_index(clusters);

    std::set<int> scam_set;
    for (const auto& s : snaps)
        for (const auto& a : s.addresses)
            if (index.count(a)) scam_set.insert(index.at(a));

    trace::TraceParams params{1000, 0.0};
    auto attr = trace::trace_sources(scam_set, clusters, eco.txs, labels, eco.prices, params);

    double exchange_usd = 0, scam_usd = 0;
    for (const auto& row : attr.rows) {
        if (is_exchange_category(row.category)) exchange_usd += row.usd;
        if (row.category == Category::Scam) scam_usd += row.usd;
    }
    CHECK(exchange_usd == doctest::Approx(eco.truth.victim_usd_total).epsilon(1e-6));
    CHECK(scam_usd == doctest::Approx(eco.truth.seed_usd_total).epsilon(1e-6));
    CHECK(attr.unattributed_usd == doctest::Approx(0.0));

    // scam-to-scam empty when the fraction is zero
    SynthConfig no_seed;
    no_seed.scam_to_scam_fraction = 0.0;
    auto eco2 = synth::generate_ecosystem(no_seed);
    auto labels2 = label_map(eco2);
    auto clusters2 = chain::build_clusters(eco2.txs);
    auto index2 = chain::address_cluster_index(clusters2);
    std::set<int> scams2;
    for (const auto& rec : eco2.snapshots) {
        auto s = corpus::parse_snapshot(rec.dump());
        for (const auto& a : s.addresses)
            if (index2.count(a)) scams2.insert(index2.at(a));
    }
    auto attr2 =
        trace::trace_sources(scams2, clusters2, eco2.txs, labels2, eco2.prices, params);
    CHECK(trace::detect_scam_to_scam(attr2).empty());
}

TEST_CASE("evaluate metrics") {
    clusterer::ClusterAssignment perfect;
    perfect.labels = {0, 0, 1, 1, -1};
    std::vector<int> truth = {0, 0, 1, 1, -1};
    auto e = synth::evaluate(perfect, truth);
    CHECK(e.ari == doctest::Approx(1.0));
    CHECK(e.pairwise_f1 == doctest::Approx(1.0));
    CHECK(e.noise_precision == doctest::Approx(1.0));
    CHECK(e.noise_recall == doctest::Approx(1.0));

    clusterer::ClusterAssignment all_noise;
    all_noise.labels = {-1, -1, -1, -1};
    auto e2 = synth::evaluate(all_noise, {0, 0, 1, 1});
    CHECK(e2.pairwise_f1 == 0.0);
    CHECK(e2.noise_recall == doctest::Approx(1.0));  // no planted outliers

    CHECK_THROWS_AS(synth::evaluate(perfect, {0, 1}), LengthMismatch);
}

TEST_CASE("random assignments score near-zero ARI") {
    std::mt19937_64 rng(31);
    double total = 0;
    int runs = 100;
    for (int i = 0; i < runs; ++i) {
        clusterer::ClusterAssignment a, b;
        for (int k = 0; k < 200; ++k) {
            a.labels.push_back(static_cast<int>(rng() % 4));
            b.labels.push_back(static_cast<int>(rng() % 4));
        }
        total += clusterer::adjusted_rand_index(a, b);
    }
    CHECK(std::abs(total / runs) < 0.05);
}

TEST_CASE("config validation") {
    SynthConfig bad;
    bad.token_noise = 1.5;
    CHECK_THROWS_AS(synth::generate_ecosystem(bad), InvalidConfig);
    SynthConfig empty_mix;
    empty_mix.cashout_mix = {{Category::Gambling, 0.0}};
    CHECK_THROWS_AS(synth::generate_ecosystem(empty_mix), InvalidConfig);
    SynthConfig bad_range;
    bad_range.sites_per_campaign = {5, 3};
    CHECK_THROWS_AS(synth::generate_ecosystem(bad_range), InvalidConfig);
}
