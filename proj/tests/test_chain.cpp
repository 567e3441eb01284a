#include <doctest.h>

#include <random>

#include "reference.hpp"
#include "scamtrace/chain.hpp"
#include "scamtrace/errors.hpp"

using namespace scamtrace;

namespace {

CryptoAddress btc(const std::string& a) { return {Chain::Bitcoin, a}; }
CryptoAddress eth(const std::string& a) { return {Chain::Ethereum, a}; }

ChainTransaction make_tx(std::string id, Chain chain, Timestamp ts,
                         std::vector<TxSlot> in, std::vector<TxSlot> out,
                         bool coinbase = false) {
    ChainTransaction tx;
    tx.tx_id = std::move(id);
    tx.chain = chain;
    tx.timestamp = ts;
    tx.coinbase = coinbase;
    tx.inputs = std::move(in);
    tx.outputs = std::move(out);
    return tx;
}

std::vector<std::set<CryptoAddress>> address_sets(const std::vector<BlockchainCluster>& cs) {
    std::vector<std::set<CryptoAddress>> out;
    for (const auto& c : cs) out.push_back(c.addresses);
    return out;
}

}  // namespace

TEST_CASE("common-spend merges transitively") {
    std::vector<ChainTransaction> txs = {
        make_tx("t1", Chain::Bitcoin, 100, {{btc("A"), 1}, {btc("B"), 1}}, {{btc("X"), 2}}),
        make_tx("t2", Chain::Bitcoin, 200, {{btc("B"), 1}, {btc("C"), 1}}, {{btc("Y"), 2}}),
    };
    auto clusters = chain::build_clusters(txs);
    // {A,B,C} plus singletons {X},{Y}
    CHECK(clusters.size() == 3);
    CHECK(clusters[0].addresses == std::set<CryptoAddress>{btc("A"), btc("B"), btc("C")});

    std::vector<ChainTransaction> disjoint = {
        make_tx("t1", Chain::Bitcoin, 100, {{btc("A"), 1}}, {{btc("X"), 1}}),
        make_tx("t2", Chain::Bitcoin, 200, {{btc("B"), 1}}, {{btc("Y"), 1}}),
    };
    CHECK(chain::build_clusters(disjoint).size() == 4);
}

TEST_CASE("ethereum addresses stay singletons") {
    std::vector<ChainTransaction> txs = {
        make_tx("e1", Chain::Ethereum, 100, {{eth("0xaa"), 5}}, {{eth("0xbb"), 5}}),
        make_tx("e2", Chain::Ethereum, 200, {{eth("0xaa"), 5}}, {{eth("0xcc"), 5}}),
    };
    auto clusters = chain::build_clusters(txs);
    CHECK(clusters.size() == 3);
    for (const auto& c : clusters) CHECK(c.addresses.size() == 1);
}

TEST_CASE("coinbase inputs do not merge") {
    std::vector<ChainTransaction> txs = {
        make_tx("cb", Chain::Bitcoin, 100, {{btc("A"), 0}, {btc("B"), 0}}, {{btc("M"), 50}},
                true),
    };
    CHECK(chain::build_clusters(txs).size() == 3);
}

TEST_CASE("build_clusters equals closure oracle on random sets") {
    std::mt19937_64 rng(2024);
    for (int round = 0; round < 60; ++round) {
        std::vector<ChainTransaction> txs;
        std::size_t n_tx = 2 + rng() % 40;
        for (std::size_t t = 0; t < n_tx; ++t) {
            std::vector<TxSlot> ins, outs;
            std::size_t n_in = 1 + rng() % 3, n_out = 1 + rng() % 3;
            for (std::size_t i = 0; i < n_in; ++i)
                ins.push_back({btc("a" + std::to_string(rng() % 25)), 1});
            for (std::size_t o = 0; o < n_out; ++o)
                outs.push_back({btc("a" + std::to_string(rng() % 25)), 1});
            txs.push_back(make_tx("t" + std::to_string(t), Chain::Bitcoin,
                                  static_cast<Timestamp>(t), std::move(ins), std::move(outs)));
        }
        auto got = address_sets(chain::build_clusters(txs));
        auto want = reference::closure_clusters(txs);
        REQUIRE(got == want);
    }
}

TEST_CASE("build_clusters partitions the address universe") {
    std::vector<ChainTransaction> txs = {
        make_tx("t1", Chain::Bitcoin, 1, {{btc("A"), 1}, {btc("B"), 1}},
                {{btc("C"), 1}, {btc("A"), 1}}),
        make_tx("t2", Chain::Ethereum, 2, {{eth("0xaa"), 1}}, {{eth("0xbb"), 1}}),
    };
    auto clusters = chain::build_clusters(txs);
    std::set<CryptoAddress> seen;
    std::size_t total = 0;
    for (const auto& c : clusters) {
        total += c.addresses.size();
        seen.insert(c.addresses.begin(), c.addresses.end());
    }
    CHECK(seen.size() == total);  // disjoint
    CHECK(seen == std::set<CryptoAddress>{btc("A"), btc("B"), btc("C"), eth("0xaa"),
                                          eth("0xbb")});
}

TEST_CASE("build_clusters is input-order invariant") {
    std::vector<ChainTransaction> txs = {
        make_tx("t1", Chain::Bitcoin, 1, {{btc("A"), 1}, {btc("B"), 1}}, {{btc("X"), 1}}),
        make_tx("t2", Chain::Bitcoin, 2, {{btc("C"), 1}, {btc("B"), 1}}, {{btc("Y"), 1}}),
    };
    auto forward = address_sets(chain::build_clusters(txs));
    std::reverse(txs.begin(), txs.end());
    std::reverse(txs.front().inputs.begin(), txs.front().inputs.end());
    auto backward = address_sets(chain::build_clusters(txs));
    CHECK(forward == backward);
}

TEST_CASE("change heuristic") {
    // F is fresh (never seen before, never an output later); P is reused.
    std::vector<ChainTransaction> txs = {
        make_tx("t0", Chain::Bitcoin, 10, {{btc("Z"), 5}}, {{btc("P"), 5}}),
        make_tx("t1", Chain::Bitcoin, 20, {{btc("A"), 9}}, {{btc("F"), 4}, {btc("P"), 5}}),
    };
    auto base = chain::build_clusters(txs);

    SUBCASE("disabled is identity") {
        auto same = chain::apply_change_heuristic(txs, base, false);
        CHECK(address_sets(same) == address_sets(base));
    }
    SUBCASE("fresh single output merges into input cluster") {
        auto merged = chain::apply_change_heuristic(txs, base, true);
        bool found = false;
        for (const auto& c : merged)
            if (c.addresses.count(btc("A"))) {
                CHECK(c.addresses.count(btc("F")));
                found = true;
            }
        CHECK(found);
    }
    SUBCASE("two fresh outputs are ambiguous, no merge") {
        std::vector<ChainTransaction> amb = {
            make_tx("t1", Chain::Bitcoin, 20, {{btc("A"), 9}}, {{btc("F"), 4}, {btc("G"), 5}}),
        };
        auto base2 = chain::build_clusters(amb);
        auto merged = chain::apply_change_heuristic(amb, base2, true);
        CHECK(address_sets(merged) == address_sets(base2));
    }
    SUBCASE("never splits, only merges") {
        auto merged = chain::apply_change_heuristic(txs, base, true);
        for (const auto& before : base) {
            bool contained = false;
            for (const auto& after : merged) {
                if (std::includes(after.addresses.begin(), after.addresses.end(),
                                  before.addresses.begin(), before.addresses.end()))
                    contained = true;
            }
            CHECK(contained);
        }
    }
}

TEST_CASE("custodial filter") {
    PriceTable prices;
    for (Date d = 17000; d < 17400; ++d) prices.usd_per_coin[{Chain::Bitcoin, d}] = 10000.0;
    Timestamp ts = midnight(17100);

    std::vector<ChainTransaction> txs = {
        make_tx("t1", Chain::Bitcoin, ts, {{btc("ex1"), 100000000}, {btc("ex2"), 0}},
                {{btc("s1"), 100000000}}),
        make_tx("t2", Chain::Bitcoin, ts, {{btc("u1"), 1000}, {btc("u2"), 0}},
                {{btc("s2"), 1000}}),
        // 11,000 BTC received = $110M at the flat price, over the threshold
        make_tx("t3", Chain::Bitcoin, ts, {{btc("w1"), 1}},
                {{btc("whale"), 1100000000000}}),
    };
    auto clusters = chain::build_clusters(txs);
    chain::LabelMap labels;
    labels[btc("ex1")] = {"BigExchange", Category::FiatExchange, std::string("US")};
    chain::annotate_clusters(clusters, labels);

    auto result = chain::filter_custodial(clusters, labels, {10000, 1e8}, txs, prices);
    CHECK(result.kept.size() + result.removed.size() == clusters.size());

    auto contains = [](const std::vector<BlockchainCluster>& cs, const CryptoAddress& a) {
        for (const auto& c : cs)
            if (c.addresses.count(a)) return true;
        return false;
    };
    CHECK(contains(result.removed, btc("ex1")));   // labeled custodial
    CHECK(contains(result.kept, btc("u1")));       // small unlabeled
    CHECK(contains(result.removed, btc("whale"))); // 11,000 BTC received > $100M
    for (const auto& c : result.kept) {
        for (const auto& addr : c.addresses) {
            auto it = labels.find(addr);
            if (it != labels.end()) CHECK_FALSE(is_custodial_category(it->second.category));
        }
    }
}

TEST_CASE("oversize cluster is removed") {
    std::vector<ChainTransaction> txs;
    std::vector<TxSlot> ins;
    for (int i = 0; i < 30; ++i) ins.push_back({btc("m" + std::to_string(i)), 1});
    txs.push_back(make_tx("t", Chain::Bitcoin, 0, std::move(ins), {{btc("out"), 30}}));
    auto clusters = chain::build_clusters(txs);
    auto result = chain::filter_custodial(clusters, {}, {20, 1e18}, txs, {});
    bool removed_big = false;
    for (const auto& c : result.removed)
        if (c.addresses.size() == 30) removed_big = true;
    CHECK(removed_big);
}

TEST_CASE("cluster size stats nearest-rank") {
    auto with_sizes = [](std::vector<std::size_t> sizes) {
        std::vector<BlockchainCluster> cs;
        int id = 0;
        for (auto s : sizes) {
            BlockchainCluster c;
            c.cluster_id = id++;
            for (std::size_t i = 0; i < s; ++i)
                c.addresses.insert(btc("a" + std::to_string(id) + "_" + std::to_string(i)));
            cs.push_back(std::move(c));
        }
        return cs;
    };
    auto s1 = chain::cluster_size_stats(with_sizes({1, 2, 3, 4}));
    CHECK(s1.p50 == 2);
    auto s2 = chain::cluster_size_stats(with_sizes({1, 1, 1}));
    CHECK(s2.p50 == 1);
    CHECK(s2.p75 == 1);
    CHECK(s2.p90 == 1);
    std::vector<std::size_t> hundred;
    for (std::size_t i = 1; i <= 100; ++i) hundred.push_back(i);
    CHECK(chain::cluster_size_stats(with_sizes(hundred)).p90 == 90);
    CHECK_THROWS_AS(chain::cluster_size_stats({}), EmptyInput);
}

TEST_CASE("to_usd lookback") {
    PriceTable prices;
    prices.usd_per_coin[{Chain::Ethereum, 17700}] = 150.0;
    // 2 ETH at 150
    CHECK(chain::to_usd(Amount(2) * Amount(1000000000000000000ULL), Chain::Ethereum, 17700,
                        prices) == doctest::Approx(300.0));
    CHECK(chain::to_usd(0, Chain::Ethereum, 17700, prices) == 0.0);
    // nearest earlier within 7 days
    CHECK(chain::to_usd(Amount(1000000000000000000ULL), Chain::Ethereum, 17707, prices) ==
          doctest::Approx(150.0));
    CHECK_THROWS_AS(
        chain::to_usd(Amount(1000000000000000000ULL), Chain::Ethereum, 17710, prices),
        MissingPrice);
}
