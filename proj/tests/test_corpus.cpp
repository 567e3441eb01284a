#include <doctest.h>

#include <random>

#include "scamtrace/corpus.hpp"
#include "scamtrace/errors.hpp"
#include "scamtrace/hash.hpp"

using namespace scamtrace;
using corpus::extract_addresses;

namespace {

bool has_btc(const std::set<CryptoAddress>& s, const std::string& a) {
    return s.count({Chain::Bitcoin, a}) > 0;
}

bool has_eth(const std::set<CryptoAddress>& s, const std::string& a) {
    return s.count({Chain::Ethereum, a}) > 0;
}

}  // namespace

TEST_CASE("keccak256 matches frozen vectors") {
    // Frozen from tests/oracles/eip55_oracle.py.
    CHECK(to_hex(keccak256(std::string("")).data(), 32) ==
          "c5d2460186f7233c927e7db2dcc703c0e500b653ca82273b7bfad8045d85a470");
    CHECK(to_hex(keccak256(std::string("abc")).data(), 32) ==
          "4e03657aea45a94fc7d47ba826c8d667c0d1e6e33a64a036ec44f58fa12d6c45");
}

TEST_CASE("base58check accepts and rejects the oracle vectors") {
    // Verdicts frozen from tests/oracles/base58check_oracle.py.
    auto one = extract_addresses("pay 1A1zP1eP5QGefi2DMPTfTL5SLmv7DivfNa today");
    REQUIRE(one.size() == 1);
    CHECK(has_btc(one, "1A1zP1eP5QGefi2DMPTfTL5SLmv7DivfNa"));

    CHECK(extract_addresses("pay 1A1zP1eP5QGefi2DMPTfTL5SLmv7DivfNb today").empty());
    CHECK(has_btc(extract_addresses("3J98t1WpEZ73CNmQviecrnyiWrnqRhWNLy"),
                  "3J98t1WpEZ73CNmQviecrnyiWrnqRhWNLy"));
    CHECK(extract_addresses("1BvBMSEYstWetqTFn5Au4m4GFg7xJaNVN3").empty());
    CHECK(has_btc(extract_addresses("1BvBMSEYstWetqTFn5Au4m4GFg7xJaNVN2"),
                  "1BvBMSEYstWetqTFn5Au4m4GFg7xJaNVN2"));
}

TEST_CASE("bech32 vectors") {
    CHECK(has_btc(extract_addresses("bc1qw508d6qejxtdg4y5r3zarvary0c5xw7kv8f3t4"),
                  "bc1qw508d6qejxtdg4y5r3zarvary0c5xw7kv8f3t4"));
    CHECK(extract_addresses("bc1qw508d6qejxtdg4y5r3zarvary0c5xw7kv8f3t5").empty());
}

TEST_CASE("eip55 vectors") {
    // Frozen from tests/oracles/eip55_oracle.py.
    auto upper = extract_addresses("0x52908400098527886E0F7030069857D2E4169EE7");
    REQUIRE(upper.size() == 1);
    CHECK(has_eth(upper, "0x52908400098527886e0f7030069857d2e4169ee7"));

    CHECK(has_eth(extract_addresses("0x5aAeb6053F3E94C9b9A09f33669435E7Ef1BeAed"),
                  "0x5aaeb6053f3e94c9b9a09f33669435e7ef1beaed"));
    CHECK(extract_addresses("0x5aAeb6053F3E94C9b9A09f33669435E7Ef1Beaed").empty());
    CHECK(has_eth(extract_addresses("0xfb6916095ca1df60bb79ce92ce3ea74c37c5d359"),
                  "0xfb6916095ca1df60bb79ce92ce3ea74c37c5d359"));
}

TEST_CASE("extract_addresses ignores plain text and embedded candidates") {
    CHECK(extract_addresses("send 100 coins now").empty());
    CHECK(extract_addresses("").empty());
    // Absorbed into a longer alphanumeric run: not a maximal token.
    CHECK(extract_addresses("x1A1zP1eP5QGefi2DMPTfTL5SLmv7DivfNa").empty());
    CHECK(extract_addresses("0x52908400098527886E0F7030069857D2E4169EE7f").empty());
    // Punctuation delimits.
    CHECK(extract_addresses("addr:1A1zP1eP5QGefi2DMPTfTL5SLmv7DivfNa.").size() == 1);
}

TEST_CASE("extract_addresses canonicalizes ethereum case variants equal") {
    auto a = extract_addresses("0x52908400098527886E0F7030069857D2E4169EE7");
    auto b = extract_addresses("0x52908400098527886e0f7030069857d2e4169ee7");
    CHECK(a == b);
}

TEST_CASE("extract_addresses is idempotent on its own output") {
    std::string text =
        "1A1zP1eP5QGefi2DMPTfTL5SLmv7DivfNa and "
        "0x5aAeb6053F3E94C9b9A09f33669435E7Ef1BeAed and "
        "bc1qw508d6qejxtdg4y5r3zarvary0c5xw7kv8f3t4";
    auto first = extract_addresses(text);
    std::string joined;
    for (const auto& a : first) joined += a.canonical + " ";
    CHECK(extract_addresses(joined) == first);
}

TEST_CASE("bitcoin addresses round-trip decode/encode") {
    for (const std::string addr : {"1A1zP1eP5QGefi2DMPTfTL5SLmv7DivfNa",
                                   "3J98t1WpEZ73CNmQviecrnyiWrnqRhWNLy",
                                   "1BvBMSEYstWetqTFn5Au4m4GFg7xJaNVN2"}) {
        auto payload = corpus::base58check_decode(addr);
        REQUIRE(payload.has_value());
        CHECK(corpus::base58check_encode(*payload) == addr);
    }
}

TEST_CASE("random strings never validate") {
    std::mt19937_64 rng(7);
    const std::string alnum = "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
    std::size_t accepted = 0;
    for (int i = 0; i < 10000; ++i) {
        std::size_t len = 26 + rng() % 17;
        std::string tok;
        for (std::size_t k = 0; k < len; ++k) tok += alnum[rng() % alnum.size()];
        accepted += extract_addresses(tok).size();
    }
    CHECK(accepted == 0);
}

TEST_CASE("analytics id extraction") {
    CHECK(corpus::extract_analytics_ids("ga('create','UA-1234567-1')") ==
          std::set<std::string>{"UA-1234567-1"});
    CHECK(corpus::extract_analytics_ids("").empty());
    CHECK(corpus::extract_analytics_ids("UA-1-2 then ua-1-2 again") ==
          std::set<std::string>{"UA-1-2"});
    CHECK(corpus::extract_analytics_ids("x UA-12-34 y UA-12-35") ==
          std::set<std::string>{"UA-12-34", "UA-12-35"});
}

TEST_CASE("email decomposition") {
    CHECK(corpus::decompose_email("Scam123@Mail.example") ==
          std::pair<std::string, std::string>{"scam123", "mail.example"});
    CHECK(corpus::decompose_email("a.b+c@sub.mail.example") ==
          std::pair<std::string, std::string>{"a.b+c", "sub.mail.example"});
    CHECK_THROWS_AS(corpus::decompose_email("nodomain@"), InvalidEmail);
    CHECK_THROWS_AS(corpus::decompose_email("no-at-sign"), InvalidEmail);
    CHECK_THROWS_AS(corpus::decompose_email("@nohost"), InvalidEmail);
    // last-@ rule
    CHECK(corpus::decompose_email("weird@local@Provider.example") ==
          std::pair<std::string, std::string>{"weird@local", "provider.example"});
}

TEST_CASE("parse_snapshot required and optional fields") {
    auto snap = corpus::parse_snapshot(
        R"({"domain":"A.Example","page_text":"hi","snapshot_time":"2018-07-01T00:00:00Z"})");
    CHECK(snap.domain == "a.example");
    CHECK(snap.addresses.empty());
    CHECK_FALSE(snap.ip.has_value());
    CHECK(snap.snapshot_time == 1530403200);

    CHECK_THROWS_AS(
        corpus::parse_snapshot(R"({"page_text":"x","snapshot_time":"2018-07-01T00:00:00Z"})"),
        MalformedRecord);
    CHECK_THROWS_AS(
        corpus::parse_snapshot(R"({"domain":"a","snapshot_time":"2018-07-01T00:00:00Z"})"),
        MalformedRecord);
    CHECK_THROWS_AS(
        corpus::parse_snapshot(R"({"domain":"a","page_text":"x","snapshot_time":"yesterday"})"),
        MalformedRecord);
    CHECK_THROWS_AS(corpus::parse_snapshot("not json"), MalformedRecord);
}

TEST_CASE("parse_snapshot extracts from page_text plus raw_html") {
    auto snap = corpus::parse_snapshot(
        R"({"domain":"a.example","page_text":"pay 1A1zP1eP5QGefi2DMPTfTL5SLmv7DivfNa",)"
        R"("snapshot_time":"2018-07-01T00:00:00Z",)"
        R"("raw_html":"<script>ga('create','UA-55-1'); var a='0xfb6916095ca1df60bb79ce92ce3ea74c37c5d359';</script>",)"
        R"("resource_urls":["http://cdn.example/s.gif","relative/path.png"],)"
        R"("ip":"5.10.0.7"})");
    CHECK(snap.addresses.size() == 2);
    CHECK(snap.analytics_ids == std::set<std::string>{"UA-55-1"});
    CHECK(snap.resource_urls == std::set<std::string>{"http://cdn.example/s.gif"});
    CHECK(snap.ip == "5.10.0.7");
}

TEST_CASE("shared_resource_pivot keeps only cross-host shared resources") {
    auto make = [](const std::string& domain, std::vector<std::string> urls) {
        WebsiteSnapshot s;
        s.domain = domain;
        s.resource_urls.insert(urls.begin(), urls.end());
        return s;
    };
    std::vector<WebsiteSnapshot> snaps = {
        make("a.example", {"http://img.example/spin.gif", "http://a.example/own.css"}),
        make("b.example", {"http://img.example/spin.gif", "http://b.example/own.css"}),
        make("c.example", {"http://other.example/x.png"}),
    };
    auto pivot = corpus::shared_resource_pivot(snaps, 2);
    REQUIRE(pivot.size() == 1);
    CHECK(pivot.at("http://img.example/spin.gif") ==
          std::set<std::string>{"a.example", "b.example"});

    for (const auto& [url, domains] : pivot) {
        CHECK(domains.size() >= 2);
        for (const auto& d : domains) {
            bool embeds = false;
            for (const auto& s : snaps)
                if (s.domain == d && s.resource_urls.count(url)) embeds = true;
            CHECK(embeds);
        }
    }
    CHECK_THROWS_AS(corpus::shared_resource_pivot(snaps, 1), InvalidConfig);
}

TEST_CASE("geolocate longest prefix") {
    corpus::GeoTable table;
    table.add("5.10.0.0/16", "MD");
    table.add("5.10.7.0/24", "RU");
    table.add("2001:db8::/32", "NL");
    CHECK(corpus::geolocate("5.10.0.7", table) == "MD");
    CHECK(corpus::geolocate("5.10.7.9", table) == "RU");
    CHECK_FALSE(corpus::geolocate("9.9.9.9", table).has_value());
    CHECK(corpus::geolocate("2001:db8::1", table) == "NL");
    CHECK_FALSE(corpus::geolocate("2001:db9::1", table).has_value());
    CHECK_THROWS_AS(corpus::geolocate("not-an-ip", table), MalformedIp);
    CHECK_THROWS_AS(table.add("nonsense", "XX"), InvalidConfig);
}

TEST_CASE("url_host strips scheme, port, userinfo") {
    CHECK(corpus::url_host("http://IMG.example:8080/a/b?q=1") == "img.example");
    CHECK(corpus::url_host("https://user@host.example/x") == "host.example");
    CHECK_FALSE(corpus::url_host("relative/path.png").has_value());
}
