#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "scamtrace/types.hpp"

// Snapshot/registration ingestion: address and analytics-ID extraction,
// registrant email decomposition, hotlinked-resource pivoting, geolocation.
namespace scamtrace::corpus {

// Base58Check payload round-trip, exposed for the address property tests.
std::optional<std::vector<std::uint8_t>> base58check_decode(const std::string& s);
std::string base58check_encode(const std::vector<std::uint8_t>& payload);

bool bech32_verify(const std::string& s);

// Scans for maximal alphanumeric tokens and keeps the ones that pass the
// chain-specific checksums (Base58Check / Bech32 / EIP-55).
std::set<CryptoAddress> extract_addresses(const std::string& text);

// UA-<digits>-<digits> tracker ids, uppercased and deduplicated.
std::set<std::string> extract_analytics_ids(const std::string& html);

// Splits at the last '@' and lowercases both sides. Throws InvalidEmail.
std::pair<std::string, std::string> decompose_email(const std::string& email);

// Throws MalformedRecord on a record missing domain/page_text or with an
// unparseable snapshot_time. `record_json` must be one JSON object.
WebsiteSnapshot parse_snapshot(const std::string& record_json);

// Resources hotlinked from a different host and shared by >= min_group
// distinct domains.
std::map<std::string, std::set<std::string>> shared_resource_pivot(
    const std::vector<WebsiteSnapshot>& snapshots, std::size_t min_group);

struct GeoTable {
    struct Entry {
        bool ipv6 = false;
        std::array<std::uint8_t, 16> prefix{};
        int prefix_len = 0;
        std::string country;
    };
    std::vector<Entry> entries;

    void add(const std::string& cidr, const std::string& country);
};

// Longest-prefix country lookup; nullopt when no prefix matches.
std::optional<std::string> geolocate(const std::string& ip, const GeoTable& table);

// Host of an absolute URL, lowercased; nullopt when the URL has no host.
std::optional<std::string> url_host(const std::string& url);

}  // namespace scamtrace::corpus
