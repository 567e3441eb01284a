#include "scamtrace/corpus.hpp"

#include <arpa/inet.h>

#include <algorithm>
#include <cctype>
#include <regex>

#include <nlohmann/json.hpp>

#include "scamtrace/errors.hpp"
#include "scamtrace/hash.hpp"

namespace scamtrace::corpus {

namespace {

const std::string kBase58Alphabet = "123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz";

int base58_index(char c) {
    auto pos = kBase58Alphabet.find(c);
    return pos == std::string::npos ? -1 : static_cast<int>(pos);
}

bool is_hex(char c) {
    return std::isdigit(static_cast<unsigned char>(c)) || (c >= 'a' && c <= 'f') ||
           (c >= 'A' && c <= 'F');
}

// -- Bech32 (classic constant 1), per BIP-173 -------------------------------

const std::string kBech32Charset = "qpzry9x8gf2tvdw0s3jn54khce6mua7l";

std::uint32_t bech32_polymod(const std::vector<std::uint8_t>& values) {
    static const std::uint32_t gen[5] = {0x3b6a57b2, 0x26508e6d, 0x1ea119fa, 0x3d4233dd,
                                         0x2a1462b3};
    std::uint32_t chk = 1;
    for (auto v : values) {
        std::uint32_t top = chk >> 25;
        chk = ((chk & 0x1ffffff) << 5) ^ v;
        for (int i = 0; i < 5; ++i)
            if ((top >> i) & 1) chk ^= gen[i];
    }
    return chk;
}

}  // namespace

std::optional<std::vector<std::uint8_t>> base58check_decode(const std::string& s) {
    std::vector<std::uint8_t> num;  // big-endian base-256
    for (char c : s) {
        int digit = base58_index(c);
        if (digit < 0) return std::nullopt;
        int carry = digit;
        for (auto it = num.rbegin(); it != num.rend(); ++it) {
            carry += *it * 58;
            *it = static_cast<std::uint8_t>(carry & 0xff);
            carry >>= 8;
        }
        while (carry > 0) {
            num.insert(num.begin(), static_cast<std::uint8_t>(carry & 0xff));
            carry >>= 8;
        }
    }
    std::size_t leading_ones = 0;
    for (char c : s) {
        if (c != '1') break;
        ++leading_ones;
    }
    std::vector<std::uint8_t> raw(leading_ones, 0);
    raw.insert(raw.end(), num.begin(), num.end());
    if (raw.size() != 25) return std::nullopt;
    auto digest = sha256d(raw.data(), 21);
    if (!std::equal(raw.begin() + 21, raw.end(), digest.begin())) return std::nullopt;
    return std::vector<std::uint8_t>(raw.begin(), raw.begin() + 21);
}

std::string base58check_encode(const std::vector<std::uint8_t>& payload) {
    std::vector<std::uint8_t> raw = payload;
    auto digest = sha256d(raw.data(), raw.size());
    raw.insert(raw.end(), digest.begin(), digest.begin() + 4);

    std::vector<std::uint8_t> digits;  // big-endian base-58
    for (std::uint8_t byte : raw) {
        int carry = byte;
        for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
            carry += *it << 8;
            *it = static_cast<std::uint8_t>(carry % 58);
            carry /= 58;
        }
        while (carry > 0) {
            digits.insert(digits.begin(), static_cast<std::uint8_t>(carry % 58));
            carry /= 58;
        }
    }
    std::string out;
    for (std::uint8_t byte : raw) {
        if (byte != 0) break;
        out += '1';
    }
    for (auto d : digits) out += kBase58Alphabet[d];
    return out;
}

bool bech32_verify(const std::string& s) {
    if (s.size() > 90) return false;
    auto sep = s.rfind('1');
    if (sep == std::string::npos || sep < 1 || sep + 7 > s.size()) return false;
    std::vector<std::uint8_t> values;
    for (std::size_t i = 0; i < sep; ++i) {
        char c = s[i];
        if (c < 33 || c > 126 || std::isupper(static_cast<unsigned char>(c))) return false;
        values.push_back(static_cast<std::uint8_t>(c) >> 5);
    }
    values.push_back(0);
    for (std::size_t i = 0; i < sep; ++i)
        values.push_back(static_cast<std::uint8_t>(s[i]) & 31);
    for (std::size_t i = sep + 1; i < s.size(); ++i) {
        auto pos = kBech32Charset.find(s[i]);
        if (pos == std::string::npos) return false;
        values.push_back(static_cast<std::uint8_t>(pos));
    }
    return bech32_polymod(values) == 1;
}

namespace {

bool validate_eip55(const std::string& hexpart) {
    bool has_upper = false, has_lower = false;
    for (char c : hexpart) {
        if (c >= 'a' && c <= 'f') has_lower = true;
        if (c >= 'A' && c <= 'F') has_upper = true;
    }
    if (!has_upper || !has_lower) return true;  // uniform case: no checksum encoded
    std::string lowered = hexpart;
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    auto digest = keccak256(lowered);
    for (std::size_t i = 0; i < 40; ++i) {
        char c = hexpart[i];
        if (!std::isalpha(static_cast<unsigned char>(c))) continue;
        unsigned nibble = (digest[i / 2] >> (i % 2 ? 0 : 4)) & 0xf;
        bool want_upper = nibble >= 8;
        if (std::isupper(static_cast<unsigned char>(c)) != want_upper) return false;
    }
    return true;
}

std::optional<CryptoAddress> classify_token(const std::string& tok) {
    if (tok.size() == 42 && tok[0] == '0' && tok[1] == 'x' &&
        std::all_of(tok.begin() + 2, tok.end(), is_hex)) {
        if (!validate_eip55(tok.substr(2))) return std::nullopt;
        std::string canonical = tok;
        std::transform(canonical.begin(), canonical.end(), canonical.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        return CryptoAddress{Chain::Ethereum, canonical};
    }
    if (tok.size() > 3 && tok.compare(0, 3, "bc1") == 0 && bech32_verify(tok))
        return CryptoAddress{Chain::Bitcoin, tok};
    if (tok.size() >= 26 && tok.size() <= 35 && (tok[0] == '1' || tok[0] == '3') &&
        base58check_decode(tok))
        return CryptoAddress{Chain::Bitcoin, tok};
    return std::nullopt;
}

}  // namespace

std::set<CryptoAddress> extract_addresses(const std::string& text) {
    std::set<CryptoAddress> out;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!std::isalnum(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && std::isalnum(static_cast<unsigned char>(text[j]))) ++j;
        if (auto addr = classify_token(text.substr(i, j - i))) out.insert(*addr);
        i = j;
    }
    return out;
}

std::set<std::string> extract_analytics_ids(const std::string& html) {
    static const std::regex ua_re("[Uu][Aa]-[0-9]+-[0-9]+");
    std::set<std::string> out;
    for (auto it = std::sregex_iterator(html.begin(), html.end(), ua_re);
         it != std::sregex_iterator(); ++it) {
        std::string id = it->str();
        id[0] = 'U';
        id[1] = 'A';
        out.insert(std::move(id));
    }
    return out;
}

std::pair<std::string, std::string> decompose_email(const std::string& email) {
    auto at = email.rfind('@');
    if (at == std::string::npos || at == 0 || at + 1 == email.size())
        throw InvalidEmail("not an email address: " + email);
    auto lower = [](std::string s) {
        std::transform(s.begin(), s.end(), s.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        return s;
    };
    return {lower(email.substr(0, at)), lower(email.substr(at + 1))};
}

namespace {

std::string normalize_domain(std::string d) {
    std::transform(d.begin(), d.end(), d.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (auto pos = d.find("://"); pos != std::string::npos) d = d.substr(pos + 3);
    if (auto pos = d.find('/'); pos != std::string::npos) d = d.substr(0, pos);
    return d;
}

}  // namespace

WebsiteSnapshot parse_snapshot(const std::string& record_json) {
    nlohmann::json rec;
    try {
        rec = nlohmann::json::parse(record_json);
    } catch (const nlohmann::json::exception& e) {
        throw MalformedRecord(std::string("invalid JSON: ") + e.what());
    }
    if (!rec.is_object()) throw MalformedRecord("snapshot record is not an object");
    if (!rec.contains("domain") || !rec["domain"].is_string())
        throw MalformedRecord("snapshot missing domain");
    if (!rec.contains("page_text") || !rec["page_text"].is_string())
        throw MalformedRecord("snapshot missing page_text");
    if (!rec.contains("snapshot_time") || !rec["snapshot_time"].is_string())
        throw MalformedRecord("snapshot missing snapshot_time");

    WebsiteSnapshot snap;
    snap.domain = normalize_domain(rec["domain"].get<std::string>());
    if (snap.domain.empty()) throw MalformedRecord("snapshot has empty domain");
    auto ts = parse_timestamp(rec["snapshot_time"].get<std::string>());
    if (!ts) throw MalformedRecord("unparseable snapshot_time: " +
                                   rec["snapshot_time"].get<std::string>());
    snap.snapshot_time = *ts;
    snap.page_text = rec["page_text"].get<std::string>();
    if (rec.contains("raw_html") && rec["raw_html"].is_string())
        snap.raw_html = rec["raw_html"].get<std::string>();
    if (rec.contains("ip") && rec["ip"].is_string() && !rec["ip"].get<std::string>().empty())
        snap.ip = rec["ip"].get<std::string>();
    if (rec.contains("server_country") && rec["server_country"].is_string() &&
        !rec["server_country"].get<std::string>().empty())
        snap.server_country = rec["server_country"].get<std::string>();
    if (rec.contains("type_label") && rec["type_label"].is_string() &&
        !rec["type_label"].get<std::string>().empty())
        snap.type_label = rec["type_label"].get<std::string>();
    if (rec.contains("resource_urls") && rec["resource_urls"].is_array()) {
        for (const auto& u : rec["resource_urls"]) {
            if (!u.is_string()) continue;
            auto url = u.get<std::string>();
            if (url_host(url)) snap.resource_urls.insert(url);
        }
    }
    snap.addresses = extract_addresses(snap.page_text + snap.raw_html);
    snap.analytics_ids = extract_analytics_ids(snap.raw_html);
    return snap;
}

std::optional<std::string> url_host(const std::string& url) {
    auto scheme = url.find("://");
    if (scheme == std::string::npos) return std::nullopt;
    auto start = scheme + 3;
    auto end = url.find_first_of("/?#", start);
    std::string authority = url.substr(start, end == std::string::npos ? std::string::npos
                                                                       : end - start);
    if (auto at = authority.rfind('@'); at != std::string::npos)
        authority = authority.substr(at + 1);
    if (!authority.empty() && authority[0] != '[') {  // [v6] hosts keep their brackets
        if (auto colon = authority.find(':'); colon != std::string::npos)
            authority = authority.substr(0, colon);
    }
    if (authority.empty()) return std::nullopt;
    std::transform(authority.begin(), authority.end(), authority.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return authority;
}

std::map<std::string, std::set<std::string>> shared_resource_pivot(
    const std::vector<WebsiteSnapshot>& snapshots, std::size_t min_group) {
    if (min_group < 2) throw InvalidConfig("min_group must be >= 2");
    std::map<std::string, std::set<std::string>> by_url;
    for (const auto& snap : snapshots) {
        for (const auto& url : snap.resource_urls) {
            auto host = url_host(url);
            if (!host || *host == snap.domain) continue;  // not a hotlink
            by_url[url].insert(snap.domain);
        }
    }
    std::erase_if(by_url, [&](const auto& kv) { return kv.second.size() < min_group; });
    return by_url;
}

namespace {

struct ParsedIp {
    bool ipv6 = false;
    std::array<std::uint8_t, 16> bytes{};
};

std::optional<ParsedIp> parse_ip(const std::string& s) {
    ParsedIp out;
    if (inet_pton(AF_INET, s.c_str(), out.bytes.data()) == 1) return out;
    if (inet_pton(AF_INET6, s.c_str(), out.bytes.data()) == 1) {
        out.ipv6 = true;
        return out;
    }
    return std::nullopt;
}

bool prefix_matches(const std::array<std::uint8_t, 16>& addr,
                    const std::array<std::uint8_t, 16>& prefix, int bits) {
    int full = bits / 8;
    if (!std::equal(addr.begin(), addr.begin() + full, prefix.begin())) return false;
    int rem = bits % 8;
    if (rem == 0) return true;
    std::uint8_t mask = static_cast<std::uint8_t>(0xff << (8 - rem));
    return (addr[full] & mask) == (prefix[full] & mask);
}

}  // namespace

void GeoTable::add(const std::string& cidr, const std::string& country) {
    auto slash = cidr.find('/');
    if (slash == std::string::npos) throw InvalidConfig("bad CIDR: " + cidr);
    auto ip = parse_ip(cidr.substr(0, slash));
    if (!ip) throw InvalidConfig("bad CIDR: " + cidr);
    int len = 0;
    try {
        len = std::stoi(cidr.substr(slash + 1));
    } catch (...) {
        throw InvalidConfig("bad CIDR: " + cidr);
    }
    int max_len = ip->ipv6 ? 128 : 32;
    if (len < 0 || len > max_len) throw InvalidConfig("bad CIDR: " + cidr);
    entries.push_back({ip->ipv6, ip->bytes, len, country});
}

std::optional<std::string> geolocate(const std::string& ip, const GeoTable& table) {
    auto parsed = parse_ip(ip);
    if (!parsed) throw MalformedIp("not an IP address: " + ip);
    const GeoTable::Entry* best = nullptr;
    for (const auto& e : table.entries) {
        if (e.ipv6 != parsed->ipv6) continue;
        if (!prefix_matches(parsed->bytes, e.prefix, e.prefix_len)) continue;
        if (!best || e.prefix_len > best->prefix_len) best = &e;
    }
    if (!best) return std::nullopt;
    return best->country;
}

}  // namespace scamtrace::corpus
