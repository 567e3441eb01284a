#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "scamtrace/timeutil.hpp"

namespace scamtrace {

enum class Chain { Bitcoin, Ethereum };

std::string chain_name(Chain c);
std::optional<Chain> parse_chain(const std::string& s);

// Base units per coin: satoshi for Bitcoin, wei for Ethereum.
double chain_unit_scale(Chain c);

// Native amount in base units (satoshi / wei). Wei needs more than 64 bits.
using Amount = unsigned __int128;

Amount parse_amount(const std::string& s);  // decimal digits only
std::string amount_to_string(Amount v);
inline double amount_to_double(Amount v) { return static_cast<double>(v); }

struct CryptoAddress {
    Chain chain;
    std::string canonical;

    auto operator<=>(const CryptoAddress&) const = default;
};

struct WebsiteSnapshot {
    std::string domain;  // lowercased, no scheme
    Timestamp snapshot_time = 0;
    std::string page_text;
    std::string raw_html;
    std::optional<std::string> ip;
    std::optional<std::string> server_country;
    std::set<std::string> resource_urls;  // absolute URLs only
    std::set<std::string> analytics_ids;
    std::set<CryptoAddress> addresses;
    std::optional<std::string> type_label;  // ground truth, evaluation only
};

struct RegistrationRecord {
    std::string domain;
    std::optional<Date> registration_date;
    std::optional<std::string> registrant_email_account;
    std::optional<std::string> registrant_email_provider;
    std::optional<std::string> registrant_country;
    std::optional<std::string> registrar;
};

enum class Category {
    FiatExchange,
    CryptoExchange,
    DecentralisedExchange,
    Scam,
    Phishing,
    Miner,
    WalletService,
    PaymentServiceProvider,
    Gambling,
    PonziScheme,
    DarkMarket,
    Mixer,
    Other,
};

std::string category_name(Category c);
std::optional<Category> parse_category(const std::string& s);
bool is_exchange_category(Category c);
bool is_custodial_category(Category c);

struct EntityLabel {
    std::string name;
    Category category = Category::Other;
    std::optional<std::string> country;  // ISO-3166 alpha-2
};

struct TxSlot {
    CryptoAddress address;
    Amount value = 0;
};

struct ChainTransaction {
    std::string tx_id;
    Chain chain = Chain::Bitcoin;
    Timestamp timestamp = 0;
    bool coinbase = false;
    std::vector<TxSlot> inputs;
    std::vector<TxSlot> outputs;
};

struct BlockchainCluster {
    int cluster_id = 0;
    std::set<CryptoAddress> addresses;
    bool custodial = false;
    std::optional<EntityLabel> entity;
};

struct PriceTable {
    std::map<std::pair<Chain, Date>, double> usd_per_coin;
};

}  // namespace scamtrace
