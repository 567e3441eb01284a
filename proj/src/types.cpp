#include "scamtrace/types.hpp"

#include "scamtrace/errors.hpp"

namespace scamtrace {

std::string chain_name(Chain c) {
    return c == Chain::Bitcoin ? "bitcoin" : "ethereum";
}

std::optional<Chain> parse_chain(const std::string& s) {
    if (s == "bitcoin" || s == "btc") return Chain::Bitcoin;
    if (s == "ethereum" || s == "eth") return Chain::Ethereum;
    return std::nullopt;
}

double chain_unit_scale(Chain c) {
    return c == Chain::Bitcoin ? 1e8 : 1e18;
}

Amount parse_amount(const std::string& s) {
    if (s.empty()) throw MalformedRecord("empty amount");
    Amount v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') throw MalformedRecord("bad amount: " + s);
        v = v * 10 + static_cast<unsigned>(c - '0');
    }
    return v;
}

std::string amount_to_string(Amount v) {
    if (v == 0) return "0";
    std::string out;
    while (v > 0) {
        out += static_cast<char>('0' + static_cast<unsigned>(v % 10));
        v /= 10;
    }
    return {out.rbegin(), out.rend()};
}

namespace {
const std::pair<Category, const char*> kCategories[] = {
    {Category::FiatExchange, "FiatExchange"},
    {Category::CryptoExchange, "CryptoExchange"},
    {Category::DecentralisedExchange, "DecentralisedExchange"},
    {Category::Scam, "Scam"},
    {Category::Phishing, "Phishing"},
    {Category::Miner, "Miner"},
    {Category::WalletService, "WalletService"},
    {Category::PaymentServiceProvider, "PaymentServiceProvider"},
    {Category::Gambling, "Gambling"},
    {Category::PonziScheme, "PonziScheme"},
    {Category::DarkMarket, "DarkMarket"},
    {Category::Mixer, "Mixer"},
    {Category::Other, "Other"},
};
}  // namespace

std::string category_name(Category c) {
    for (const auto& [cat, name] : kCategories)
        if (cat == c) return name;
    return "Other";
}

std::optional<Category> parse_category(const std::string& s) {
    for (const auto& [cat, name] : kCategories)
        if (s == name) return cat;
    return std::nullopt;
}

bool is_exchange_category(Category c) {
    return c == Category::FiatExchange || c == Category::CryptoExchange ||
           c == Category::DecentralisedExchange;
}

bool is_custodial_category(Category c) {
    switch (c) {
        case Category::FiatExchange:
        case Category::CryptoExchange:
        case Category::DecentralisedExchange:
        case Category::WalletService:
        case Category::Gambling:
        case Category::Mixer:
        case Category::PaymentServiceProvider:
            return true;
        default:
            return false;
    }
}

}  // namespace scamtrace
