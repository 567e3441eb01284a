#include "scamtrace/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "scamtrace/corpus.hpp"
#include "scamtrace/errors.hpp"

namespace scamtrace::synth {

namespace {

// mt19937_64 output is pinned by the standard; the helpers below avoid
// std::*_distribution so streams are identical across library versions.
struct Rng {
    std::mt19937_64 engine;

    explicit Rng(std::uint64_t seed) : engine(seed) {}

    std::uint64_t next() { return engine(); }
    std::size_t below(std::size_t n) { return n ? next() % n : 0; }
    std::size_t in_range(const Range& r) { return r.lo + below(r.hi - r.lo + 1); }
    double real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Geometric on {0,1,2,...} with mean (1-p)/p.
    long geometric(double p) {
        double u = real();
        if (u >= 1.0) u = 0.9999999999;
        return static_cast<long>(std::floor(std::log1p(-u) / std::log1p(-p)));
    }
};

std::string letters(std::size_t n) {  // digit-free base-26 tag, >= 2 chars
    std::string out;
    do {
        out += static_cast<char>('a' + n % 26);
        n /= 26;
    } while (n > 0);
    if (out.size() < 2) out += 'a';
    return out;
}

const std::vector<std::vector<std::string>>& theme_banks() {
    static const std::vector<std::vector<std::string>> banks = {
        {"giveaway", "celebrity", "bonus", "participate", "wallet", "verify",
         "winners", "transaction", "promo", "live", "double", "instantly"},
        {"wallet", "unlock", "private", "key", "login", "secure", "restore",
         "phrase", "interface", "ether", "gas", "network"},
        {"exchange", "trade", "deposit", "withdraw", "balance", "support",
         "password", "orders", "margin", "spot", "listing", "fees"},
        {"blog", "article", "announcement", "event", "foundation", "community",
         "reward", "register", "official", "press", "interview", "readers"},
        {"anniversary", "branded", "claim", "limited", "participants", "rules",
         "airdrop", "celebration", "partners", "sponsored", "exclusive", "drop"},
    };
    return banks;
}

std::vector<std::string> type_template(std::size_t type) {
    const auto& banks = theme_banks();
    const auto& bank = banks[type % banks.size()];
    std::vector<std::string> tokens;
    for (std::size_t i = 0; i < bank.size(); ++i) {
        // Type-dependent multiplicities keep tf profiles apart even where
        // banks share a word.
        std::size_t repeats = 1 + (i * 7 + type) % 4;
        for (std::size_t r = 0; r < repeats; ++r) tokens.push_back(bank[i]);
    }
    tokens.push_back("fund" + letters(type));  // one type-unique marker term
    tokens.push_back("fund" + letters(type));
    return tokens;
}

const std::vector<std::string>& noise_bank() {
    static const std::vector<std::string> words = [] {
        static const char* syl[] = {"ba", "ce", "di", "fo", "gu", "ha", "ki",
                                    "lo", "mu", "ne", "pa", "re", "si", "tu"};
        std::vector<std::string> out;
        for (std::size_t k = 0; k < 40; ++k)
            out.push_back(std::string("zz") + syl[(k * 5 + 1) % 14] + syl[(k * 3 + 2) % 14]);
        return out;
    }();
    return words;
}

struct EntityDef {
    const char* name;
    Category category;
    const char* country;  // nullptr = unknown
};

constexpr EntityDef kExchanges[] = {
    {"CoinPalace", Category::FiatExchange, "US"},
    {"BitHarbor", Category::FiatExchange, "US"},
    {"SeoulCoins", Category::FiatExchange, "KR"},
    {"ChainSwap", Category::CryptoExchange, "CN"},
    {"OpenDex", Category::DecentralisedExchange, nullptr},
};

const char* cashout_entity_name(Category c) {
    switch (c) {
        case Category::FiatExchange: return "NordicExchange";
        case Category::CryptoExchange: return "ChainSwap";
        case Category::Gambling: return "LuckyDice";
        case Category::Mixer: return "TumbleBit";
        case Category::PaymentServiceProvider: return "PayPipe";
        case Category::DarkMarket: return "GreyBazaar";
        case Category::WalletService: return "VaultWeb";
        default: return "MiscSink";
    }
}

const char* cashout_entity_country(Category c) {
    switch (c) {
        case Category::FiatExchange: return "FI";
        case Category::CryptoExchange: return "CN";
        case Category::Gambling: return "CW";
        default: return nullptr;
    }
}

std::string fixed_width(const char* prefix, std::size_t n) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%06zu", prefix, n);
    return buf;
}

struct Builder {
    const SynthConfig& cfg;
    Rng rng;
    Ecosystem eco;

    std::size_t tx_counter = 0;
    std::map<CryptoAddress, Amount> received;  // per scam address

    explicit Builder(const SynthConfig& config) : cfg(config), rng(config.seed) {}

    CryptoAddress new_btc_address() {
        std::vector<std::uint8_t> payload(21, 0);
        for (std::size_t i = 1; i < payload.size(); ++i)
            payload[i] = static_cast<std::uint8_t>(rng.below(256));
        return {Chain::Bitcoin, corpus::base58check_encode(payload)};
    }

    CryptoAddress new_eth_address() {
        static const char* hexd = "0123456789abcdef";
        std::string s = "0x";
        for (int i = 0; i < 40; ++i) s += hexd[rng.below(16)];
        return {Chain::Ethereum, s};
    }

    CryptoAddress new_address(Chain chain) {
        return chain == Chain::Bitcoin ? new_btc_address() : new_eth_address();
    }

    std::string next_tx_id(const char* prefix) { return fixed_width(prefix, tx_counter++); }

    double usd_of(Amount v, Chain chain) {
        double price = chain == Chain::Bitcoin ? 10000.0 : 200.0;
        return amount_to_double(v) / chain_unit_scale(chain) * price;
    }
};

}  // namespace

std::string tx_role_name(TxRole role) {
    switch (role) {
        case TxRole::VictimPayment: return "VictimPayment";
        case TxRole::SeedTransfer: return "SeedTransfer";
        case TxRole::Cashout: return "Cashout";
        case TxRole::Background: return "Background";
    }
    return "?";
}

Ecosystem generate_ecosystem(const SynthConfig& cfg) {
    if (cfg.n_types == 0 || cfg.n_campaigns == 0) throw InvalidConfig("need types and campaigns");
    if (cfg.sites_per_campaign.lo < 1 || cfg.sites_per_campaign.lo > cfg.sites_per_campaign.hi)
        throw InvalidConfig("bad sites_per_campaign range");
    if (cfg.victims_per_site.lo > cfg.victims_per_site.hi)
        throw InvalidConfig("bad victims_per_site range");
    if (cfg.token_noise < 0 || cfg.token_noise > 1) throw InvalidConfig("token_noise in [0,1]");
    if (cfg.scam_to_scam_fraction < 0 || cfg.scam_to_scam_fraction > 1)
        throw InvalidConfig("scam_to_scam_fraction in [0,1]");
    if (cfg.ethereum_campaign_fraction < 0 || cfg.ethereum_campaign_fraction > 1)
        throw InvalidConfig("ethereum_campaign_fraction in [0,1]");
    if (cfg.mean_registration_lag_days <= 0) throw InvalidConfig("lag mean must be positive");
    double mix_total = 0;
    for (const auto& [cat, w] : cfg.cashout_mix) {
        if (w < 0) throw InvalidConfig("cashout weights must be nonnegative");
        mix_total += w;
    }
    if (mix_total <= 0) throw InvalidConfig("cashout_mix must have positive total weight");

    Builder b(cfg);
    const Date base_date = *parse_date("2018-06-01");

    // Campaign chains: the trailing share of campaigns runs on Ethereum.
    std::size_t eth_count = static_cast<std::size_t>(
        std::llround(cfg.ethereum_campaign_fraction * static_cast<double>(cfg.n_campaigns)));
    auto campaign_chain = [&](std::size_t c) {
        return c >= cfg.n_campaigns - eth_count ? Chain::Ethereum : Chain::Bitcoin;
    };

    // Owners: consecutive Bitcoin campaigns pair up; Ethereum campaigns own
    // themselves (singleton clusters cannot evidence shared ownership).
    std::map<std::size_t, int> owner_of_campaign;
    {
        int next_owner = 0;
        std::vector<std::size_t> btc;
        for (std::size_t c = 0; c < cfg.n_campaigns; ++c)
            if (campaign_chain(c) == Chain::Bitcoin) btc.push_back(c);
        for (std::size_t i = 0; i < btc.size(); i += 2) {
            owner_of_campaign[btc[i]] = next_owner;
            if (i + 1 < btc.size()) owner_of_campaign[btc[i + 1]] = next_owner;
            b.eco.truth.owner_campaigns[next_owner].push_back(static_cast<int>(btc[i]));
            if (i + 1 < btc.size())
                b.eco.truth.owner_campaigns[next_owner].push_back(static_cast<int>(btc[i + 1]));
            ++next_owner;
        }
        for (std::size_t c = 0; c < cfg.n_campaigns; ++c) {
            if (campaign_chain(c) != Chain::Ethereum) continue;
            owner_of_campaign[c] = next_owner;
            b.eco.truth.owner_campaigns[next_owner].push_back(static_cast<int>(c));
            ++next_owner;
        }
    }

    // Exchange entities and their labelled address pools.
    struct ExchangePool {
        EntityLabel label;
        std::vector<CryptoAddress> btc;
        std::vector<CryptoAddress> eth;
    };
    std::vector<ExchangePool> exchanges;
    for (const auto& def : kExchanges) {
        ExchangePool pool;
        pool.label = {def.name, def.category,
                      def.country ? std::optional<std::string>(def.country) : std::nullopt};
        for (int i = 0; i < 3; ++i) pool.btc.push_back(b.new_btc_address());
        for (int i = 0; i < 3; ++i) pool.eth.push_back(b.new_eth_address());
        for (const auto& a : pool.btc) b.eco.labels.push_back({a, pool.label});
        for (const auto& a : pool.eth) b.eco.labels.push_back({a, pool.label});
        exchanges.push_back(std::move(pool));
    }

    // Cash-out destination entities, one per category in the mix.
    std::map<Category, std::pair<EntityLabel, std::map<Chain, CryptoAddress>>> destinations;
    for (const auto& [cat, weight] : cfg.cashout_mix) {
        if (weight <= 0) continue;
        EntityLabel label{cashout_entity_name(cat), cat,
                          cashout_entity_country(cat)
                              ? std::optional<std::string>(cashout_entity_country(cat))
                              : std::nullopt};
        std::map<Chain, CryptoAddress> addrs;
        addrs[Chain::Bitcoin] = b.new_btc_address();
        addrs[Chain::Ethereum] = b.new_eth_address();
        b.eco.labels.push_back({addrs[Chain::Bitcoin], label});
        b.eco.labels.push_back({addrs[Chain::Ethereum], label});
        destinations[cat] = {label, std::move(addrs)};
    }

    static const char* kDomainWords[] = {"eth",      "ethereum", "btcbonus",
                                         "muskgift", "teslacoins", "cryptodrop"};
    static const char* kCountries[] = {"US", "US", "RU", "MD", "CN", "KR", "GB", "NG"};

    struct Site {
        std::string domain;
        std::size_t campaign = 0;
        std::size_t type = 0;
        CryptoAddress address;
        Date registered = 0;
    };
    std::vector<Site> sites;

    for (std::size_t c = 0; c < cfg.n_campaigns; ++c) {
        Chain chain = campaign_chain(c);
        std::size_t type = c % cfg.n_types;
        std::size_t count = b.rng.in_range(cfg.sites_per_campaign);
        std::string ip = "198.51.100." + std::to_string(10 + c);
        std::string registrar = "registrar-" + letters(c) + ".example";
        std::string provider = "mail-" + letters(c) + ".example";
        std::string country = kCountries[c % 8];
        std::optional<std::string> ga_id;
        if (c % 2 == 0) ga_id = "UA-99" + std::to_string(100 + c) + "-1";
        b.eco.geo.emplace_back(ip + "/32", country);

        for (std::size_t s = 0; s < count; ++s) {
            Site site;
            site.campaign = c;
            site.type = type;
            site.domain = std::string(kDomainWords[c % 6]) + "-" + letters(c) + letters(s) +
                          ".example";
            site.address = b.new_address(chain);
            site.registered = base_date + static_cast<Date>(c * 7 + s % 5);
            b.eco.truth.site_type[site.domain] = static_cast<int>(type);
            b.eco.truth.site_campaign[site.domain] = static_cast<int>(c);
            b.eco.truth.address_owner[site.address] = owner_of_campaign[c];
            b.eco.labels.push_back(
                {site.address,
                 {"scamnet-" + letters(static_cast<std::size_t>(owner_of_campaign[c])),
                  Category::Scam, std::nullopt}});

            RegistrationRow reg;
            reg.record.domain = site.domain;
            reg.record.registration_date = site.registered;
            reg.raw_email = "opr-" + letters(c) + "-" + letters(s) + "@" + provider;
            auto [account, prov] = corpus::decompose_email(reg.raw_email);
            reg.record.registrant_email_account = account;
            reg.record.registrant_email_provider = prov;
            reg.record.registrant_country = country;
            reg.record.registrar = registrar;
            b.eco.registrations.push_back(std::move(reg));

            // Page text: type template with token-noise substitutions, plus
            // the advertised address so ingestion extracts it.
            auto tokens = type_template(type);
            for (auto& tok : tokens)
                if (b.rng.real() < cfg.token_noise)
                    tok = noise_bank()[b.rng.below(noise_bank().size())];
            std::string text;
            for (const auto& tok : tokens) text += tok + " ";
            text += "send funds to " + site.address.canonical + " now";

            std::string html = "<html><body><p>" + text + "</p>";
            if (ga_id)
                html += "<script>ga('create','" + *ga_id + "','auto');</script>";
            html += "</body></html>";

            nlohmann::ordered_json rec;
            rec["domain"] = site.domain;
            rec["page_text"] = text;
            rec["snapshot_time"] =
                format_timestamp(midnight(site.registered) + 2 * kSecondsPerDay + 9 * 3600);
            rec["raw_html"] = html;
            rec["ip"] = ip;
            rec["server_country"] = country;
            rec["resource_urls"] = nlohmann::ordered_json::array(
                {"http://cdn-spinhost.example/spinner-" + letters(type) + ".gif",
                 "http://" + site.domain + "/logo.png"});
            b.eco.snapshots.push_back(std::move(rec));
            sites.push_back(std::move(site));
        }
    }

    // Planted outliers: unique junk vocabulary, unique infrastructure.
    for (std::size_t o = 0; o < cfg.outlier_sites; ++o) {
        std::string domain = "odd-" + letters(o) + ".example";
        auto address = b.new_btc_address();
        b.eco.truth.site_type[domain] = -1;
        b.eco.truth.site_campaign[domain] = -1;

        std::string text;
        for (std::size_t k = 0; k < 30; ++k)
            text += "qq" + letters(o) + letters(b.rng.below(1000)) + " ";
        text += "send funds to " + address.canonical + " now";

        nlohmann::ordered_json rec;
        rec["domain"] = domain;
        rec["page_text"] = text;
        rec["snapshot_time"] =
            format_timestamp(midnight(base_date) + static_cast<std::int64_t>(o) * 3600 + 3600);
        rec["raw_html"] = "<html><body>" + text + "</body></html>";
        rec["ip"] = "203.0.113." + std::to_string(1 + o % 200);
        rec["resource_urls"] =
            nlohmann::ordered_json::array({"http://" + domain + "/style.css"});
        b.eco.snapshots.push_back(std::move(rec));

        RegistrationRow reg;
        reg.record.domain = domain;
        reg.record.registration_date = base_date - 1;
        reg.raw_email = "solo-" + letters(o) + "@lone-" + letters(o) + ".example";
        auto [account, prov] = corpus::decompose_email(reg.raw_email);
        reg.record.registrant_email_account = account;
        reg.record.registrant_email_provider = prov;
        reg.record.registrant_country = "PA";
        reg.record.registrar = "registrar-odd-" + letters(o) + ".example";
        b.eco.registrations.push_back(std::move(reg));
    }

    // Victim payments out of exchange pools, lagged geometrically from each
    // site's registration date.
    double lag_p = 1.0 / (1.0 + cfg.mean_registration_lag_days);
    Timestamp last_victim_ts = midnight(base_date);
    for (const auto& site : sites) {
        Chain chain = site.address.chain;
        std::size_t victims = b.rng.in_range(cfg.victims_per_site);
        for (std::size_t v = 0; v < victims; ++v) {
            long lag = b.rng.geometric(lag_p);
            Timestamp ts = midnight(site.registered) + lag * kSecondsPerDay + 8 * 3600 +
                           static_cast<Timestamp>(b.rng.below(8 * 3600));
            const auto& pool = exchanges[b.rng.below(exchanges.size())];
            Amount amount;
            if (chain == Chain::Bitcoin)
                amount = 100000 + b.rng.below(5000000);  // 0.001 - 0.051 BTC
            else
                amount = static_cast<Amount>(50 + b.rng.below(2000)) *
                         static_cast<Amount>(1000000000000000ULL);  // 0.05 - 2.05 ETH

            ChainTransaction tx;
            tx.tx_id = b.next_tx_id("vic");
            tx.chain = chain;
            tx.timestamp = ts;
            if (chain == Chain::Bitcoin) {
                const auto& from = pool.btc[b.rng.below(pool.btc.size())];
                const auto& change = pool.btc[b.rng.below(pool.btc.size())];
                tx.inputs.push_back({from, amount + 20000});
                tx.outputs.push_back({site.address, amount});
                tx.outputs.push_back({change, 15000});
            } else {
                const auto& from = pool.eth[b.rng.below(pool.eth.size())];
                tx.inputs.push_back({from, amount});
                tx.outputs.push_back({site.address, amount});
            }
            b.eco.truth.tx_role[tx.tx_id] = TxRole::VictimPayment;
            b.eco.truth.victim_usd_total += b.usd_of(amount, chain);
            b.received[site.address] += amount;
            last_victim_ts = std::max(last_victim_ts, ts);
            b.eco.txs.push_back(std::move(tx));
        }
    }

    // Seed transfers from a sibling scam cluster on the same chain.
    for (const auto& site : sites) {
        if (b.rng.real() >= cfg.scam_to_scam_fraction) continue;
        Chain chain = site.address.chain;
        const Site* sibling = nullptr;
        for (const auto& other : sites) {
            // A different owner, otherwise the transfer stays inside one
            // blockchain cluster and is invisible to tracing.
            if (owner_of_campaign[other.campaign] != owner_of_campaign[site.campaign] &&
                other.address.chain == chain) {
                sibling = &other;
                break;
            }
        }
        if (!sibling) continue;
        Amount amount = chain == Chain::Bitcoin
                            ? Amount(50000)  // 0.0005 BTC
                            : Amount(10000000000000000ULL);  // 0.01 ETH
        ChainTransaction tx;
        tx.tx_id = b.next_tx_id("seed");
        tx.chain = chain;
        tx.timestamp = midnight(site.registered) + 12 * 3600;
        tx.inputs.push_back({sibling->address, amount});
        tx.outputs.push_back({site.address, amount});
        b.eco.truth.tx_role[tx.tx_id] = TxRole::SeedTransfer;
        b.eco.truth.seed_usd_total += b.usd_of(amount, chain);
        b.received[site.address] += amount;
        b.eco.txs.push_back(std::move(tx));
    }

    // Cash-outs. Overlapping input chunks also wire each owner's Bitcoin
    // addresses into one common-spend cluster.
    auto pick_destination = [&](double roll) -> const std::pair<EntityLabel, std::map<Chain, CryptoAddress>>& {
        double target = roll * mix_total;
        double acc = 0;
        for (const auto& [cat, weight] : cfg.cashout_mix) {
            if (weight <= 0) continue;
            acc += weight;
            if (target < acc) return destinations.at(cat);
        }
        return destinations.rbegin()->second;
    };

    for (const auto& [owner, campaigns] : b.eco.truth.owner_campaigns) {
        std::vector<const Site*> owned;
        for (const auto& site : sites)
            if (owner_of_campaign[site.campaign] == owner) owned.push_back(&site);
        if (owned.empty()) continue;
        Chain chain = owned.front()->address.chain;
        Timestamp ts = last_victim_ts + 2 * kSecondsPerDay +
                       static_cast<Timestamp>(owner) * 3600;

        if (chain == Chain::Bitcoin) {
            // Chunks of three addresses overlapping by one.
            for (std::size_t start = 0; start < owned.size();
                 start += owned.size() == 1 ? 1 : 2) {
                ChainTransaction tx;
                tx.tx_id = b.next_tx_id("cash");
                tx.chain = chain;
                tx.timestamp = ts;
                ts += 3600;
                Amount total = 0;
                for (std::size_t k = start; k < std::min(start + 3, owned.size()); ++k) {
                    Amount v = b.received[owned[k]->address];
                    tx.inputs.push_back({owned[k]->address, v});
                    total += v;
                }
                const auto& dest = pick_destination(b.rng.real());
                tx.outputs.push_back({dest.second.at(chain), total * 98 / 100});
                b.eco.truth.tx_role[tx.tx_id] = TxRole::Cashout;
                b.eco.txs.push_back(std::move(tx));
                if (start + 3 >= owned.size()) break;
            }
        } else {
            for (const auto* site : owned) {
                Amount v = b.received[site->address];
                if (v == 0) continue;
                ChainTransaction tx;
                tx.tx_id = b.next_tx_id("cash");
                tx.chain = chain;
                tx.timestamp = ts;
                ts += 3600;
                const auto& dest = pick_destination(b.rng.real());
                tx.inputs.push_back({site->address, v});
                tx.outputs.push_back({dest.second.at(chain), v});
                b.eco.truth.tx_role[tx.tx_id] = TxRole::Cashout;
                b.eco.txs.push_back(std::move(tx));
            }
        }
    }

    // A little unrelated background churn.
    for (std::size_t i = 0; i < 3; ++i) {
        ChainTransaction tx;
        tx.tx_id = b.next_tx_id("bg");
        tx.chain = Chain::Bitcoin;
        tx.timestamp = midnight(base_date - 5) + static_cast<Timestamp>(i) * 7200;
        tx.inputs.push_back({b.new_btc_address(), 1000000});
        tx.outputs.push_back({b.new_btc_address(), 990000});
        b.eco.truth.tx_role[tx.tx_id] = TxRole::Background;
        b.eco.txs.push_back(std::move(tx));
    }

    // Flat daily prices across the generated window.
    Date first = base_date - 15;
    Date last = base_date + static_cast<Date>(cfg.n_campaigns) * 7 + 120;
    for (Date d = first; d <= last; ++d) {
        b.eco.prices.usd_per_coin[{Chain::Bitcoin, d}] = 10000.0;
        b.eco.prices.usd_per_coin[{Chain::Ethereum, d}] = 200.0;
    }
    b.eco.geo.emplace_back("198.51.100.0/24", "US");

    return std::move(b.eco);
}

Evaluation evaluate(const clusterer::ClusterAssignment& predicted,
                    const std::vector<int>& truth_labels) {
    if (predicted.labels.size() != truth_labels.size())
        throw LengthMismatch("prediction and truth have different lengths");
    clusterer::ClusterAssignment truth;
    truth.labels = truth_labels;

    Evaluation out;
    out.ari = clusterer::adjusted_rand_index(predicted, truth);
    out.pairwise_f1 = clusterer::pairwise_f1(predicted, truth);

    std::size_t tp = 0, pred_noise = 0, truth_noise = 0;
    for (std::size_t i = 0; i < truth_labels.size(); ++i) {
        bool p = predicted.labels[i] == clusterer::kNoise;
        bool t = truth_labels[i] == clusterer::kNoise;
        pred_noise += p;
        truth_noise += t;
        tp += p && t;
    }
    out.noise_precision =
        pred_noise ? static_cast<double>(tp) / static_cast<double>(pred_noise) : 1.0;
    out.noise_recall =
        truth_noise ? static_cast<double>(tp) / static_cast<double>(truth_noise) : 1.0;
    return out;
}

}  // namespace scamtrace::synth
