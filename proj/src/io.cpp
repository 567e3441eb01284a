#include "scamtrace/io.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>

#include "scamtrace/csv.hpp"
#include "scamtrace/errors.hpp"

namespace scamtrace::io {

namespace {

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) out.push_back(line);
    }
    return out;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    return out;
}

std::optional<std::string> opt_field(const std::vector<std::string>& row, std::size_t i) {
    if (i >= row.size() || row[i].empty()) return std::nullopt;
    return row[i];
}

}  // namespace

bool file_exists(const std::string& path) { return std::filesystem::exists(path); }

std::vector<WebsiteSnapshot> load_snapshots(const std::string& path) {
    std::vector<WebsiteSnapshot> out;
    for (const auto& line : read_lines(path)) out.push_back(corpus::parse_snapshot(line));
    return out;
}

std::vector<RegistrationRecord> load_registrations(const std::string& path) {
    auto rows = read_csv(path);
    if (rows.empty()) throw MalformedRecord("empty registrations file: " + path);
    const std::vector<std::string> header = {"domain", "registration_date", "registrant_email",
                                             "registrant_country", "registrar"};
    if (rows.front() != header)
        throw MalformedRecord("unexpected registrations header in " + path);
    std::vector<RegistrationRecord> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.empty() || row[0].empty()) continue;
        RegistrationRecord rec;
        rec.domain = row[0];
        if (auto date = opt_field(row, 1)) rec.registration_date = parse_date(*date);
        if (auto email = opt_field(row, 2)) {
            try {
                auto [account, provider] = corpus::decompose_email(*email);
                rec.registrant_email_account = account;
                rec.registrant_email_provider = provider;
            } catch (const InvalidEmail&) {
                // dirty registrant data: treat as absent
            }
        }
        rec.registrant_country = opt_field(row, 3);
        rec.registrar = opt_field(row, 4);
        out.push_back(std::move(rec));
    }
    return out;
}

std::string address_key(const CryptoAddress& addr) { return addr.canonical; }

CryptoAddress address_from_key(const std::string& key) {
    if (key.size() > 2 && key[0] == '0' && key[1] == 'x') {
        std::string lowered = key;
        for (auto& c : lowered) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return {Chain::Ethereum, lowered};
    }
    return {Chain::Bitcoin, key};
}

nlohmann::ordered_json transaction_to_json(const ChainTransaction& tx) {
    auto slots = [](const std::vector<TxSlot>& v) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& s : v) {
            nlohmann::ordered_json o;
            o["address"] = s.address.canonical;
            if (s.value <= Amount(UINT64_MAX))
                o["value"] = static_cast<std::uint64_t>(s.value);
            else
                o["value"] = amount_to_string(s.value);
            arr.push_back(std::move(o));
        }
        return arr;
    };
    nlohmann::ordered_json j;
    j["tx_id"] = tx.tx_id;
    j["chain"] = chain_name(tx.chain);
    j["timestamp"] = format_timestamp(tx.timestamp);
    j["coinbase"] = tx.coinbase;
    j["inputs"] = slots(tx.inputs);
    j["outputs"] = slots(tx.outputs);
    return j;
}

namespace {

Amount amount_from_json(const nlohmann::json& v) {
    if (v.is_string()) return parse_amount(v.get<std::string>());
    if (v.is_number_unsigned()) return Amount(v.get<std::uint64_t>());
    if (v.is_number_integer()) {
        auto n = v.get<std::int64_t>();
        if (n < 0) throw MalformedRecord("negative value");
        return Amount(n);
    }
    throw MalformedRecord("transaction value must be an integer or decimal string");
}

}  // namespace

ChainTransaction transaction_from_json(const nlohmann::json& j) {
    ChainTransaction tx;
    if (!j.contains("tx_id") || !j.contains("chain") || !j.contains("timestamp"))
        throw MalformedRecord("transaction missing tx_id/chain/timestamp");
    tx.tx_id = j["tx_id"].get<std::string>();
    auto chain = parse_chain(j["chain"].get<std::string>());
    if (!chain) throw MalformedRecord("unknown chain in tx " + tx.tx_id);
    tx.chain = *chain;
    auto ts = parse_timestamp(j["timestamp"].get<std::string>());
    if (!ts) throw MalformedRecord("bad timestamp in tx " + tx.tx_id);
    tx.timestamp = *ts;
    tx.coinbase = j.value("coinbase", false);
    auto read_slots = [&](const char* key, std::vector<TxSlot>& out) {
        if (!j.contains(key)) return;
        for (const auto& s : j[key]) {
            TxSlot slot;
            auto addr = address_from_key(s.at("address").get<std::string>());
            slot.address.chain = tx.chain;
            slot.address.canonical = addr.canonical;
            slot.value = amount_from_json(s.at("value"));
            out.push_back(std::move(slot));
        }
    };
    read_slots("inputs", tx.inputs);
    read_slots("outputs", tx.outputs);
    if (tx.chain == Chain::Bitcoin && !tx.coinbase && tx.inputs.empty())
        throw MalformedRecord("bitcoin tx " + tx.tx_id + " has no inputs");
    if (tx.chain == Chain::Ethereum && (tx.inputs.size() != 1 || tx.outputs.size() != 1))
        throw MalformedRecord("ethereum tx " + tx.tx_id + " must be 1-in/1-out");
    return tx;
}

std::vector<ChainTransaction> load_transactions(const std::string& path) {
    std::vector<ChainTransaction> out;
    for (const auto& line : read_lines(path)) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw MalformedRecord(std::string("bad transaction JSON: ") + e.what());
        }
        out.push_back(transaction_from_json(j));
    }
    return out;
}

chain::LabelMap load_labels(const std::string& path) {
    auto rows = read_csv(path);
    if (rows.empty()) throw MalformedRecord("empty labels file: " + path);
    const std::vector<std::string> header = {"address", "name", "category", "country"};
    if (rows.front() != header) throw MalformedRecord("unexpected labels header in " + path);
    chain::LabelMap out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.size() < 3 || row[0].empty()) continue;
        EntityLabel label;
        label.name = row[1];
        auto cat = parse_category(row[2]);
        if (!cat) throw MalformedRecord("unknown category '" + row[2] + "' in " + path);
        label.category = *cat;
        label.country = opt_field(row, 3);
        out[address_from_key(row[0])] = std::move(label);
    }
    return out;
}

PriceTable load_prices(const std::string& path) {
    auto rows = read_csv(path);
    if (rows.empty()) throw MalformedRecord("empty prices file: " + path);
    const std::vector<std::string> header = {"chain", "date", "usd"};
    if (rows.front() != header) throw MalformedRecord("unexpected prices header in " + path);
    PriceTable out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.size() < 3) continue;
        auto chain = parse_chain(row[0]);
        auto date = parse_date(row[1]);
        if (!chain || !date) throw MalformedRecord("bad price row in " + path);
        double usd = std::stod(row[2]);
        if (usd <= 0) throw MalformedRecord("price must be positive in " + path);
        out.usd_per_coin[{*chain, *date}] = usd;
    }
    return out;
}

corpus::GeoTable load_geo_table(const std::string& path) {
    auto rows = read_csv(path);
    if (rows.empty()) throw MalformedRecord("empty geo file: " + path);
    const std::vector<std::string> header = {"cidr", "country"};
    if (rows.front() != header) throw MalformedRecord("unexpected geo header in " + path);
    corpus::GeoTable table;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.size() < 2) continue;
        table.add(row[0], row[1]);
    }
    return table;
}

std::set<std::string> load_stop_words(const std::string& path) {
    std::set<std::string> out;
    for (auto& line : read_lines(path)) {
        std::string word;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c)))
                word += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (!word.empty()) out.insert(word);
    }
    return out;
}

void write_assignment_csv(const std::string& path, const std::vector<std::string>& item_ids,
                          const std::vector<int>& labels) {
    auto out = open_out(path);
    out << "item_id,cluster_id\n";
    for (std::size_t i = 0; i < item_ids.size(); ++i)
        out << csv_escape(item_ids[i]) << ',' << labels[i] << '\n';
}

std::vector<std::pair<std::string, int>> load_assignment_csv(const std::string& path) {
    auto rows = read_csv(path);
    if (rows.empty() || rows.front() != std::vector<std::string>{"item_id", "cluster_id"})
        throw MalformedRecord("unexpected assignment header in " + path);
    std::vector<std::pair<std::string, int>> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() < 2) continue;
        out.emplace_back(rows[i][0], std::stoi(rows[i][1]));
    }
    return out;
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
    auto out = open_out(path);
    for (const auto& line : lines) out << line << '\n';
}

void write_text(const std::string& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
}

void write_json(const std::string& path, const nlohmann::ordered_json& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw MalformedRecord(path + ": " + e.what());
    }
}

nlohmann::ordered_json ground_truth_to_json(const synth::GroundTruth& truth) {
    nlohmann::ordered_json j;
    j["site_type"] = nlohmann::ordered_json::object();
    for (const auto& [domain, type] : truth.site_type) j["site_type"][domain] = type;
    j["site_campaign"] = nlohmann::ordered_json::object();
    for (const auto& [domain, c] : truth.site_campaign) j["site_campaign"][domain] = c;
    j["address_owner"] = nlohmann::ordered_json::object();
    for (const auto& [addr, owner] : truth.address_owner)
        j["address_owner"][address_key(addr)] = owner;
    j["tx_role"] = nlohmann::ordered_json::object();
    for (const auto& [tx, role] : truth.tx_role) j["tx_role"][tx] = synth::tx_role_name(role);
    j["owner_campaigns"] = nlohmann::ordered_json::object();
    for (const auto& [owner, campaigns] : truth.owner_campaigns)
        j["owner_campaigns"][std::to_string(owner)] = campaigns;
    j["victim_usd_total"] = truth.victim_usd_total;
    j["seed_usd_total"] = truth.seed_usd_total;
    return j;
}

void write_ecosystem(const std::string& dir, const synth::Ecosystem& eco) {
    std::filesystem::create_directories(dir);
    auto path = [&](const char* name) { return dir + "/" + name; };

    std::vector<std::string> snap_lines;
    for (const auto& rec : eco.snapshots) snap_lines.push_back(rec.dump());
    write_lines(path("snapshots.jsonl"), snap_lines);

    {
        auto out = open_out(path("registrations.csv"));
        out << "domain,registration_date,registrant_email,registrant_country,registrar\n";
        for (const auto& row : eco.registrations) {
            const auto& r = row.record;
            out << csv_escape(r.domain) << ','
                << (r.registration_date ? format_date(*r.registration_date) : "") << ','
                << csv_escape(row.raw_email) << ',' << r.registrant_country.value_or("") << ','
                << csv_escape(r.registrar.value_or("")) << '\n';
        }
    }

    std::vector<std::string> tx_lines;
    for (const auto& tx : eco.txs) tx_lines.push_back(transaction_to_json(tx).dump());
    write_lines(path("transactions.jsonl"), tx_lines);

    {
        auto out = open_out(path("labels.csv"));
        out << "address,name,category,country\n";
        for (const auto& row : eco.labels)
            out << row.address.canonical << ',' << csv_escape(row.label.name) << ','
                << category_name(row.label.category) << ',' << row.label.country.value_or("")
                << '\n';
    }

    {
        auto out = open_out(path("prices.csv"));
        out << "chain,date,usd\n";
        char buf[64];
        for (const auto& [key, usd] : eco.prices.usd_per_coin) {
            std::snprintf(buf, sizeof(buf), "%.2f", usd);
            out << chain_name(key.first) << ',' << format_date(key.second) << ',' << buf << '\n';
        }
    }

    {
        auto out = open_out(path("geo.csv"));
        out << "cidr,country\n";
        for (const auto& [cidr, country] : eco.geo) out << cidr << ',' << country << '\n';
    }

    write_json(path("ground_truth.json"), ground_truth_to_json(eco.truth));
}

}  // namespace scamtrace::io
