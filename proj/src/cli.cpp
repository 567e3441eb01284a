#include "scamtrace/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "scamtrace/analysis.hpp"
#include "scamtrace/chain.hpp"
#include "scamtrace/clusterer.hpp"
#include "scamtrace/corpus.hpp"
#include "scamtrace/csv.hpp"
#include "scamtrace/errors.hpp"
#include "scamtrace/io.hpp"
#include "scamtrace/synth.hpp"
#include "scamtrace/textfeat.hpp"
#include "scamtrace/trace.hpp"
#include "scamtrace/types.hpp"

namespace scamtrace::cli {

namespace {

using nlohmann::ordered_json;

// ---------------------------------------------------------------- logging --

int log_level() {  // 0 error, 1 warn, 2 info, 3 debug
    static int level = [] {
        const char* env = std::getenv("SCAMTRACE_LOG");
        std::string v = env ? env : "warn";
        if (v == "error") return 0;
        if (v == "info") return 2;
        if (v == "debug") return 3;
        return 1;
    }();
    return level;
}

void log_warn(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[scamtrace] warn: " << msg << "\n";
}

void log_info(const std::string& msg) {
    if (log_level() >= 2) std::cerr << "[scamtrace] info: " << msg << "\n";
}

// ----------------------------------------------------------------- config --

struct RunConfig {
    std::string snapshots, registrations, transactions, labels, prices, geo, stop_words;
    std::string out = "out";
    std::size_t min_pts = 5;
    std::optional<double> eps_types, eps_campaigns, eps_flag;
    unsigned threads = 1;
    std::uint64_t seed = 1;
    std::size_t max_cluster_addresses = 10000;
    double max_cluster_received_usd = 1e8;
    std::size_t max_hops = 20;
    double dust_threshold_usd = 0.01;
    bool change_heuristic = false;
    std::size_t campaign_type_rank = 5;
    std::string keywords = "eth,ethereum";
    std::optional<Date> keyword_window_start, keyword_window_end;
    std::int64_t bucket_seconds = 7 * kSecondsPerDay;
    std::size_t min_group = 2;
    std::string shared_denominator = "union";

    synth::SynthConfig synth_cfg;
};

std::map<Category, double> parse_cashout_mix(const std::string& spec) {
    std::map<Category, double> mix;
    std::string item;
    std::stringstream ss(spec);
    while (std::getline(ss, item, ',')) {
        auto colon = item.find(':');
        if (colon == std::string::npos) throw InvalidConfig("bad cashout_mix entry: " + item);
        auto cat = parse_category(item.substr(0, colon));
        if (!cat) throw InvalidConfig("unknown cashout_mix category: " + item);
        mix[*cat] = std::stod(item.substr(colon + 1));
    }
    if (mix.empty()) throw InvalidConfig("empty cashout_mix");
    return mix;
}

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
    auto to_size = [&] { return static_cast<std::size_t>(std::stoull(value)); };
    auto to_dbl = [&] { return std::stod(value); };
    auto to_bool = [&] { return value == "true" || value == "1" || value == "yes"; };
    if (key == "snapshots") cfg.snapshots = value;
    else if (key == "registrations") cfg.registrations = value;
    else if (key == "transactions") cfg.transactions = value;
    else if (key == "labels") cfg.labels = value;
    else if (key == "prices") cfg.prices = value;
    else if (key == "geo") cfg.geo = value;
    else if (key == "stop_words") cfg.stop_words = value;
    else if (key == "out") cfg.out = value;
    else if (key == "min_pts") cfg.min_pts = to_size();
    else if (key == "eps_types") cfg.eps_types = to_dbl();
    else if (key == "eps_campaigns") cfg.eps_campaigns = to_dbl();
    else if (key == "threads") cfg.threads = static_cast<unsigned>(std::stoul(value));
    else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "max_cluster_addresses") cfg.max_cluster_addresses = to_size();
    else if (key == "max_cluster_received_usd") cfg.max_cluster_received_usd = to_dbl();
    else if (key == "max_hops") cfg.max_hops = to_size();
    else if (key == "dust_threshold_usd") cfg.dust_threshold_usd = to_dbl();
    else if (key == "change_heuristic") cfg.change_heuristic = to_bool();
    else if (key == "campaign_type_rank") cfg.campaign_type_rank = to_size();
    else if (key == "keywords") cfg.keywords = value;
    else if (key == "keyword_window_start") cfg.keyword_window_start = parse_date(value);
    else if (key == "keyword_window_end") cfg.keyword_window_end = parse_date(value);
    else if (key == "bucket_seconds") cfg.bucket_seconds = std::stoll(value);
    else if (key == "min_group") cfg.min_group = to_size();
    else if (key == "shared_denominator") cfg.shared_denominator = value;
    else if (key == "synth_n_types") cfg.synth_cfg.n_types = to_size();
    else if (key == "synth_n_campaigns") cfg.synth_cfg.n_campaigns = to_size();
    else if (key == "synth_sites_lo") cfg.synth_cfg.sites_per_campaign.lo = to_size();
    else if (key == "synth_sites_hi") cfg.synth_cfg.sites_per_campaign.hi = to_size();
    else if (key == "synth_token_noise") cfg.synth_cfg.token_noise = to_dbl();
    else if (key == "synth_outliers") cfg.synth_cfg.outlier_sites = to_size();
    else if (key == "synth_victims_lo") cfg.synth_cfg.victims_per_site.lo = to_size();
    else if (key == "synth_victims_hi") cfg.synth_cfg.victims_per_site.hi = to_size();
    else if (key == "synth_scam_to_scam") cfg.synth_cfg.scam_to_scam_fraction = to_dbl();
    else if (key == "synth_lag_days") cfg.synth_cfg.mean_registration_lag_days = to_dbl();
    else if (key == "synth_eth_fraction") cfg.synth_cfg.ethereum_campaign_fraction = to_dbl();
    else if (key == "synth_cashout_mix") cfg.synth_cfg.cashout_mix = parse_cashout_mix(value);
    else log_warn("unknown config key: " + key);
}

void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            auto a = s.find_first_not_of(" \t\r");
            auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (!key.empty()) apply_config_entry(cfg, key, value);
    }
}

// ------------------------------------------------------------- resolution --

// Explicit config paths win; otherwise fall back to the synth fixture names
// inside the output directory so `synth` composes with later commands.
std::string resolve_input(const RunConfig& cfg, const std::string& explicit_path,
                          const char* synth_name) {
    if (!explicit_path.empty()) return explicit_path;
    std::string candidate = cfg.out + "/" + synth_name;
    if (io::file_exists(candidate)) return candidate;
    return {};
}

std::string require_input(const RunConfig& cfg, const std::string& explicit_path,
                          const char* synth_name, const char* what) {
    auto path = resolve_input(cfg, explicit_path, synth_name);
    if (path.empty())
        throw InvalidConfig(std::string("missing required input: ") + what +
                            " (set the '" + what + "' config key)");
    return path;
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

// --------------------------------------------------------------- pipeline --

std::vector<WebsiteSnapshot> ensure_snapshots(const RunConfig& cfg, bool write_norm) {
    std::string norm = cfg.out + "/snapshots.norm.jsonl";
    std::string src = io::file_exists(norm)
                          ? norm
                          : require_input(cfg, cfg.snapshots, "snapshots.jsonl", "snapshots");
    auto snapshots = io::load_snapshots(src);
    if (write_norm && src != norm) {
        std::vector<std::string> lines;
        for (const auto& s : snapshots) {
            ordered_json rec;
            rec["domain"] = s.domain;
            rec["page_text"] = s.page_text;
            rec["snapshot_time"] = format_timestamp(s.snapshot_time);
            rec["raw_html"] = s.raw_html;
            if (s.ip) rec["ip"] = *s.ip;
            if (s.server_country) rec["server_country"] = *s.server_country;
            if (s.type_label) rec["type_label"] = *s.type_label;
            rec["resource_urls"] = s.resource_urls;
            ordered_json addrs = ordered_json::array();
            for (const auto& a : s.addresses) addrs.push_back(a.canonical);
            rec["addresses"] = addrs;  // derived; ignored when reloaded
            rec["analytics_ids"] = s.analytics_ids;
            lines.push_back(rec.dump());
        }
        io::write_lines(norm, lines);
    }
    return snapshots;
}

std::vector<RegistrationRecord> ensure_registrations(const RunConfig& cfg) {
    auto path = require_input(cfg, cfg.registrations, "registrations.csv", "registrations");
    return io::load_registrations(path);
}

std::set<std::string> resolve_stop_words(const RunConfig& cfg) {
    if (!cfg.stop_words.empty()) return io::load_stop_words(cfg.stop_words);
    return textfeat::default_stop_words();
}

struct ChainArtifacts {
    std::vector<BlockchainCluster> kept;
    std::vector<BlockchainCluster> removed;
    chain::SizeStats stats{};
    std::size_t total = 0;
};

ChainArtifacts compute_chain_clusters(const RunConfig& cfg,
                                      const std::vector<ChainTransaction>& txs,
                                      const chain::LabelMap& labels, const PriceTable& prices) {
    auto clusters = chain::build_clusters(txs);
    clusters = chain::apply_change_heuristic(txs, clusters, cfg.change_heuristic);
    chain::annotate_clusters(clusters, labels);
    chain::CustodialThresholds thresholds{cfg.max_cluster_addresses,
                                          cfg.max_cluster_received_usd};
    auto filtered = chain::filter_custodial(clusters, labels, thresholds, txs, prices);
    ChainArtifacts out;
    out.total = clusters.size();
    out.kept = std::move(filtered.kept);
    out.removed = std::move(filtered.removed);
    if (!out.kept.empty()) out.stats = chain::cluster_size_stats(out.kept);
    return out;
}

ordered_json cluster_to_json(const BlockchainCluster& c) {
    ordered_json j;
    j["cluster_id"] = c.cluster_id;
    ordered_json addrs = ordered_json::array();
    for (const auto& a : c.addresses) addrs.push_back(a.canonical);
    j["addresses"] = addrs;
    j["custodial"] = c.custodial;
    if (c.entity) {
        ordered_json e;
        e["name"] = c.entity->name;
        e["category"] = category_name(c.entity->category);
        if (c.entity->country) e["country"] = *c.entity->country;
        j["entity"] = e;
    }
    return j;
}

void write_chain_artifacts(const RunConfig& cfg, const ChainArtifacts& art) {
    ordered_json clusters_json;
    clusters_json["kept"] = ordered_json::array();
    clusters_json["removed"] = ordered_json::array();
    for (const auto& c : art.kept) clusters_json["kept"].push_back(cluster_to_json(c));
    for (const auto& c : art.removed) clusters_json["removed"].push_back(cluster_to_json(c));
    io::write_json(cfg.out + "/chain_clusters.json", clusters_json);

    ordered_json stats;
    stats["total_clusters"] = art.total;
    stats["kept"] = art.kept.size();
    stats["removed"] = art.removed.size();
    stats["removed_fraction"] =
        art.total ? static_cast<double>(art.removed.size()) / static_cast<double>(art.total)
                  : 0.0;
    stats["kept_size_p50"] = art.stats.p50;
    stats["kept_size_p75"] = art.stats.p75;
    stats["kept_size_p90"] = art.stats.p90;
    io::write_json(cfg.out + "/chain_stats.json", stats);
}

ChainArtifacts load_chain_artifacts(const std::string& path) {
    auto j = io::load_json(path);
    ChainArtifacts out;
    auto parse_list = [](const nlohmann::json& arr, std::vector<BlockchainCluster>& dst) {
        for (const auto& cj : arr) {
            BlockchainCluster c;
            c.cluster_id = cj.at("cluster_id").get<int>();
            for (const auto& a : cj.at("addresses"))
                c.addresses.insert(io::address_from_key(a.get<std::string>()));
            c.custodial = cj.value("custodial", false);
            if (cj.contains("entity")) {
                EntityLabel label;
                label.name = cj["entity"].value("name", "");
                auto cat = parse_category(cj["entity"].value("category", "Other"));
                label.category = cat.value_or(Category::Other);
                if (cj["entity"].contains("country"))
                    label.country = cj["entity"]["country"].get<std::string>();
                c.entity = label;
            }
            dst.push_back(std::move(c));
        }
    };
    parse_list(j.at("kept"), out.kept);
    parse_list(j.at("removed"), out.removed);
    out.total = out.kept.size() + out.removed.size();
    return out;
}

ChainArtifacts ensure_chain_clusters(const RunConfig& cfg,
                                     const std::vector<ChainTransaction>& txs,
                                     const chain::LabelMap& labels, const PriceTable& prices) {
    std::string path = cfg.out + "/chain_clusters.json";
    if (io::file_exists(path)) return load_chain_artifacts(path);
    auto art = compute_chain_clusters(cfg, txs, labels, prices);
    write_chain_artifacts(cfg, art);
    return art;
}

// All clusters (kept + removed) in one list, with a lookup from address.
struct ClusterView {
    std::vector<BlockchainCluster> all;
    std::map<CryptoAddress, int> index;  // address -> position in `all`
    std::set<int> custodial_positions;
};

ClusterView make_view(const ChainArtifacts& art) {
    ClusterView v;
    for (const auto& c : art.kept) v.all.push_back(c);
    for (const auto& c : art.removed) {
        v.custodial_positions.insert(static_cast<int>(v.all.size()));
        v.all.push_back(c);
    }
    v.index = chain::address_cluster_index(v.all);
    return v;
}

// Majority (ties to the smaller id) non-noise type per domain.
std::map<std::string, int> domain_types(const std::vector<WebsiteSnapshot>& snapshots,
                                        const std::vector<int>& labels) {
    std::map<std::string, std::map<int, std::size_t>> votes;
    for (std::size_t i = 0; i < snapshots.size(); ++i) {
        if (labels[i] == clusterer::kNoise) continue;
        ++votes[snapshots[i].domain][labels[i]];
    }
    std::map<std::string, int> out;
    for (const auto& [domain, counts] : votes) {
        int best = -1;
        std::size_t best_count = 0;
        for (const auto& [type, count] : counts) {
            if (count > best_count) {
                best = type;
                best_count = count;
            }
        }
        out[domain] = best;
    }
    return out;
}

std::vector<int> load_type_labels(const RunConfig& cfg, std::size_t expected) {
    std::string path = cfg.out + "/type_assignment.csv";
    if (!io::file_exists(path))
        throw InvalidConfig("missing required input: type_assignment.csv (run cluster-types)");
    auto rows = io::load_assignment_csv(path);
    if (rows.size() != expected)
        throw InvalidConfig("type_assignment.csv does not match the snapshot count");
    std::vector<int> labels;
    labels.reserve(rows.size());
    for (const auto& [id, label] : rows) labels.push_back(label);
    return labels;
}

// Domains of the top `rank` types by member count, plus the type map.
std::pair<std::set<std::string>, std::map<std::string, int>> advance_fee_domains(
    const RunConfig& cfg, const std::vector<WebsiteSnapshot>& snapshots,
    const std::vector<int>& labels) {
    std::map<int, std::size_t> type_sizes;
    for (int l : labels)
        if (l != clusterer::kNoise) ++type_sizes[l];
    std::vector<std::pair<std::size_t, int>> ranked;
    for (const auto& [type, count] : type_sizes) ranked.emplace_back(count, type);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::set<int> top_types;
    for (std::size_t i = 0; i < ranked.size() && i < cfg.campaign_type_rank; ++i)
        top_types.insert(ranked[i].second);

    auto by_domain = domain_types(snapshots, labels);
    std::set<std::string> domains;
    for (const auto& [domain, type] : by_domain)
        if (top_types.count(type)) domains.insert(domain);
    return {domains, by_domain};
}

std::vector<clusterer::CampaignRecord> build_campaign_records(
    const std::vector<WebsiteSnapshot>& snapshots,
    const std::vector<RegistrationRecord>& registrations, const std::set<std::string>& domains) {
    std::map<std::string, const RegistrationRecord*> reg_by_domain;
    for (const auto& r : registrations) reg_by_domain.emplace(r.domain, &r);

    std::map<std::string, clusterer::CampaignRecord> by_domain;
    std::map<std::string, Timestamp> ip_time;
    for (const auto& snap : snapshots) {
        if (!domains.count(snap.domain)) continue;
        auto& rec = by_domain[snap.domain];
        rec.domain = snap.domain;
        rec.analytics_ids.insert(snap.analytics_ids.begin(), snap.analytics_ids.end());
        if (snap.ip) {
            auto it = ip_time.find(snap.domain);
            if (it == ip_time.end() || snap.snapshot_time < it->second) {
                rec.ip = snap.ip;
                ip_time[snap.domain] = snap.snapshot_time;
            }
        }
        auto reg = reg_by_domain.find(snap.domain);
        if (reg != reg_by_domain.end()) rec.registration = *reg->second;
    }
    std::vector<clusterer::CampaignRecord> out;
    for (auto& [domain, rec] : by_domain) out.push_back(std::move(rec));
    return out;
}

std::map<std::string, std::set<CryptoAddress>> domain_address_map(
    const std::vector<WebsiteSnapshot>& snapshots) {
    std::map<std::string, std::set<CryptoAddress>> out;
    for (const auto& snap : snapshots)
        out[snap.domain].insert(snap.addresses.begin(), snap.addresses.end());
    return out;
}

void emit_summary(const ordered_json& j) { std::cout << j.dump() << std::endl; }

// ---------------------------------------------------------------- commands --

int cmd_synth(RunConfig& cfg) {
    cfg.synth_cfg.seed = cfg.seed;
    auto eco = synth::generate_ecosystem(cfg.synth_cfg);
    io::write_ecosystem(cfg.out, eco);
    ordered_json summary;
    summary["command"] = "synth";
    summary["sites"] = eco.truth.site_type.size();
    summary["transactions"] = eco.txs.size();
    summary["labels"] = eco.labels.size();
    summary["victim_usd_total"] = eco.truth.victim_usd_total;
    emit_summary(summary);
    return 0;
}

int cmd_ingest(RunConfig& cfg) {
    auto snapshots = ensure_snapshots(cfg, true);
    ordered_json summary;
    summary["command"] = "ingest";
    summary["snapshots"] = snapshots.size();
    std::size_t with_addresses = 0;
    std::set<std::string> domains;
    for (const auto& s : snapshots) {
        domains.insert(s.domain);
        if (!s.addresses.empty()) ++with_addresses;
    }
    summary["domains"] = domains.size();
    summary["with_addresses"] = with_addresses;

    auto reg_path = resolve_input(cfg, cfg.registrations, "registrations.csv");
    if (!reg_path.empty()) {
        auto regs = io::load_registrations(reg_path);
        std::vector<std::string> lines;
        for (const auto& r : regs) {
            ordered_json rec;
            rec["domain"] = r.domain;
            if (r.registration_date) rec["registration_date"] = format_date(*r.registration_date);
            if (r.registrant_email_account) rec["registrant_email_account"] = *r.registrant_email_account;
            if (r.registrant_email_provider) rec["registrant_email_provider"] = *r.registrant_email_provider;
            if (r.registrant_country) rec["registrant_country"] = *r.registrant_country;
            if (r.registrar) rec["registrar"] = *r.registrar;
            lines.push_back(rec.dump());
        }
        io::write_lines(cfg.out + "/registrations.norm.jsonl", lines);
        summary["registrations"] = regs.size();
    }

    auto geo_path = resolve_input(cfg, cfg.geo, "geo.csv");
    if (!geo_path.empty()) {
        auto table = io::load_geo_table(geo_path);
        std::map<std::string, std::size_t> countries;
        for (const auto& s : snapshots) {
            if (!s.ip) continue;
            try {
                auto c = corpus::geolocate(*s.ip, table);
                ++countries[c.value_or("Unknown")];
            } catch (const MalformedIp&) {
                ++countries["Invalid"];
            }
        }
        ordered_json hist;
        for (const auto& [country, n] : countries) hist[country] = n;
        summary["ip_countries"] = hist;
    }
    emit_summary(summary);
    return 0;
}

int cmd_cluster_types(RunConfig& cfg) {
    auto snapshots = ensure_snapshots(cfg, true);
    auto stop_words = resolve_stop_words(cfg);
    auto eps = cfg.eps_flag ? cfg.eps_flag : cfg.eps_types;
    auto report = analysis::cluster_types(snapshots, stop_words, cfg.min_pts, eps, cfg.threads);

    std::vector<std::string> ids;
    for (std::size_t i = 0; i < snapshots.size(); ++i) ids.push_back(std::to_string(i));
    io::write_assignment_csv(cfg.out + "/type_assignment.csv", ids, report.assignment.labels);

    ordered_json rj;
    rj["eps"] = report.eps;
    rj["degenerate_eps"] = report.degenerate_eps;
    rj["min_pts"] = cfg.min_pts;
    rj["clusters"] = ordered_json::array();
    for (const auto& c : report.clusters) {
        ordered_json cj;
        cj["cluster_id"] = c.cluster_id;
        cj["member_count"] = c.member_count;
        cj["top_terms"] = c.top_terms;
        cj["domains"] = c.domains;
        rj["clusters"].push_back(std::move(cj));
    }
    rj["noise_count"] = report.noise_count;
    io::write_json(cfg.out + "/type_report.json", rj);

    ordered_json summary;
    summary["command"] = "cluster-types";
    summary["snapshots"] = snapshots.size();
    summary["clusters"] = report.clusters.size();
    summary["noise"] = report.noise_count;
    summary["eps"] = report.eps;
    emit_summary(summary);
    return 0;
}

int cmd_cluster_campaigns(RunConfig& cfg) {
    auto snapshots = ensure_snapshots(cfg, true);
    auto registrations = ensure_registrations(cfg);
    auto type_labels = load_type_labels(cfg, snapshots.size());
    auto [domains, domain_type] = advance_fee_domains(cfg, snapshots, type_labels);
    if (domains.empty()) throw InvalidConfig("no advance-fee domains to cluster");

    auto records = build_campaign_records(snapshots, registrations, domains);
    auto eps = cfg.eps_flag ? cfg.eps_flag : cfg.eps_campaigns;
    auto report =
        analysis::cluster_campaigns(records, domain_type, cfg.min_pts, eps, cfg.threads);

    io::write_assignment_csv(cfg.out + "/campaign_assignment.csv", report.record_domains,
                             report.assignment.labels);

    ordered_json rj;
    rj["eps"] = report.eps;
    rj["degenerate_eps"] = report.degenerate_eps;
    rj["min_pts"] = cfg.min_pts;
    rj["multi_type_fraction"] = report.multi_type_fraction;
    rj["ga_overlap_fraction"] = report.ga_overlap_fraction;
    rj["campaigns"] = ordered_json::array();
    for (const auto& c : report.campaigns) {
        ordered_json cj;
        cj["campaign_id"] = c.cluster_id;
        cj["domains"] = c.domains;
        cj["ips"] = c.ips;
        cj["registrars"] = c.registrars;
        cj["ga_overlap"] = c.ga_overlap;
        cj["type_ids"] = c.type_ids;
        rj["campaigns"].push_back(std::move(cj));
    }
    rj["noise_count"] = report.noise_count;
    io::write_json(cfg.out + "/campaign_report.json", rj);

    ordered_json summary;
    summary["command"] = "cluster-campaigns";
    summary["domains"] = records.size();
    summary["campaigns"] = report.campaigns.size();
    summary["noise"] = report.noise_count;
    summary["eps"] = report.eps;
    emit_summary(summary);
    return 0;
}

int cmd_chain_cluster(RunConfig& cfg) {
    auto tx_path = require_input(cfg, cfg.transactions, "transactions.jsonl", "transactions");
    auto txs = io::load_transactions(tx_path);
    chain::LabelMap labels;
    if (auto p = resolve_input(cfg, cfg.labels, "labels.csv"); !p.empty())
        labels = io::load_labels(p);
    PriceTable prices;
    if (auto p = resolve_input(cfg, cfg.prices, "prices.csv"); !p.empty())
        prices = io::load_prices(p);

    auto art = compute_chain_clusters(cfg, txs, labels, prices);
    write_chain_artifacts(cfg, art);

    ordered_json summary;
    summary["command"] = "chain-cluster";
    summary["transactions"] = txs.size();
    summary["clusters"] = art.total;
    summary["kept"] = art.kept.size();
    summary["removed"] = art.removed.size();
    summary["size_p50"] = art.stats.p50;
    summary["size_p75"] = art.stats.p75;
    summary["size_p90"] = art.stats.p90;
    emit_summary(summary);
    return 0;
}

ordered_json attribution_to_json(const trace::FlowAttribution& attr) {
    ordered_json j;
    j["direction"] = attr.direction == trace::Direction::Source ? "source" : "destination";
    j["category_table"] = ordered_json::array();
    for (const auto& row : trace::category_table(attr)) {
        ordered_json r;
        r["category"] = category_name(row.category);
        r["usd"] = row.usd;
        r["percent"] = row.percent;
        j["category_table"].push_back(std::move(r));
    }
    j["country_table"] = ordered_json::array();
    for (const auto& row : trace::country_table(attr)) {
        ordered_json r;
        r["country"] = row.country;
        r["usd"] = row.usd;
        r["percent"] = row.percent;
        j["country_table"].push_back(std::move(r));
    }
    j["unattributed_usd"] = attr.unattributed_usd;
    return j;
}

void write_attribution_csv(const std::string& path, const trace::FlowAttribution& attr) {
    std::vector<std::string> lines = {"direction,scam_cluster,category,country,usd"};
    std::string dir = attr.direction == trace::Direction::Source ? "source" : "destination";
    for (const auto& row : attr.rows) {
        lines.push_back(dir + "," + std::to_string(row.scam_cluster) + "," +
                        category_name(row.category) + "," + row.country.value_or("Unknown") +
                        "," + fmt_double(row.usd));
    }
    io::write_lines(path, lines);
}

int cmd_trace(RunConfig& cfg) {
    auto tx_path = require_input(cfg, cfg.transactions, "transactions.jsonl", "transactions");
    auto labels_path = require_input(cfg, cfg.labels, "labels.csv", "labels");
    auto prices_path = require_input(cfg, cfg.prices, "prices.csv", "prices");
    auto txs = io::load_transactions(tx_path);
    auto labels = io::load_labels(labels_path);
    auto prices = io::load_prices(prices_path);
    auto snapshots = ensure_snapshots(cfg, true);
    auto art = ensure_chain_clusters(cfg, txs, labels, prices);
    auto view = make_view(art);

    // Scam set: clusters advertised by snapshots, custodial ones excluded.
    std::set<int> scam_set;
    for (const auto& snap : snapshots) {
        for (const auto& addr : snap.addresses) {
            auto it = view.index.find(addr);
            if (it == view.index.end()) continue;
            if (view.custodial_positions.count(it->second)) continue;
            scam_set.insert(it->second);
        }
    }
    if (scam_set.empty()) throw InvalidConfig("no scam clusters to trace (run chain-cluster?)");

    trace::TraceParams params{cfg.max_hops, cfg.dust_threshold_usd};
    auto sources = trace::trace_sources(scam_set, view.all, txs, labels, prices, params);
    auto destinations =
        trace::trace_destinations(scam_set, view.all, txs, labels, prices, params);

    write_attribution_csv(cfg.out + "/source_attribution.csv", sources);
    write_attribution_csv(cfg.out + "/destination_attribution.csv", destinations);

    ordered_json tj;
    tj["scam_clusters"] = scam_set.size();
    tj["sources"] = attribution_to_json(sources);
    tj["destinations"] = attribution_to_json(destinations);
    tj["scam_to_scam"] = ordered_json::array();
    for (const auto& [scam, usd] : trace::detect_scam_to_scam(sources)) {
        ordered_json r;
        r["scam_cluster"] = scam;
        r["usd"] = usd;
        tj["scam_to_scam"].push_back(std::move(r));
    }
    io::write_json(cfg.out + "/trace_summary.json", tj);

    ordered_json summary;
    summary["command"] = "trace";
    summary["scam_clusters"] = scam_set.size();
    summary["source_rows"] = sources.rows.size();
    summary["destination_rows"] = destinations.rows.size();
    summary["source_unattributed_usd"] = sources.unattributed_usd;
    emit_summary(summary);
    return 0;
}

int cmd_pivot(RunConfig& cfg) {
    auto snapshots = ensure_snapshots(cfg, true);
    auto pivot = corpus::shared_resource_pivot(snapshots, cfg.min_group);

    ordered_json pj;
    for (const auto& [url, domains] : pivot) pj[url] = domains;
    io::write_json(cfg.out + "/pivot.json", pj);
    std::vector<std::string> lines = {"resource_url,domain"};
    for (const auto& [url, domains] : pivot)
        for (const auto& d : domains) lines.push_back(csv_escape(url) + "," + csv_escape(d));
    io::write_lines(cfg.out + "/pivot.csv", lines);

    ordered_json summary;
    summary["command"] = "pivot";
    summary["shared_resources"] = pivot.size();
    emit_summary(summary);
    return 0;
}

int cmd_report(RunConfig& cfg) {
    auto snapshots = ensure_snapshots(cfg, true);
    auto registrations = ensure_registrations(cfg);
    auto type_labels = load_type_labels(cfg, snapshots.size());
    auto tx_path = require_input(cfg, cfg.transactions, "transactions.jsonl", "transactions");
    auto prices_path = require_input(cfg, cfg.prices, "prices.csv", "prices");
    auto txs = io::load_transactions(tx_path);
    auto prices = io::load_prices(prices_path);
    chain::LabelMap labels;
    if (auto p = resolve_input(cfg, cfg.labels, "labels.csv"); !p.empty())
        labels = io::load_labels(p);
    auto art = ensure_chain_clusters(cfg, txs, labels, prices);
    auto view = make_view(art);

    auto domain_type = domain_types(snapshots, type_labels);
    auto domain_addresses = domain_address_map(snapshots);

    // type -> kept blockchain clusters, and per (type, cluster) domain counts.
    std::map<int, std::set<int>> type_clusters;
    std::map<std::pair<int, int>, std::size_t> site_counts;
    for (const auto& [domain, type] : domain_type) {
        std::set<int> clusters_of_domain;
        for (const auto& addr : domain_addresses[domain]) {
            auto it = view.index.find(addr);
            if (it == view.index.end() || view.custodial_positions.count(it->second)) continue;
            clusters_of_domain.insert(it->second);
        }
        for (int c : clusters_of_domain) {
            type_clusters[type].insert(c);
            ++site_counts[{type, c}];
        }
    }
    auto denom = cfg.shared_denominator == "min" ? analysis::SharedDenominator::Min
                                                 : analysis::SharedDenominator::Union;
    auto reuse = analysis::reuse_stats(type_clusters, site_counts, denom);

    // Campaign overlap, when the campaign stage has run.
    ordered_json overlap_json = ordered_json::object();
    if (io::file_exists(cfg.out + "/campaign_assignment.csv")) {
        auto assignment = io::load_assignment_csv(cfg.out + "/campaign_assignment.csv");
        analysis::CampaignReport campaigns;
        std::map<int, analysis::Campaign> by_id;
        for (const auto& [domain, label] : assignment) {
            if (label == clusterer::kNoise) continue;
            by_id[label].cluster_id = label;
            by_id[label].domains.push_back(domain);
        }
        for (auto& [id, c] : by_id) campaigns.campaigns.push_back(std::move(c));
        std::map<CryptoAddress, int> addr_cluster;
        for (const auto& [addr, pos] : view.index)
            if (!view.custodial_positions.count(pos)) addr_cluster[addr] = pos;
        auto graph = analysis::campaign_overlap_graph(campaigns, domain_addresses, addr_cluster);
        overlap_json["nodes"] = graph.nodes;
        overlap_json["edges"] = ordered_json::array();
        for (const auto& e : graph.edges) {
            ordered_json ej;
            ej["a"] = e.a;
            ej["b"] = e.b;
            ej["shared_clusters"] = e.shared_clusters;
            overlap_json["edges"].push_back(std::move(ej));
        }
        overlap_json["components"] = graph.components;
    }

    // Registration-to-payment ECDF.
    std::map<std::string, Date> reg_dates;
    for (const auto& r : registrations)
        if (r.registration_date) reg_dates[r.domain] = *r.registration_date;
    std::map<CryptoAddress, std::set<std::string>> address_domains;
    for (const auto& [domain, addrs] : domain_addresses)
        for (const auto& a : addrs) address_domains[a].insert(domain);
    std::vector<analysis::Payment> payments;
    for (const auto& tx : txs) {
        std::map<std::string, double> usd_by_domain;
        for (const auto& slot : tx.outputs) {
            auto it = address_domains.find(slot.address);
            if (it == address_domains.end()) continue;
            double usd = chain::to_usd(slot.value, tx.chain, date_of(tx.timestamp), prices);
            for (const auto& d : it->second) usd_by_domain[d] += usd;
        }
        for (const auto& [domain, usd] : usd_by_domain)
            payments.push_back({domain, tx.timestamp, usd});
    }
    ordered_json ecdf_json = ordered_json::object();
    std::vector<std::string> ecdf_lines = {"lag_days,cumulative_fraction"};
    try {
        auto ecdf = analysis::registration_payment_ecdf(reg_dates, payments);
        for (const auto& [lag, frac] : ecdf.points)
            ecdf_lines.push_back(std::to_string(lag) + "," + fmt_double(frac));
        ecdf_json["included_payments"] = ecdf.included;
        ecdf_json["excluded_negative"] = ecdf.excluded_negative;
        ecdf_json["at7"] = ecdf.at7;
        ecdf_json["at14"] = ecdf.at14;
        ecdf_json["at30"] = ecdf.at30;
    } catch (const NoIncludedPayments&) {
        ecdf_json["included_payments"] = 0;
        log_warn("no payments after registration; ECDF empty");
    }
    io::write_lines(cfg.out + "/ecdf.csv", ecdf_lines);

    // Keyword trend over the registration window.
    ordered_json keyword_json = ordered_json::object();
    if (!reg_dates.empty()) {
        Date lo = reg_dates.begin()->second, hi = lo;
        for (const auto& [d, date] : reg_dates) {
            lo = std::min(lo, date);
            hi = std::max(hi, date);
        }
        if (cfg.keyword_window_start) lo = *cfg.keyword_window_start;
        if (cfg.keyword_window_end) hi = *cfg.keyword_window_end;
        std::set<std::string> keywords;
        std::stringstream ss(cfg.keywords);
        std::string kw;
        while (std::getline(ss, kw, ',')) {
            if (!kw.empty()) keywords.insert(kw);
        }
        try {
            keyword_json["fraction"] = analysis::keyword_trend(reg_dates, {lo, hi}, keywords);
            keyword_json["window_start"] = format_date(lo);
            keyword_json["window_end"] = format_date(hi);
            keyword_json["keywords"] = keywords;
        } catch (const EmptyWindow&) {
            log_warn("keyword window is empty");
        }
    }

    // Inflow time series per type.
    auto series =
        analysis::inflow_timeseries(type_clusters, view.all, txs, prices, cfg.bucket_seconds);
    std::vector<std::string> series_lines = {"type_id,bucket_start,chain,usd,tx_count"};
    for (const auto& row : series)
        series_lines.push_back(std::to_string(row.type_id) + "," +
                               format_timestamp(row.bucket_start) + "," +
                               chain_name(row.chain) + "," + fmt_double(row.usd) + "," +
                               std::to_string(row.tx_count));
    io::write_lines(cfg.out + "/inflow_timeseries.csv", series_lines);

    ordered_json rj;
    rj["reuse_fraction"] = ordered_json::object();
    for (const auto& [type, frac] : reuse.reuse_fraction)
        rj["reuse_fraction"][std::to_string(type)] = frac;
    rj["shared_fraction"] = ordered_json::array();
    for (const auto& [pair, frac] : reuse.shared_fraction) {
        ordered_json sj;
        sj["type_a"] = pair.first;
        sj["type_b"] = pair.second;
        sj["fraction"] = frac;
        rj["shared_fraction"].push_back(std::move(sj));
    }
    rj["overlap_graph"] = overlap_json;
    rj["ecdf"] = ecdf_json;
    rj["keyword_trend"] = keyword_json;
    io::write_json(cfg.out + "/report.json", rj);

    ordered_json summary;
    summary["command"] = "report";
    summary["types"] = type_clusters.size();
    summary["payments"] = payments.size();
    summary["inflow_buckets"] = series.size();
    emit_summary(summary);
    return 0;
}

int cmd_eval(RunConfig& cfg) {
    std::string truth_path = cfg.out + "/ground_truth.json";
    if (!io::file_exists(truth_path))
        throw InvalidConfig("missing required input: ground_truth.json (run synth)");
    auto truth = io::load_json(truth_path);
    auto snapshots = ensure_snapshots(cfg, true);

    ordered_json ej;
    {
        auto labels = load_type_labels(cfg, snapshots.size());
        std::vector<int> truth_labels;
        for (const auto& s : snapshots) {
            const auto& st = truth.at("site_type");
            truth_labels.push_back(st.contains(s.domain) ? st[s.domain].get<int>() : -1);
        }
        clusterer::ClusterAssignment predicted;
        predicted.labels = labels;
        auto eval = synth::evaluate(predicted, truth_labels);
        ordered_json tj;
        tj["ari"] = eval.ari;
        tj["pairwise_f1"] = eval.pairwise_f1;
        tj["noise_precision"] = eval.noise_precision;
        tj["noise_recall"] = eval.noise_recall;
        ej["type"] = tj;
    }
    if (io::file_exists(cfg.out + "/campaign_assignment.csv")) {
        auto assignment = io::load_assignment_csv(cfg.out + "/campaign_assignment.csv");
        clusterer::ClusterAssignment predicted;
        std::vector<int> truth_labels;
        const auto& sc = truth.at("site_campaign");
        for (const auto& [domain, label] : assignment) {
            predicted.labels.push_back(label);
            truth_labels.push_back(sc.contains(domain) ? sc[domain].get<int>() : -1);
        }
        auto eval = synth::evaluate(predicted, truth_labels);
        ordered_json cj;
        cj["ari"] = eval.ari;
        cj["pairwise_f1"] = eval.pairwise_f1;
        cj["noise_precision"] = eval.noise_precision;
        cj["noise_recall"] = eval.noise_recall;
        ej["campaign"] = cj;
    }
    io::write_json(cfg.out + "/eval.json", ej);

    ordered_json summary = ej;
    summary["command"] = "eval";
    emit_summary(summary);
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"scamtrace: scam-website clustering and fund-flow forensics"};
    std::string command;
    app.add_option("command", command, "one of: ingest cluster-types cluster-campaigns "
                                       "chain-cluster trace report synth eval pivot")
        ->required();
    std::string config_path;
    app.add_option("--config", config_path, "key = value config file");
    std::string out_flag;
    app.add_option("--out", out_flag, "output directory");
    std::optional<std::size_t> min_pts_flag;
    app.add_option("--min-pts", min_pts_flag, "DBSCAN MinPts");
    std::optional<double> eps_flag;
    app.add_option("--eps", eps_flag, "override the selected eps");
    std::optional<unsigned> threads_flag;
    app.add_option("--threads", threads_flag, "worker cap for neighbor queries");
    std::optional<std::uint64_t> seed_flag;
    app.add_option("--seed", seed_flag, "seed for synthetic generation");
    bool change_flag = false;
    app.add_flag("--enable-change-heuristic", change_flag, "turn on the change heuristic");
    std::optional<std::size_t> max_hops_flag;
    app.add_option("--max-hops", max_hops_flag, "trace hop cap");

    std::vector<std::string> argv = args;
    std::reverse(argv.begin(), argv.end());
    try {
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) load_config_file(cfg, config_path);
        if (!out_flag.empty()) cfg.out = out_flag;
        if (min_pts_flag) cfg.min_pts = *min_pts_flag;
        if (eps_flag) cfg.eps_flag = eps_flag;
        if (threads_flag) cfg.threads = *threads_flag;
        if (seed_flag) cfg.seed = *seed_flag;
        if (change_flag) cfg.change_heuristic = true;
        if (max_hops_flag) cfg.max_hops = *max_hops_flag;
        if (cfg.min_pts < 1) throw InvalidConfig("min_pts must be >= 1");
        if (cfg.threads < 1) cfg.threads = 1;

        std::filesystem::create_directories(cfg.out);
        log_info("command " + command + " -> " + cfg.out);

        if (command == "synth") return cmd_synth(cfg);
        if (command == "ingest") return cmd_ingest(cfg);
        if (command == "cluster-types") return cmd_cluster_types(cfg);
        if (command == "cluster-campaigns") return cmd_cluster_campaigns(cfg);
        if (command == "chain-cluster") return cmd_chain_cluster(cfg);
        if (command == "trace") return cmd_trace(cfg);
        if (command == "report") return cmd_report(cfg);
        if (command == "eval") return cmd_eval(cfg);
        if (command == "pivot") return cmd_pivot(cfg);
        throw InvalidConfig("unknown command: " + command);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace scamtrace::cli
