#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scamtrace/chain.hpp"
#include "scamtrace/clusterer.hpp"
#include "scamtrace/types.hpp"

// Synthetic scam ecosystems with planted ground truth: typed site templates,
// campaign infrastructure, owner-wired address pools, victim inflows, seed
// transfers, and cash-outs.
namespace scamtrace::synth {

struct Range {
    std::size_t lo = 1;
    std::size_t hi = 1;
};

struct SynthConfig {
    std::uint64_t seed = 1;
    std::size_t n_types = 3;
    std::size_t n_campaigns = 6;
    Range sites_per_campaign{6, 10};
    double token_noise = 0.0;
    std::size_t outlier_sites = 0;
    Range victims_per_site{1, 3};
    std::map<Category, double> cashout_mix = {
        {Category::FiatExchange, 6.0},
        {Category::CryptoExchange, 2.0},
        {Category::Gambling, 2.0},
        {Category::Mixer, 1.0},
    };
    double scam_to_scam_fraction = 0.1;
    double mean_registration_lag_days = 6.0;  // geometric lag to first payments
    double ethereum_campaign_fraction = 0.25;
};

enum class TxRole { VictimPayment, SeedTransfer, Cashout, Background };

std::string tx_role_name(TxRole role);

struct GroundTruth {
    std::map<std::string, int> site_type;      // -1 for planted outliers
    std::map<std::string, int> site_campaign;  // -1 for planted outliers
    std::map<CryptoAddress, int> address_owner;
    std::map<std::string, TxRole> tx_role;
    std::map<int, std::vector<int>> owner_campaigns;
    double victim_usd_total = 0.0;
    double seed_usd_total = 0.0;
};

struct RegistrationRow {
    RegistrationRecord record;
    std::string raw_email;  // as written to the registrations CSV
};

struct LabelRow {
    CryptoAddress address;
    EntityLabel label;
};

struct Ecosystem {
    std::vector<nlohmann::ordered_json> snapshots;  // snapshot input schema records
    std::vector<RegistrationRow> registrations;
    std::vector<ChainTransaction> txs;
    std::vector<LabelRow> labels;
    PriceTable prices;
    std::vector<std::pair<std::string, std::string>> geo;  // (cidr, country)
    GroundTruth truth;
};

// Deterministic in `config` (byte-identical outputs for equal configs).
// Throws InvalidConfig.
Ecosystem generate_ecosystem(const SynthConfig& config);

struct Evaluation {
    double ari = 0.0;
    double pairwise_f1 = 0.0;
    double noise_precision = 0.0;
    double noise_recall = 0.0;
};

// truth_labels uses -1 for planted outliers; they are scored as noise.
Evaluation evaluate(const clusterer::ClusterAssignment& predicted,
                    const std::vector<int>& truth_labels);

}  // namespace scamtrace::synth
