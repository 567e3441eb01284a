#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scamtrace/chain.hpp"
#include "scamtrace/corpus.hpp"
#include "scamtrace/synth.hpp"
#include "scamtrace/types.hpp"

// Readers and writers for the external file formats (JSONL snapshots and
// transactions, CSV registrations/labels/prices/geo/assignments).
namespace scamtrace::io {

std::vector<WebsiteSnapshot> load_snapshots(const std::string& path);
std::vector<RegistrationRecord> load_registrations(const std::string& path);
std::vector<ChainTransaction> load_transactions(const std::string& path);
chain::LabelMap load_labels(const std::string& path);
PriceTable load_prices(const std::string& path);
corpus::GeoTable load_geo_table(const std::string& path);
std::set<std::string> load_stop_words(const std::string& path);

// `item_id,cluster_id` with NOISE serialized as -1.
void write_assignment_csv(const std::string& path, const std::vector<std::string>& item_ids,
                          const std::vector<int>& labels);
std::vector<std::pair<std::string, int>> load_assignment_csv(const std::string& path);

void write_lines(const std::string& path, const std::vector<std::string>& lines);
void write_text(const std::string& path, const std::string& text);
void write_json(const std::string& path, const nlohmann::ordered_json& j);
nlohmann::json load_json(const std::string& path);

// Serialization helpers shared by the CLI and the synth writer.
nlohmann::ordered_json transaction_to_json(const ChainTransaction& tx);
ChainTransaction transaction_from_json(const nlohmann::json& j);
std::string address_key(const CryptoAddress& addr);  // chain inferred back via prefix
CryptoAddress address_from_key(const std::string& key);

void write_ecosystem(const std::string& dir, const synth::Ecosystem& eco);
nlohmann::ordered_json ground_truth_to_json(const synth::GroundTruth& truth);

bool file_exists(const std::string& path);

}  // namespace scamtrace::io
