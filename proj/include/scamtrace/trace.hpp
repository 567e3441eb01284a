#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "scamtrace/chain.hpp"
#include "scamtrace/types.hpp"

// Attribution of scam inflows to source entities and outflows to destination
// entities via hop-bounded pro-rata value propagation.
namespace scamtrace::trace {

struct TraceParams {
    std::size_t max_hops = 20;
    double dust_threshold_usd = 0.01;
};

enum class Direction { Source, Destination };

struct AttributionRow {
    int scam_cluster = 0;
    Category category = Category::Other;
    std::optional<std::string> country;
    double usd = 0.0;
};

struct FlowAttribution {
    Direction direction = Direction::Source;
    std::vector<AttributionRow> rows;  // aggregated per (scam, category, country)
    double unattributed_usd = 0.0;
    std::map<int, double> unattributed_by_scam;
    std::map<int, double> traced_total_by_scam;
};

// Walks each payment into a scam cluster backward, splitting pro-rata across
// the delivering transactions, until a labelled cluster, a coinbase (Miner),
// the hop cap, or the dust cutoff.
FlowAttribution trace_sources(const std::set<int>& scam_clusters,
                              const std::vector<BlockchainCluster>& clusters,
                              const std::vector<ChainTransaction>& txs,
                              const chain::LabelMap& labels, const PriceTable& prices,
                              const TraceParams& params);

// Mirror of trace_sources along transaction outputs.
FlowAttribution trace_destinations(const std::set<int>& scam_clusters,
                                   const std::vector<BlockchainCluster>& clusters,
                                   const std::vector<ChainTransaction>& txs,
                                   const chain::LabelMap& labels, const PriceTable& prices,
                                   const TraceParams& params);

struct CategoryRow {
    Category category = Category::Other;
    double usd = 0.0;
    double percent = 0.0;
};

// USD per category with the unattributed share folded into Other; sorted
// descending by USD.
std::vector<CategoryRow> category_table(const FlowAttribution& attr);

struct CountryRow {
    std::string country;  // "Unknown" for unlabelled
    double usd = 0.0;
    double percent = 0.0;
};

// Exchange-category rows aggregated by entity country.
std::vector<CountryRow> country_table(const FlowAttribution& attr);

// Scam clusters funded by other scams, sorted descending by USD.
std::vector<std::pair<int, double>> detect_scam_to_scam(const FlowAttribution& source_attr);

}  // namespace scamtrace::trace
