#pragma once

#include <optional>
#include <string>
#include <vector>

// Command-line pipeline: ingest, cluster-types, cluster-campaigns,
// chain-cluster, trace, report, synth, eval, pivot.
namespace scamtrace::cli {

// argv-style arguments without the program name. Returns the process exit
// code: 0 success, 1 validation error, 2 I/O error.
int run(const std::vector<std::string>& args);

}  // namespace scamtrace::cli
