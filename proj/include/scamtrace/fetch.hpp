#pragma once

#include <string>
#include <vector>

#include "scamtrace/types.hpp"

// Minimal client for a URLScan-compatible snapshot API. Strictly opt-in;
// nothing in the pipeline calls this unless asked to.
namespace scamtrace::fetch {

// GET /search?q=domain:<domain>, then each hit's result URL for the page
// body. Hits carry page.ip, page.country, and task.time. Throws IoError on
// transport failure and MalformedRecord on unusable responses.
std::vector<WebsiteSnapshot> fetch_domain_snapshots(const std::string& host, int port,
                                                    const std::string& domain);

}  // namespace scamtrace::fetch
