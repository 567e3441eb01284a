#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace scamtrace {

// Minimal RFC-4180 CSV: quoted fields, "" escapes, no embedded newlines.
std::vector<std::string> split_csv_line(const std::string& line);
std::string csv_escape(const std::string& field);
std::string join_csv(const std::vector<std::string>& fields);

// Reads all rows of a CSV file; first row is returned too (callers check the
// header). Throws IoError if the file cannot be opened.
std::vector<std::vector<std::string>> read_csv(const std::string& path);

}  // namespace scamtrace
