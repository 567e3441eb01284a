#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace scamtrace {

// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;
// Days since the Unix epoch, UTC (floor of timestamp / 86400).
using Date = std::int32_t;

constexpr std::int64_t kSecondsPerDay = 86400;

Date date_of(Timestamp ts);
Timestamp midnight(Date d);

// "YYYY-MM-DD" <-> days since epoch (proleptic Gregorian).
std::optional<Date> parse_date(const std::string& s);
std::string format_date(Date d);

// ISO-8601 timestamp, e.g. "2018-07-01T12:34:56Z"; accepts an optional
// fractional-seconds part and "+HH:MM" offsets.
std::optional<Timestamp> parse_timestamp(const std::string& s);
std::string format_timestamp(Timestamp ts);

Date days_from_civil(int y, unsigned m, unsigned d);
void civil_from_days(Date z, int& y, unsigned& m, unsigned& d);

}  // namespace scamtrace
