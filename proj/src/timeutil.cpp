#include "scamtrace/timeutil.hpp"

#include <cctype>
#include <cstdio>

namespace scamtrace {

namespace {

// Howard Hinnant's civil-days algorithms.
constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    return a / b - ((a % b != 0) && ((a % b < 0) != (b < 0)) ? 1 : 0);
}

bool read_int(const std::string& s, size_t& pos, size_t digits, int& out) {
    if (pos + digits > s.size()) return false;
    int v = 0;
    for (size_t i = 0; i < digits; ++i) {
        char c = s[pos + i];
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        v = v * 10 + (c - '0');
    }
    pos += digits;
    out = v;
    return true;
}

}  // namespace

Date date_of(Timestamp ts) {
    return static_cast<Date>(floor_div(ts, kSecondsPerDay));
}

Timestamp midnight(Date d) { return static_cast<Timestamp>(d) * kSecondsPerDay; }

Date days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return static_cast<Date>(era * 146097 + static_cast<int>(doe) - 719468);
}

void civil_from_days(Date z, int& y, unsigned& m, unsigned& d) {
    std::int64_t zz = z + 719468;
    const std::int64_t era = floor_div(zz, 146097);
    const unsigned doe = static_cast<unsigned>(zz - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y = static_cast<int>(yy + (m <= 2));
}

std::optional<Date> parse_date(const std::string& s) {
    size_t pos = 0;
    int y, m, d;
    if (!read_int(s, pos, 4, y)) return std::nullopt;
    if (pos >= s.size() || s[pos] != '-') return std::nullopt;
    ++pos;
    if (!read_int(s, pos, 2, m)) return std::nullopt;
    if (pos >= s.size() || s[pos] != '-') return std::nullopt;
    ++pos;
    if (!read_int(s, pos, 2, d)) return std::nullopt;
    if (pos != s.size()) return std::nullopt;
    if (m < 1 || m > 12 || d < 1 || d > 31) return std::nullopt;
    return days_from_civil(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
}

std::string format_date(Date dd) {
    int y;
    unsigned m, d;
    civil_from_days(dd, y, m, d);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", y, m, d);
    return buf;
}

std::optional<Timestamp> parse_timestamp(const std::string& s) {
    size_t pos = 0;
    int y, mo, d, h, mi, se;
    if (!read_int(s, pos, 4, y)) return std::nullopt;
    if (pos >= s.size() || s[pos] != '-') return std::nullopt;
    ++pos;
    if (!read_int(s, pos, 2, mo)) return std::nullopt;
    if (pos >= s.size() || s[pos] != '-') return std::nullopt;
    ++pos;
    if (!read_int(s, pos, 2, d)) return std::nullopt;
    if (mo < 1 || mo > 12 || d < 1 || d > 31) return std::nullopt;
    std::int64_t days = days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d));
    if (pos == s.size())  // bare date: midnight UTC
        return days * kSecondsPerDay;
    if (s[pos] != 'T' && s[pos] != ' ') return std::nullopt;
    ++pos;
    if (!read_int(s, pos, 2, h)) return std::nullopt;
    if (pos >= s.size() || s[pos] != ':') return std::nullopt;
    ++pos;
    if (!read_int(s, pos, 2, mi)) return std::nullopt;
    if (pos >= s.size() || s[pos] != ':') return std::nullopt;
    ++pos;
    if (!read_int(s, pos, 2, se)) return std::nullopt;
    if (h > 23 || mi > 59 || se > 60) return std::nullopt;
    if (pos < s.size() && s[pos] == '.') {  // fractional seconds: ignored
        ++pos;
        if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) return std::nullopt;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    std::int64_t offset = 0;
    if (pos < s.size()) {
        char c = s[pos];
        if (c == 'Z') {
            ++pos;
        } else if (c == '+' || c == '-') {
            ++pos;
            int oh, om;
            if (!read_int(s, pos, 2, oh)) return std::nullopt;
            if (pos < s.size() && s[pos] == ':') ++pos;
            if (!read_int(s, pos, 2, om)) return std::nullopt;
            offset = (c == '+' ? -1 : 1) * (oh * 3600 + om * 60);
        } else {
            return std::nullopt;
        }
    }
    if (pos != s.size()) return std::nullopt;
    return days * kSecondsPerDay + h * 3600 + mi * 60 + se + offset;
}

std::string format_timestamp(Timestamp ts) {
    Date days = date_of(ts);
    std::int64_t rem = ts - midnight(days);
    int y;
    unsigned m, d;
    civil_from_days(days, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ", y, m, d,
                  static_cast<int>(rem / 3600), static_cast<int>(rem / 60 % 60),
                  static_cast<int>(rem % 60));
    return buf;
}

}  // namespace scamtrace
