#pragma once

#include <cstdint>
#include <string>

namespace riverbank {

// Proleptic Gregorian calendar date. Only day-level arithmetic is needed
// (capture dates and annual-rate intervals), so this stays deliberately small.
struct CivilDate {
    int year = 1970;
    int month = 1;  // 1..12
    int day = 1;    // 1..31

    bool operator==(const CivilDate&) const = default;
};

// Days since 1970-01-01 (negative before). Howard Hinnant's civil algorithm.
std::int64_t days_from_civil(const CivilDate& d);

// Signed day count b - a.
std::int64_t days_between(const CivilDate& a, const CivilDate& b);

// Parses "YYYY-MM-DD". Throws IoError on malformed input or impossible dates.
CivilDate parse_iso_date(const std::string& s);

std::string format_iso_date(const CivilDate& d);

}  // namespace riverbank
