#pragma once

#include <cstdint>
#include <string>

namespace ballotlens {

// Proleptic Gregorian calendar date. Cheap value type, totally ordered.
struct Date {
  int year = 1970;
  int month = 1;  // 1..12
  int day = 1;    // 1..31

  auto operator<=>(const Date&) const = default;
};

// Days since 1970-01-01 (negative before).
std::int64_t to_days(const Date& d);
Date from_days(std::int64_t days);

// 0 = Sunday ... 6 = Saturday.
int weekday(const Date& d);

Date add_days(const Date& d, std::int64_t n);

std::string to_iso(const Date& d);       // YYYY-MM-DD
std::string to_yyyymmdd(const Date& d);  // YYYYMMDD, the wire format
Date parse_iso(const std::string& s);    // throws SchemaError on malformed input

// First Tuesday strictly after November 1 of an even year.
// Throws OddYearError for odd years.
Date election_day(int year);

// Inclusive date range [begin, end].
struct DateRange {
  Date begin;
  Date end;

  std::int64_t length_days() const { return to_days(end) - to_days(begin) + 1; }
};

// The 52 complete weeks (364 days) ending on election day.
DateRange collection_window(const Date& eday);

}  // namespace ballotlens
