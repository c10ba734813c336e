#include "ballotlens/dates.hpp"

#include <cstdio>

#include "ballotlens/errors.hpp"

namespace ballotlens {

// Howard Hinnant's days-from-civil algorithm.
std::int64_t to_days(const Date& d) {
  int y = d.year;
  unsigned m = static_cast<unsigned>(d.month);
  unsigned day = static_cast<unsigned>(d.day);
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + day - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

Date from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned day = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  return Date{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(day)};
}

int weekday(const Date& d) {
  std::int64_t z = to_days(d);
  return static_cast<int>(z >= -4 ? (z + 4) % 7 : (z + 5) % 7 + 6);
}

Date add_days(const Date& d, std::int64_t n) { return from_days(to_days(d) + n); }

std::string to_iso(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

std::string to_yyyymmdd(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d%02d%02d", d.year, d.month, d.day);
  return buf;
}

Date parse_iso(const std::string& s) {
  int y = 0, m = 0, day = 0;
  if (std::sscanf(s.c_str(), "%d-%d-%d", &y, &m, &day) != 3 || m < 1 || m > 12 || day < 1 ||
      day > 31) {
    throw SchemaError("malformed date: '" + s + "'");
  }
  return Date{y, m, day};
}

Date election_day(int year) {
  if (year % 2 != 0) throw OddYearError("election year must be even, got " + std::to_string(year));
  Date d{year, 11, 2};
  while (weekday(d) != 2) d = add_days(d, 1);  // 2 = Tuesday
  return d;
}

DateRange collection_window(const Date& eday) { return DateRange{add_days(eday, -363), eday}; }

}  // namespace ballotlens
