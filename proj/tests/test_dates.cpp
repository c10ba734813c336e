#include "ballotlens/dates.hpp"

#include "ballotlens/errors.hpp"
#include "doctest.h"

using namespace ballotlens;

TEST_CASE("election day follows the first-Tuesday-after-Nov-1 rule") {
  CHECK(election_day(2016) == Date{2016, 11, 8});
  CHECK(election_day(2018) == Date{2018, 11, 6});
  CHECK(election_day(2020) == Date{2020, 11, 3});
  CHECK(election_day(2022) == Date{2022, 11, 8});
  CHECK_THROWS_AS(election_day(2015), OddYearError);
}

TEST_CASE("election day is always a Tuesday in Nov 2-8") {
  for (int y = 1990; y <= 2060; y += 2) {
    Date d = election_day(y);
    CHECK(weekday(d) == 2);
    CHECK(d.month == 11);
    CHECK(d.day >= 2);
    CHECK(d.day <= 8);
  }
}

TEST_CASE("day arithmetic round-trips") {
  Date d{2016, 11, 8};
  CHECK(from_days(to_days(d)) == d);
  CHECK(add_days(d, -363) == Date{2015, 11, 11});
  CHECK(add_days(Date{2016, 2, 28}, 1) == Date{2016, 2, 29});  // leap year
  CHECK(add_days(Date{2018, 2, 28}, 1) == Date{2018, 3, 1});
}

TEST_CASE("collection window spans exactly 52 weeks ending on election day") {
  DateRange w = collection_window(election_day(2018));
  CHECK(w.length_days() == 364);
  CHECK(w.end == Date{2018, 11, 6});
}

TEST_CASE("iso formatting and parsing") {
  CHECK(to_iso(Date{2016, 1, 5}) == "2016-01-05");
  CHECK(to_yyyymmdd(Date{2016, 11, 8}) == "20161108");
  CHECK(parse_iso("2018-11-06") == Date{2018, 11, 6});
  CHECK_THROWS_AS(parse_iso("not-a-date"), SchemaError);
}
