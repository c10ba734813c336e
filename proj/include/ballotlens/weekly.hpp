#pragma once

#include <array>
#include <string>

#include "ballotlens/types.hpp"

namespace ballotlens::features {

inline constexpr int kWeeks = 52;  // week 51 = the 7 days ending on election day

struct WeeklySeries {
  std::string candidate_id;
  Metric metric = Metric::Pageviews;
  std::array<double, kWeeks> values{};
  bool cumulative = false;
};

// Mean of each 7-day block of the 364-day window ending on election day.
// Throws WindowMismatch unless the series spans exactly 52 weeks.
WeeklySeries weekly_average(const DailySeries& daily, const Date& eday);

// Prefix sums of a non-cumulative series. Throws AlreadyCumulative.
WeeklySeries to_cumulative(const WeeklySeries& w);

}  // namespace ballotlens::features
