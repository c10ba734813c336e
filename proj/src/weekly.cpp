#include "ballotlens/weekly.hpp"

#include "ballotlens/errors.hpp"

namespace ballotlens::features {

WeeklySeries weekly_average(const DailySeries& daily, const Date& eday) {
  if (daily.counts.size() != static_cast<std::size_t>(kWeeks * 7))
    throw WindowMismatch("expected 364 daily counts, got " + std::to_string(daily.counts.size()));
  if (add_days(daily.start_date, kWeeks * 7 - 1) != eday)
    throw WindowMismatch("daily series does not end on election day " + to_iso(eday));

  WeeklySeries w;
  w.candidate_id = daily.candidate_id;
  w.metric = daily.metric;
  for (int wk = 0; wk < kWeeks; ++wk) {
    double sum = 0;
    for (int d = 0; d < 7; ++d) sum += static_cast<double>(daily.counts[wk * 7 + d]);
    w.values[wk] = sum / 7.0;
  }
  return w;
}

WeeklySeries to_cumulative(const WeeklySeries& w) {
  if (w.cumulative) throw AlreadyCumulative("series is already cumulative");
  WeeklySeries out = w;
  out.cumulative = true;
  double run = 0;
  for (int i = 0; i < kWeeks; ++i) {
    run += w.values[i];
    out.values[i] = run;
  }
  return out;
}

}  // namespace ballotlens::features
