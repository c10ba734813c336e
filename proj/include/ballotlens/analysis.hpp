#pragma once

#include <map>
#include <string>
#include <vector>

#include "ballotlens/features.hpp"
#include "ballotlens/fit.hpp"
#include "ballotlens/registry.hpp"

namespace ballotlens::analysis {

// Adjusted R-squared of one OLS fit per week; fit errors are rethrown
// annotated with the offending week.
std::map<int, double> rsq_timeseries(
    const std::map<int, std::vector<features::FeatureRow>>& rows_by_week,
    const regress::DesignSpec& spec, const std::string& response);

enum class Group { Incumbent, Challenger };

// Unweighted per-week mean of a ratio field over the group's rows.
// Throws EmptyGroup.
std::map<int, double> group_average_timeseries(
    const std::map<int, std::vector<features::FeatureRow>>& rows_by_week, Group group,
    const std::string& field);

struct GroupSlope {
  double slope = 0;
  double std_error = 0;
  std::size_t n = 0;
};

// Per-group simple OLS of response on predictor, split by a binary field.
// Throws GroupTooSmall when a group has fewer than 3 usable rows.
std::map<int, GroupSlope> group_slopes(const std::vector<features::FeatureRow>& rows,
                                       const std::string& group_field,
                                       const std::string& predictor,
                                       const std::string& response);

enum class OpponentType { Incumbent, OpenSeat };
enum class Viability { LessViable, MoreViable };
enum class PageviewOutcome { Fewer, More };

struct ProbabilityGridRow {
  OpponentType opponent_type = OpponentType::Incumbent;
  Viability viability = Viability::LessViable;
  PageviewOutcome pageview_outcome = PageviewOutcome::Fewer;
  double probability = 0.5;
};

std::string to_string(OpponentType v);
std::string to_string(Viability v);
std::string to_string(PageviewOutcome v);

// Challenger-victory probabilities over all 8 factor combinations, with
// challenger = 1 throughout and stronghold held at the given value.
// Throws MissingCovariate unless the fit covers challenger, open_seat,
// via_win and view_win.
std::vector<ProbabilityGridRow> probability_grid(const regress::FitResult& fit,
                                                 int stronghold_value = 0);

struct ChamberTally {
  std::size_t total_candidates = 0;
  std::size_t open_seat_races = 0;
  std::size_t challenger_victory = 0;
  std::size_t challenger_defeat = 0;
  std::size_t incumbent_victory = 0;
  std::size_t incumbent_defeat = 0;
};

// Outcome counts per chamber from a final feature snapshot.
std::map<Chamber, ChamberTally> outcome_tally(const std::vector<features::FeatureRow>& rows);

struct Histogram {
  std::vector<double> edges;        // bins + 1 edges over [0, 1]
  std::vector<std::size_t> counts;  // bins
};

// Equal-width bins over [0,1]; absent field values are skipped.
Histogram distribution_histogram(const std::vector<features::FeatureRow>& rows,
                                 const std::string& field, int bins);

}  // namespace ballotlens::analysis
