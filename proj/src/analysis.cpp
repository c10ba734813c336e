#include "ballotlens/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "ballotlens/errors.hpp"

namespace ballotlens::analysis {

using features::FeatureRow;
using features::field_value;

std::map<int, double> rsq_timeseries(const std::map<int, std::vector<FeatureRow>>& rows_by_week,
                                     const regress::DesignSpec& spec,
                                     const std::string& response) {
  std::map<int, double> out;
  for (const auto& [week, rows] : rows_by_week) {
    try {
      auto fit = regress::ols_fit(regress::build_design(rows, spec, response));
      out[week] = fit.ols_stats.adj_r2;
    } catch (const Error& e) {
      throw Error("week " + std::to_string(week) + ": " + e.what());
    }
  }
  return out;
}

std::map<int, double> group_average_timeseries(
    const std::map<int, std::vector<FeatureRow>>& rows_by_week, Group group,
    const std::string& field) {
  const int want_challenger = group == Group::Challenger ? 1 : 0;
  std::map<int, double> out;
  for (const auto& [week, rows] : rows_by_week) {
    double sum = 0;
    std::size_t n = 0;
    for (const auto& r : rows) {
      if (r.challenger != want_challenger) continue;
      auto v = field_value(r, field);
      if (!v) continue;
      sum += *v;
      ++n;
    }
    if (n == 0)
      throw EmptyGroup((group == Group::Challenger ? std::string("challenger")
                                                   : std::string("incumbent")) +
                       " group empty at week " + std::to_string(week));
    out[week] = sum / static_cast<double>(n);
  }
  return out;
}

std::map<int, GroupSlope> group_slopes(const std::vector<FeatureRow>& rows,
                                       const std::string& group_field,
                                       const std::string& predictor,
                                       const std::string& response) {
  std::map<int, std::vector<FeatureRow>> groups;
  for (const auto& r : rows) {
    auto g = field_value(r, group_field);
    if (!g) continue;
    groups[static_cast<int>(*g)].push_back(r);
  }
  std::map<int, GroupSlope> out;
  for (auto& [value, members] : groups) {
    regress::DesignMatrix d;
    try {
      d = regress::build_design(members, regress::DesignSpec{{{predictor}}}, response);
    } catch (const EmptyAfterFiltering&) {
      throw GroupTooSmall(group_field + "=" + std::to_string(value));
    }
    if (d.values.rows() < 3) throw GroupTooSmall(group_field + "=" + std::to_string(value));
    auto fit = regress::ols_fit(d);
    out[value] = {fit.coefficients[1], fit.std_errors[1], d.values.rows()};
  }
  return out;
}

std::string to_string(OpponentType v) {
  return v == OpponentType::Incumbent ? "Incumbent" : "OpenSeat";
}
std::string to_string(Viability v) {
  return v == Viability::LessViable ? "LessViable" : "MoreViable";
}
std::string to_string(PageviewOutcome v) { return v == PageviewOutcome::Fewer ? "Fewer" : "More"; }

std::vector<ProbabilityGridRow> probability_grid(const regress::FitResult& fit,
                                                 int stronghold_value) {
  for (const char* needed : {"challenger", "open_seat", "via_win", "view_win"}) {
    if (std::find(fit.labels.begin(), fit.labels.end(), needed) == fit.labels.end())
      throw MissingCovariate(needed);
  }
  std::vector<ProbabilityGridRow> grid;
  for (OpponentType opp : {OpponentType::Incumbent, OpponentType::OpenSeat}) {
    for (Viability via : {Viability::LessViable, Viability::MoreViable}) {
      for (PageviewOutcome views : {PageviewOutcome::Fewer, PageviewOutcome::More}) {
        std::vector<double> x(fit.labels.size(), 0.0);
        for (std::size_t j = 0; j < fit.labels.size(); ++j) {
          const std::string& label = fit.labels[j];
          if (label == "Intercept")
            x[j] = 1.0;
          else if (label == "challenger")
            x[j] = 1.0;
          else if (label == "open_seat")
            x[j] = opp == OpponentType::OpenSeat ? 1.0 : 0.0;
          else if (label == "stronghold")
            x[j] = static_cast<double>(stronghold_value);
          else if (label == "via_win")
            x[j] = via == Viability::MoreViable ? 1.0 : 0.0;
          else if (label == "view_win")
            x[j] = views == PageviewOutcome::More ? 1.0 : 0.0;
          else
            throw MissingCovariate("no grid setting for covariate '" + label + "'");
        }
        grid.push_back({opp, via, views, regress::predict_prob(fit.coefficients, x)});
      }
    }
  }
  return grid;
}

std::map<Chamber, ChamberTally> outcome_tally(const std::vector<FeatureRow>& rows) {
  std::map<Chamber, ChamberTally> out;
  std::map<RaceKey, bool> open_seen;
  for (const auto& r : rows) {
    auto& t = out[r.race.chamber];
    ++t.total_candidates;
    if (r.open_seat == 1 && !open_seen[r.race]) {
      open_seen[r.race] = true;
      ++t.open_seat_races;
    }
    if (r.challenger == 1) {
      r.win_lose ? ++t.challenger_victory : ++t.challenger_defeat;
    } else {
      r.win_lose ? ++t.incumbent_victory : ++t.incumbent_defeat;
    }
  }
  return out;
}

Histogram distribution_histogram(const std::vector<FeatureRow>& rows, const std::string& field,
                                 int bins) {
  if (bins < 2) throw Error("histogram needs at least 2 bins");
  Histogram h;
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i) h.edges[i] = static_cast<double>(i) / bins;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (const auto& r : rows) {
    auto v = field_value(r, field);
    if (!v || *v < 0.0 || *v > 1.0) continue;
    int bin = std::min(bins - 1, static_cast<int>(*v * bins));
    ++h.counts[static_cast<std::size_t>(bin)];
  }
  return h;
}

}  // namespace ballotlens::analysis
