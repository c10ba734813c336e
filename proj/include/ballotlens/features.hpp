#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ballotlens/types.hpp"
#include "ballotlens/weekly.hpp"

namespace ballotlens::features {

// One candidate's model-ready covariates at a given week (or at the
// election-day "final" snapshot when week is absent).
struct FeatureRow {
  std::string candidate_id;
  RaceKey race;
  std::optional<int> week;  // 0..51; nullopt = Final
  std::optional<double> view_ratio;
  std::optional<double> receipt_ratio;
  std::optional<double> news_ratio;
  int challenger = 0;
  int open_seat = 0;
  int has_page = 0;
  int view_win = 0;
  int via_win = 0;
  int news_win = 0;
  std::optional<int> stronghold;
  double vote_share = 0.0;
  int win_lose = 0;
};

// Named field lookup used by the design-matrix builder. "incumbent" is
// derived as 1 - challenger. Unknown names return nullopt-but-unknown via
// the second member.
std::optional<double> field_value(const FeatureRow& row, const std::string& name);
bool is_known_field(const std::string& name);
const std::vector<std::string>& feature_field_names();

struct RatioResult {
  std::map<std::string, double> ratios;  // empty when zero_total
  bool zero_total = false;
};

// value_i / sum_j value_j. A zero-sum race yields absent ratios and the
// zero_total flag rather than an error.
RatioResult race_ratios(const std::map<std::string, double>& values);

// 1 for the strict unique maximizer, 0 otherwise; all zeros on a tie.
std::map<std::string, int> binary_outcome(const std::map<std::string, double>& values);

// Everything ingest produces, keyed and linked, ready for feature assembly.
struct RawDataset {
  std::vector<CandidateRecord> candidates;
  std::vector<ResultsRow> results;
  std::map<std::string, double> receipts;                 // candidate_id -> cycle total
  std::map<std::string, WeeklySeries> views;              // non-cumulative weekly means
  std::map<std::string, WeeklySeries> mentions;           // non-cumulative weekly means
};

struct FeatureTable {
  std::vector<FeatureRow> rows;
  std::vector<std::string> flagged_races;  // zero-total metric races, "race/metric"
};

// week = nullopt for the Final (election-day cumulative) snapshot.
// cumulative selects running totals vs the single week's average for
// the pageview and mention ratios; receipts are always cycle totals.
FeatureTable assemble_features(const RawDataset& raw, std::optional<int> week,
                               bool cumulative = true);

// CSV/JSON emission with a schema header matching the field names above.
void write_feature_csv(const std::string& path, const std::vector<FeatureRow>& rows);
std::vector<FeatureRow> read_feature_csv(const std::string& path);
void write_feature_json(const std::string& path, const std::vector<FeatureRow>& rows);

}  // namespace ballotlens::features
