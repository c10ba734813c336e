#include "ballotlens/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "ballotlens/errors.hpp"
#include "doctest.h"

using namespace ballotlens;
using namespace ballotlens::features;

namespace {

std::map<std::string, double> random_race(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nc(2, 6);
  std::uniform_real_distribution<double> val(0.0, 1e5);
  std::map<std::string, double> v;
  int n = nc(rng);
  for (int i = 0; i < n; ++i) v["cand" + std::to_string(i)] = val(rng);
  return v;
}

// Minimal two-candidate dataset for assembly tests.
RawDataset tiny_dataset() {
  RawDataset raw;
  RaceKey race{2016, Chamber::House, "PA", 3};
  for (int i = 0; i < 2; ++i) {
    CandidateRecord c;
    c.candidate_id = i == 0 ? "inc" : "chal";
    c.full_name = i == 0 ? "Ima Incumbent" : "Charlie Challenger";
    c.party = i == 0 ? "REP" : "DEM";
    c.race = race;
    c.incumbent = (i == 0);
    if (i == 0) c.wikipedia_title = "Ima Incumbent";  // challenger has no page
    raw.candidates.push_back(c);

    ResultsRow r;
    r.candidate_id = c.candidate_id;
    r.race = race;
    r.votes = i == 0 ? 60000 : 40000;
    r.vote_share = i == 0 ? 0.6 : 0.4;
    r.win_lose = (i == 0);
    raw.results.push_back(r);
  }
  raw.receipts["inc"] = 750000;
  raw.receipts["chal"] = 250000;

  WeeklySeries v;
  v.candidate_id = "inc";
  for (int k = 0; k < kWeeks; ++k) v.values[k] = 100 + k;
  raw.views["inc"] = v;  // no series at all for the pageless challenger

  WeeklySeries m1 = v, m2 = v;
  m1.metric = m2.metric = Metric::TvMentions;
  m2.candidate_id = "chal";
  for (int k = 0; k < kWeeks; ++k) m2.values[k] = 50;
  raw.mentions["inc"] = m1;
  raw.mentions["chal"] = m2;
  return raw;
}

}  // namespace

TEST_CASE("ratio properties over ten thousand randomized races") {
  std::mt19937_64 rng(424242);
  for (int trial = 0; trial < 10000; ++trial) {
    auto race = random_race(rng);
    auto rr = race_ratios(race);
    REQUIRE_FALSE(rr.zero_total);

    // Ratios sum to one.
    double sum = 0;
    for (auto& [id, r] : rr.ratios) sum += r;
    CHECK(std::abs(sum - 1.0) <= 1e-12);

    // Scale invariance across nine orders of magnitude.
    for (double c : {1e-3, 1.0, 1e6}) {
      auto scaled = race;
      for (auto& [id, v] : scaled) v *= c;
      auto rs = race_ratios(scaled);
      for (auto& [id, r] : rs.ratios) CHECK(std::abs(r - rr.ratios[id]) <= 1e-12);
    }

    // At most one binary winner, and it maximizes the raw values.
    auto wins = binary_outcome(race);
    int winners = 0;
    for (auto& [id, w] : wins) winners += w;
    CHECK(winners <= 1);
    if (winners == 1) {
      auto best = std::max_element(race.begin(), race.end(),
                                   [](auto& a, auto& b) { return a.second < b.second; });
      for (auto& [id, w] : wins)
        if (w == 1) CHECK(id == best->first);
    }
  }
}

TEST_CASE("renaming candidates permutes ratios with them") {
  std::map<std::string, double> race = {{"a", 10}, {"b", 30}, {"c", 60}};
  auto base = race_ratios(race).ratios;
  std::map<std::string, double> renamed = {{"z", 10}, {"y", 30}, {"x", 60}};
  auto perm = race_ratios(renamed).ratios;
  CHECK(perm["z"] == doctest::Approx(base["a"]));
  CHECK(perm["y"] == doctest::Approx(base["b"]));
  CHECK(perm["x"] == doctest::Approx(base["c"]));
}

TEST_CASE("exact ties produce no winner") {
  auto wins = binary_outcome({{"a", 5.0}, {"b", 5.0}, {"c", 1.0}});
  CHECK(wins["a"] == 0);
  CHECK(wins["b"] == 0);
  CHECK(wins["c"] == 0);
}

TEST_CASE("zero-total races are flagged, not imputed") {
  auto rr = race_ratios({{"a", 0.0}, {"b", 0.0}});
  CHECK(rr.zero_total);
  CHECK(rr.ratios.empty());
}

TEST_CASE("assembled final snapshot has ratios, flags and zero-filled pages") {
  auto raw = tiny_dataset();
  auto t = assemble_features(raw, std::nullopt);
  REQUIRE(t.rows.size() == 2);
  const auto& inc = t.rows[0].candidate_id == "inc" ? t.rows[0] : t.rows[1];
  const auto& chal = t.rows[0].candidate_id == "chal" ? t.rows[0] : t.rows[1];

  CHECK(inc.has_page == 1);
  CHECK(chal.has_page == 0);
  CHECK(inc.challenger == 0);
  CHECK(chal.challenger == 1);
  CHECK(inc.open_seat == 0);

  // Challenger's missing pageviews are treated as zero, so the incumbent
  // holds the whole ratio.
  REQUIRE(inc.view_ratio.has_value());
  CHECK(*inc.view_ratio == doctest::Approx(1.0));
  CHECK(*chal.view_ratio == doctest::Approx(0.0));
  CHECK(inc.view_win == 1);
  CHECK(chal.view_win == 0);

  CHECK(*inc.receipt_ratio == doctest::Approx(0.75));
  CHECK(inc.via_win == 1);
  CHECK(inc.win_lose == 1);
  CHECK(inc.vote_share == doctest::Approx(0.6));
  CHECK(t.flagged_races.empty());
}

TEST_CASE("weekly snapshot: cumulative vs single-week ratios differ") {
  auto raw = tiny_dataset();
  // Give the challenger a page and a series so ratios are non-trivial.
  raw.candidates[1].wikipedia_title = "Charlie Challenger";
  WeeklySeries v;
  v.candidate_id = "chal";
  for (int k = 0; k < kWeeks; ++k) v.values[k] = (k < 26) ? 0.0 : 200.0;
  raw.views["chal"] = v;

  auto week5_cum = assemble_features(raw, 5, true);
  auto week5_raw = assemble_features(raw, 5, false);
  const auto& ci = week5_cum.rows[0].candidate_id == "chal" ? week5_cum.rows[0] : week5_cum.rows[1];
  const auto& ri = week5_raw.rows[0].candidate_id == "chal" ? week5_raw.rows[0] : week5_raw.rows[1];
  // Challenger has zero views in the first half either way.
  CHECK(*ci.view_ratio == doctest::Approx(0.0));
  CHECK(*ri.view_ratio == doctest::Approx(0.0));

  auto week40_cum = assemble_features(raw, 40, true);
  auto week40_raw = assemble_features(raw, 40, false);
  const auto& c40 =
      week40_cum.rows[0].candidate_id == "chal" ? week40_cum.rows[0] : week40_cum.rows[1];
  const auto& r40 =
      week40_raw.rows[0].candidate_id == "chal" ? week40_raw.rows[0] : week40_raw.rows[1];
  CHECK(*r40.view_ratio > *c40.view_ratio);  // the late surge dominates the single week
  CHECK(week40_cum.rows[0].week == 40);
}

TEST_CASE("a race with zero metric total lands in flagged_races") {
  auto raw = tiny_dataset();
  for (int k = 0; k < kWeeks; ++k) raw.mentions["inc"].values[k] = 0;
  for (int k = 0; k < kWeeks; ++k) raw.mentions["chal"].values[k] = 0;
  auto t = assemble_features(raw, std::nullopt);
  REQUIRE(t.flagged_races.size() == 1);
  CHECK(t.flagged_races[0].find("2016-H-PA-3") != std::string::npos);
  for (const auto& row : t.rows) CHECK_FALSE(row.news_ratio.has_value());
}

TEST_CASE("missing results are an error") {
  auto raw = tiny_dataset();
  raw.results.clear();
  CHECK_THROWS_AS(assemble_features(raw, std::nullopt), MissingResults);
}

TEST_CASE("field_value covers the derived incumbent flag and rejects junk") {
  FeatureRow r;
  r.challenger = 1;
  CHECK(*field_value(r, "challenger") == 1.0);
  CHECK(*field_value(r, "incumbent") == 0.0);
  r.view_ratio = 0.7;
  CHECK(*field_value(r, "view_ratio") == doctest::Approx(0.7));
  r.stronghold.reset();
  CHECK_FALSE(field_value(r, "stronghold").has_value());
  CHECK_THROWS_AS(field_value(r, "no_such_field"), UnknownField);
  CHECK(is_known_field("via_win"));
  CHECK_FALSE(is_known_field("nope"));
}

TEST_CASE("feature csv round-trips including absent optionals") {
  auto raw = tiny_dataset();
  auto t = assemble_features(raw, std::nullopt);
  t.rows[0].news_ratio.reset();
  t.rows[1].stronghold = 1;
  const std::string path = "features_roundtrip_test.csv";
  write_feature_csv(path, t.rows);
  auto back = read_feature_csv(path);
  std::remove(path.c_str());
  REQUIRE(back.size() == t.rows.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].candidate_id == t.rows[i].candidate_id);
    CHECK(back[i].race == t.rows[i].race);
    CHECK(back[i].week == t.rows[i].week);
    CHECK(back[i].view_ratio.has_value() == t.rows[i].view_ratio.has_value());
    if (back[i].view_ratio)
      CHECK(*back[i].view_ratio == doctest::Approx(*t.rows[i].view_ratio).epsilon(1e-12));
    CHECK(back[i].news_ratio.has_value() == t.rows[i].news_ratio.has_value());
    CHECK(back[i].stronghold == t.rows[i].stronghold);
    CHECK(back[i].win_lose == t.rows[i].win_lose);
    CHECK(back[i].vote_share == doctest::Approx(t.rows[i].vote_share).epsilon(1e-12));
  }
}
