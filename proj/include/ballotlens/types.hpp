#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ballotlens/dates.hpp"

namespace ballotlens {

enum class Chamber { Senate, House };

std::string to_string(Chamber c);
Chamber parse_chamber(const std::string& s);  // accepts "Senate"/"House", case-insensitive

enum class Metric { Pageviews, TvMentions };

// Identifies one contest. district is 0 for Senate and at-large seats.
struct RaceKey {
  int year = 0;
  Chamber chamber = Chamber::House;
  std::string state;  // two-letter postal code
  int district = 0;

  auto operator<=>(const RaceKey&) const = default;
  std::string str() const;
};

struct CandidateRecord {
  std::string candidate_id;
  std::string full_name;
  std::string party;
  RaceKey race;
  bool incumbent = false;
  std::optional<std::string> wikipedia_title;
  std::optional<std::string> fec_id;
  std::optional<bool> stronghold;  // externally supplied, never computed
};

struct DailySeries {
  std::string candidate_id;
  Metric metric = Metric::Pageviews;
  Date start_date;
  std::vector<std::int64_t> counts;  // one per day, all >= 0
};

struct ResultsRow {
  std::string candidate_id;
  RaceKey race;
  std::int64_t votes = 0;
  double vote_share = 0.0;
  bool win_lose = false;
};

struct ReceiptsRow {
  std::string candidate_id;
  double receipts_usd = 0.0;
};

}  // namespace ballotlens
