#include "ballotlens/loaders.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "ballotlens/csv.hpp"
#include "ballotlens/errors.hpp"

namespace ballotlens::ingest {

namespace {

const std::set<std::string> kSuffixes = {"jr", "sr", "ii", "iii", "iv", "v"};

std::int64_t parse_count(const std::string& s, const std::string& what, std::size_t line) {
  try {
    std::size_t pos = 0;
    std::int64_t v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    if (v < 0) throw SchemaError(what + " is negative at line " + std::to_string(line));
    return v;
  } catch (const SchemaError&) {
    throw;
  } catch (...) {
    throw SchemaError("bad " + what + " '" + s + "' at line " + std::to_string(line));
  }
}

}  // namespace

std::string candidate_id_for(const RaceKey& race, const std::string& full_name) {
  std::string key = link_key(full_name);
  std::replace(key.begin(), key.end(), ' ', '-');
  return race.str() + ":" + key;
}

std::string link_key(const std::string& full_name) {
  std::vector<std::string> tokens;
  std::string cur;
  for (unsigned char c : full_name) {
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      tokens.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(cur);
  while (tokens.size() > 1 && kSuffixes.count(tokens.back())) tokens.pop_back();
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

LoadedResults load_results(const std::string& path) {
  auto table = csv::read_file(path);
  const auto c_year = table.col("year");
  const auto c_chamber = table.col("chamber");
  const auto c_state = table.col("state");
  const auto c_district = table.col("district");
  const auto c_cand = table.col("candidate");
  const auto c_party = table.col("party");
  const auto c_votes = table.col("votes");
  const auto c_total = table.col("totalvotes");

  struct Raw {
    CandidateRecord cand;
    ResultsRow row;
  };
  std::map<RaceKey, std::vector<Raw>> races;
  std::set<std::string> seen_ids;

  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    const std::size_t line = i + 2;  // header is line 1
    Raw raw;
    raw.cand.race.year = static_cast<int>(parse_count(r[c_year], "year", line));
    raw.cand.race.chamber = parse_chamber(r[c_chamber]);
    raw.cand.race.state = r[c_state];
    raw.cand.race.district = static_cast<int>(parse_count(r[c_district], "district", line));
    raw.cand.full_name = r[c_cand];
    raw.cand.party = r[c_party];
    if (raw.cand.full_name.empty())
      throw SchemaError("empty candidate name at line " + std::to_string(line));
    raw.cand.candidate_id = candidate_id_for(raw.cand.race, raw.cand.full_name);
    if (!seen_ids.insert(raw.cand.candidate_id).second)
      throw DuplicateCandidate(raw.cand.candidate_id);

    raw.row.candidate_id = raw.cand.candidate_id;
    raw.row.race = raw.cand.race;
    raw.row.votes = parse_count(r[c_votes], "votes", line);
    std::int64_t total = parse_count(r[c_total], "totalvotes", line);
    if (total <= 0) throw SchemaError("totalvotes not positive at line " + std::to_string(line));
    raw.row.vote_share = static_cast<double>(raw.row.votes) / static_cast<double>(total);
    races[raw.cand.race].push_back(std::move(raw));
  }

  // Winner: strict vote maximum, deterministic tiebreak on candidate_id.
  // Seat winners indexed for the prior-cycle incumbency lookback.
  std::map<std::string, std::string> seat_winner;  // (year,chamber,state,district) -> name key
  for (auto& [race, entrants] : races) {
    auto best = entrants.begin();
    for (auto it = entrants.begin(); it != entrants.end(); ++it) {
      if (it->row.votes > best->row.votes ||
          (it->row.votes == best->row.votes && it->row.candidate_id < best->row.candidate_id))
        best = it;
    }
    best->row.win_lose = true;
    std::ostringstream seat;
    seat << race.year << "|" << to_string(race.chamber) << "|" << race.state << "|"
         << race.district;
    seat_winner[seat.str()] = link_key(best->cand.full_name);
  }

  LoadedResults out;
  for (auto& [race, entrants] : races) {
    std::ostringstream prior;
    prior << race.year - 2 << "|" << to_string(race.chamber) << "|" << race.state << "|"
          << race.district;
    auto it = seat_winner.find(prior.str());
    for (auto& raw : entrants) {
      if (it != seat_winner.end() && it->second == link_key(raw.cand.full_name))
        raw.cand.incumbent = true;
      out.candidates.push_back(std::move(raw.cand));
      out.results.push_back(std::move(raw.row));
    }
  }
  return out;
}

ReceiptsLoad load_receipts(const std::string& path,
                           const std::vector<CandidateRecord>& candidates) {
  auto table = csv::read_file(path);
  const auto c_id = table.col("candidate_id");
  const auto c_usd = table.col("receipts_usd");

  std::map<std::string, std::string> by_id;  // candidate_id or fec_id -> candidate_id
  for (const auto& c : candidates) {
    by_id[c.candidate_id] = c.candidate_id;
    if (c.fec_id) by_id[*c.fec_id] = c.candidate_id;
  }

  ReceiptsLoad out;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    const std::size_t line = i + 2;
    double usd = 0;
    try {
      usd = std::stod(r[c_usd]);
    } catch (...) {
      throw SchemaError("bad receipts_usd '" + r[c_usd] + "' at line " + std::to_string(line));
    }
    if (usd < 0) throw SchemaError("negative receipts_usd at line " + std::to_string(line));
    auto it = by_id.find(r[c_id]);
    if (it == by_id.end()) {
      out.unmatched.push_back(r[c_id]);
      continue;
    }
    out.rows.push_back({it->second, usd});
  }
  return out;
}

std::vector<CandidateRecord> link_candidates(std::vector<CandidateRecord> candidates,
                                             const std::string& overrides_path) {
  struct Override {
    std::optional<std::string> title, fec;
    std::optional<bool> incumbent, stronghold;
  };
  std::map<std::string, Override> overrides;
  if (!overrides_path.empty()) {
    auto table = csv::read_file(overrides_path);
    const auto c_id = table.col("candidate_id");
    const auto c_title = table.col("wikipedia_title");
    const auto c_fec = table.col("fec_id");
    const auto c_inc = table.col("incumbent");
    const bool has_stronghold = table.has_col("stronghold");
    for (const auto& r : table.rows) {
      Override o;
      if (!r[c_title].empty()) o.title = r[c_title];
      if (!r[c_fec].empty()) o.fec = r[c_fec];
      if (!r[c_inc].empty()) o.incumbent = (r[c_inc] == "1");
      if (has_stronghold) {
        const auto& s = r[table.col("stronghold")];
        if (!s.empty()) o.stronghold = (s == "1");
      }
      overrides[r[c_id]] = o;
    }
  }

  // Conflict scan: one name key, materially different identities.
  std::map<std::string, std::set<std::string>> identities;
  for (const auto& c : candidates)
    identities[link_key(c.full_name)].insert(c.race.state + "/" + c.party);
  std::vector<std::string> conflicts;
  for (auto& [key, ids] : identities) {
    if (ids.size() < 2) continue;
    bool all_overridden = true;
    for (const auto& c : candidates) {
      if (link_key(c.full_name) != key) continue;
      auto it = overrides.find(c.candidate_id);
      if (it == overrides.end() || !it->second.title) {
        all_overridden = false;
        break;
      }
    }
    if (!all_overridden) conflicts.push_back(key);
  }
  if (!conflicts.empty()) {
    std::string msg = "ambiguous name keys require overrides:";
    for (const auto& k : conflicts) msg += " '" + k + "'";
    throw AmbiguousLink(msg);
  }

  for (auto& c : candidates) {
    c.wikipedia_title = c.full_name;  // heuristic: display-form article title
    auto it = overrides.find(c.candidate_id);
    if (it != overrides.end()) {
      if (it->second.title) c.wikipedia_title = it->second.title;
      if (it->second.fec) c.fec_id = it->second.fec;
      if (it->second.incumbent) c.incumbent = *it->second.incumbent;
      if (it->second.stronghold) c.stronghold = it->second.stronghold;
    }
  }
  return candidates;
}

}  // namespace ballotlens::ingest
