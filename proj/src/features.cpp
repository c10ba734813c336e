#include "ballotlens/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "ballotlens/csv.hpp"
#include "ballotlens/errors.hpp"
#include "json.hpp"

namespace ballotlens::features {

namespace {

const std::vector<std::string> kFields = {
    "candidate_id", "year",     "chamber",  "state",    "district", "week",
    "view_ratio",   "receipt_ratio", "news_ratio", "challenger", "open_seat",
    "has_page",     "view_win", "via_win",  "news_win", "stronghold",
    "vote_share",   "win_lose"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

std::optional<double> field_value(const FeatureRow& row, const std::string& name) {
  if (name == "view_ratio") return row.view_ratio;
  if (name == "receipt_ratio") return row.receipt_ratio;
  if (name == "news_ratio") return row.news_ratio;
  if (name == "challenger") return static_cast<double>(row.challenger);
  if (name == "incumbent") return static_cast<double>(1 - row.challenger);
  if (name == "open_seat") return static_cast<double>(row.open_seat);
  if (name == "has_page") return static_cast<double>(row.has_page);
  if (name == "view_win") return static_cast<double>(row.view_win);
  if (name == "via_win") return static_cast<double>(row.via_win);
  if (name == "news_win") return static_cast<double>(row.news_win);
  if (name == "stronghold") {
    if (!row.stronghold) return std::nullopt;
    return static_cast<double>(*row.stronghold);
  }
  if (name == "vote_share") return row.vote_share;
  if (name == "win_lose") return static_cast<double>(row.win_lose);
  throw UnknownField("unknown feature field '" + name + "'");
}

bool is_known_field(const std::string& name) {
  static const std::vector<std::string> known = {
      "view_ratio", "receipt_ratio", "news_ratio", "challenger", "incumbent", "open_seat",
      "has_page",   "view_win",      "via_win",    "news_win",   "stronghold", "vote_share",
      "win_lose"};
  return std::find(known.begin(), known.end(), name) != known.end();
}

const std::vector<std::string>& feature_field_names() { return kFields; }

RatioResult race_ratios(const std::map<std::string, double>& values) {
  RatioResult out;
  double total = 0;
  for (const auto& [id, v] : values) total += v;
  if (total <= 0.0) {
    out.zero_total = true;
    return out;
  }
  for (const auto& [id, v] : values) out.ratios[id] = v / total;
  return out;
}

std::map<std::string, int> binary_outcome(const std::map<std::string, double>& values) {
  std::map<std::string, int> out;
  double best = -1;
  int at_best = 0;
  for (const auto& [id, v] : values) {
    out[id] = 0;
    if (v > best) {
      best = v;
      at_best = 1;
    } else if (v == best) {
      ++at_best;
    }
  }
  if (at_best == 1) {
    for (const auto& [id, v] : values)
      if (v == best) out[id] = 1;
  }
  return out;
}

FeatureTable assemble_features(const RawDataset& raw, std::optional<int> week, bool cumulative) {
  FeatureTable table;

  std::map<std::string, const CandidateRecord*> by_id;
  for (const auto& c : raw.candidates) by_id[c.candidate_id] = &c;

  std::map<std::string, const ResultsRow*> results_by_id;
  std::map<RaceKey, std::vector<std::string>> races;
  for (const auto& r : raw.results) {
    results_by_id[r.candidate_id] = &r;
    races[r.race].push_back(r.candidate_id);
  }
  for (const auto& c : raw.candidates)
    if (!results_by_id.count(c.candidate_id))
      throw MissingResults("candidate " + c.candidate_id + " has no results row");

  // raw metric value for one candidate at the selected week
  auto metric_value = [&](const std::map<std::string, WeeklySeries>& series,
                          const std::string& id) -> double {
    auto it = series.find(id);
    if (it == series.end()) return 0.0;  // no page / no mentions: zero-fill
    const WeeklySeries& w = it->second;
    if (!week) {  // Final: election-day cumulative total
      double sum = 0;
      for (double v : w.values) sum += v;
      return sum;
    }
    int wk = *week;
    if (wk < 0 || wk >= kWeeks) throw WindowMismatch("week out of range: " + std::to_string(wk));
    if (!cumulative) return w.values[wk];
    double sum = 0;
    for (int i = 0; i <= wk; ++i) sum += w.values[i];
    return sum;
  };

  for (const auto& [race, ids] : races) {
    std::map<std::string, double> views, receipts, mentions;
    bool any_incumbent = false;
    for (const auto& id : ids) {
      const CandidateRecord* c = by_id.count(id) ? by_id.at(id) : nullptr;
      views[id] = (c && c->wikipedia_title) ? metric_value(raw.views, id) : 0.0;
      mentions[id] = metric_value(raw.mentions, id);
      auto rit = raw.receipts.find(id);
      receipts[id] = rit == raw.receipts.end() ? 0.0 : rit->second;
      if (c && c->incumbent) any_incumbent = true;
    }

    auto vr = race_ratios(views);
    auto rr = race_ratios(receipts);
    auto nr = race_ratios(mentions);
    if (vr.zero_total) table.flagged_races.push_back(race.str() + "/pageviews");
    if (rr.zero_total) table.flagged_races.push_back(race.str() + "/receipts");
    if (nr.zero_total) table.flagged_races.push_back(race.str() + "/mentions");
    auto vw = binary_outcome(views);
    auto aw = binary_outcome(receipts);
    auto nw = binary_outcome(mentions);
    if (vr.zero_total) for (auto& [k, v] : vw) v = 0;
    if (rr.zero_total) for (auto& [k, v] : aw) v = 0;
    if (nr.zero_total) for (auto& [k, v] : nw) v = 0;

    for (const auto& id : ids) {
      const CandidateRecord* c = by_id.count(id) ? by_id.at(id) : nullptr;
      const ResultsRow* res = results_by_id.at(id);
      FeatureRow row;
      row.candidate_id = id;
      row.race = race;
      row.week = week;
      if (!vr.zero_total) row.view_ratio = vr.ratios.at(id);
      if (!rr.zero_total) row.receipt_ratio = rr.ratios.at(id);
      if (!nr.zero_total) row.news_ratio = nr.ratios.at(id);
      row.challenger = (c && c->incumbent) ? 0 : 1;
      row.open_seat = any_incumbent ? 0 : 1;
      row.has_page = (c && c->wikipedia_title) ? 1 : 0;
      row.view_win = vw.at(id);
      row.via_win = aw.at(id);
      row.news_win = nw.at(id);
      if (c && c->stronghold) row.stronghold = *c->stronghold ? 1 : 0;
      row.vote_share = res->vote_share;
      row.win_lose = res->win_lose ? 1 : 0;
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

void write_feature_csv(const std::string& path, const std::vector<FeatureRow>& rows) {
  csv::Table t;
  t.header = kFields;
  for (const auto& r : rows) {
    std::vector<std::string> f;
    f.push_back(r.candidate_id);
    f.push_back(std::to_string(r.race.year));
    f.push_back(to_string(r.race.chamber));
    f.push_back(r.race.state);
    f.push_back(std::to_string(r.race.district));
    f.push_back(r.week ? std::to_string(*r.week) : "final");
    f.push_back(r.view_ratio ? fmt(*r.view_ratio) : "");
    f.push_back(r.receipt_ratio ? fmt(*r.receipt_ratio) : "");
    f.push_back(r.news_ratio ? fmt(*r.news_ratio) : "");
    f.push_back(std::to_string(r.challenger));
    f.push_back(std::to_string(r.open_seat));
    f.push_back(std::to_string(r.has_page));
    f.push_back(std::to_string(r.view_win));
    f.push_back(std::to_string(r.via_win));
    f.push_back(std::to_string(r.news_win));
    f.push_back(r.stronghold ? std::to_string(*r.stronghold) : "");
    f.push_back(fmt(r.vote_share));
    f.push_back(std::to_string(r.win_lose));
    t.rows.push_back(std::move(f));
  }
  csv::write_file(path, t);
}

std::vector<FeatureRow> read_feature_csv(const std::string& path) {
  csv::Table t = csv::read_file(path);
  for (const auto& name : kFields) t.col(name);  // schema check up front
  std::vector<FeatureRow> rows;
  auto opt_d = [](const std::string& s) -> std::optional<double> {
    if (s.empty()) return std::nullopt;
    return std::stod(s);
  };
  for (const auto& f : t.rows) {
    FeatureRow r;
    r.candidate_id = f[t.col("candidate_id")];
    r.race.year = std::stoi(f[t.col("year")]);
    r.race.chamber = parse_chamber(f[t.col("chamber")]);
    r.race.state = f[t.col("state")];
    r.race.district = std::stoi(f[t.col("district")]);
    const std::string& wk = f[t.col("week")];
    if (wk != "final") r.week = std::stoi(wk);
    r.view_ratio = opt_d(f[t.col("view_ratio")]);
    r.receipt_ratio = opt_d(f[t.col("receipt_ratio")]);
    r.news_ratio = opt_d(f[t.col("news_ratio")]);
    r.challenger = std::stoi(f[t.col("challenger")]);
    r.open_seat = std::stoi(f[t.col("open_seat")]);
    r.has_page = std::stoi(f[t.col("has_page")]);
    r.view_win = std::stoi(f[t.col("view_win")]);
    r.via_win = std::stoi(f[t.col("via_win")]);
    r.news_win = std::stoi(f[t.col("news_win")]);
    const std::string& sh = f[t.col("stronghold")];
    if (!sh.empty()) r.stronghold = std::stoi(sh);
    r.vote_share = std::stod(f[t.col("vote_share")]);
    r.win_lose = std::stoi(f[t.col("win_lose")]);
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_feature_json(const std::string& path, const std::vector<FeatureRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j;
    j["candidate_id"] = r.candidate_id;
    j["year"] = r.race.year;
    j["chamber"] = to_string(r.race.chamber);
    j["state"] = r.race.state;
    j["district"] = r.race.district;
    if (r.week)
      j["week"] = *r.week;
    else
      j["week"] = "final";
    if (r.view_ratio) j["view_ratio"] = *r.view_ratio;
    if (r.receipt_ratio) j["receipt_ratio"] = *r.receipt_ratio;
    if (r.news_ratio) j["news_ratio"] = *r.news_ratio;
    j["challenger"] = r.challenger;
    j["open_seat"] = r.open_seat;
    j["has_page"] = r.has_page;
    j["view_win"] = r.view_win;
    j["via_win"] = r.via_win;
    j["news_win"] = r.news_win;
    if (r.stronghold) j["stronghold"] = *r.stronghold;
    j["vote_share"] = r.vote_share;
    j["win_lose"] = r.win_lose;
    arr.push_back(std::move(j));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SchemaError("cannot write '" + path + "'");
  out << arr.dump(2) << '\n';
}

}  // namespace ballotlens::features
