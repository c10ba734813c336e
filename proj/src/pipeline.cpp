#include "ballotlens/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ballotlens/analysis.hpp"
#include "ballotlens/cache.hpp"
#include "ballotlens/clients.hpp"
#include "ballotlens/csv.hpp"
#include "ballotlens/errors.hpp"
#include "ballotlens/loaders.hpp"
#include "ballotlens/registry.hpp"
#include "ballotlens/weekly.hpp"
#include "json.hpp"

namespace ballotlens::cli {

namespace fs = std::filesystem;
using features::FeatureRow;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::unique_ptr<ingest::Transport> make_transport(const PipelineConfig& cfg) {
  if (cfg.offline) return std::make_unique<ingest::OfflineTransport>();
  return std::make_unique<ingest::HttplibTransport>(cfg.user_agent);
}

std::vector<std::string> channel_list(const PipelineConfig& cfg) {
  return cfg.channels.empty() ? ingest::default_channels() : cfg.channels;
}

struct Inputs {
  std::vector<CandidateRecord> candidates;  // linked, filtered to config years/chambers
  std::vector<ResultsRow> results;          // same filter
  std::map<std::string, double> receipts;
};

Inputs load_inputs(const PipelineConfig& cfg) {
  cfg.validate();
  auto loaded = ingest::load_results(cfg.results_path);
  loaded.candidates = ingest::link_candidates(std::move(loaded.candidates), cfg.overrides_path);

  std::set<int> years(cfg.years.begin(), cfg.years.end());
  std::set<std::string> chambers;
  for (const auto& c : cfg.chambers) chambers.insert(to_string(parse_chamber(c)));

  Inputs in;
  std::set<std::string> keep;
  for (auto& c : loaded.candidates) {
    if (!years.empty() && !years.count(c.race.year)) continue;
    if (!chambers.count(to_string(c.race.chamber))) continue;
    keep.insert(c.candidate_id);
    in.candidates.push_back(std::move(c));
  }
  for (auto& r : loaded.results)
    if (keep.count(r.candidate_id)) in.results.push_back(std::move(r));
  if (in.candidates.empty()) throw ConfigError("no candidates match the configured years/chambers");

  if (!cfg.receipts_path.empty()) {
    auto rec = ingest::load_receipts(cfg.receipts_path, in.candidates);
    for (const auto& row : rec.rows) in.receipts[row.candidate_id] = row.receipts_usd;
  }
  return in;
}

DateRange window_for_year(int year) { return collection_window(election_day(year)); }

}  // namespace

FetchSummary cmd_fetch(const PipelineConfig& cfg) {
  auto in = load_inputs(cfg);
  auto transport = make_transport(cfg);
  ingest::RetryingTransport retrying(*transport);
  ingest::DiskCache cache(cfg.cache_dir);
  ingest::PageviewsClient views(retrying, cache);
  ingest::TvMentionsClient tv(retrying, cache);
  const auto channels = channel_list(cfg);

  FetchSummary sum;
  std::vector<std::string> failures;
  for (const auto& c : in.candidates) {
    auto window = window_for_year(c.race.year);
    bool hit = cache.get(ingest::PageviewsClient::kEndpoint,
                         ingest::PageviewsClient::cache_query(*c.wikipedia_title, window))
                   .has_value();
    try {
      views.fetch(*c.wikipedia_title, window);
      hit ? ++sum.cached : ++sum.fetched;
    } catch (const PageNotFound&) {
      sum.missing_pages.push_back(c.candidate_id);
    } catch (const Error& e) {
      ++sum.failed;
      failures.push_back(c.candidate_id + ": " + e.what());
    }
    for (const auto& channel : channels) {
      bool tv_hit = cache.get(ingest::TvMentionsClient::kEndpoint,
                              ingest::TvMentionsClient::cache_query(c.full_name, channel, window))
                        .has_value();
      try {
        tv.fetch(c.full_name, {channel}, window);
        tv_hit ? ++sum.cached : ++sum.fetched;
      } catch (const Error& e) {
        ++sum.failed;
        failures.push_back(c.candidate_id + "/" + channel + ": " + e.what());
      }
    }
  }

  fs::create_directories(cfg.out_dir);
  std::ofstream out(fs::path(cfg.out_dir) / "fetch_summary.txt");
  out << "cached: " << sum.cached << "\nfetched: " << sum.fetched << "\nfailed: " << sum.failed
      << "\nmissing pages: " << sum.missing_pages.size() << "\n";
  for (const auto& id : sum.missing_pages) out << "  no page: " << id << "\n";
  for (const auto& f : failures) out << "  failed: " << f << "\n";
  if (sum.failed > 0)
    throw TransportError(std::to_string(sum.failed) +
                         " fetches failed; partial progress kept in cache");
  return sum;
}

features::RawDataset load_raw_dataset(const PipelineConfig& cfg) {
  auto in = load_inputs(cfg);
  // Features are always served from cache; verdicts (including page
  // absence) were persisted by the fetch stage.
  ingest::OfflineTransport offline;
  ingest::DiskCache cache(cfg.cache_dir);
  ingest::PageviewsClient views(offline, cache);
  ingest::TvMentionsClient tv(offline, cache);
  const auto channels = channel_list(cfg);

  features::RawDataset raw;
  raw.results = std::move(in.results);
  raw.receipts = std::move(in.receipts);
  for (auto& c : in.candidates) {
    auto window = window_for_year(c.race.year);
    auto eday = election_day(c.race.year);
    try {
      auto daily = views.fetch(*c.wikipedia_title, window);
      daily.candidate_id = c.candidate_id;
      raw.views[c.candidate_id] = features::weekly_average(daily, eday);
      raw.views[c.candidate_id].candidate_id = c.candidate_id;
    } catch (const PageNotFound&) {
      c.wikipedia_title.reset();  // confirmed pageless
    }
    auto mentions = tv.fetch(c.full_name, channels, window);
    mentions.candidate_id = c.candidate_id;
    raw.mentions[c.candidate_id] = features::weekly_average(mentions, eday);
    raw.mentions[c.candidate_id].candidate_id = c.candidate_id;
    raw.mentions[c.candidate_id].metric = Metric::TvMentions;
    raw.candidates.push_back(std::move(c));
  }
  return raw;
}

namespace {

// Invariant sweep over one assembled table; throws Error on violation.
void check_invariants(const std::vector<FeatureRow>& rows, const std::string& label) {
  std::map<RaceKey, double> view_sum, receipt_sum, news_sum;
  std::map<RaceKey, int> view_wins, via_wins, news_wins, race_wins;
  std::map<RaceKey, bool> any_incumbent;
  for (const auto& r : rows) {
    if (r.view_ratio) view_sum[r.race] += *r.view_ratio;
    if (r.receipt_ratio) receipt_sum[r.race] += *r.receipt_ratio;
    if (r.news_ratio) news_sum[r.race] += *r.news_ratio;
    view_wins[r.race] += r.view_win;
    via_wins[r.race] += r.via_win;
    news_wins[r.race] += r.news_win;
    race_wins[r.race] += r.win_lose;
    if (r.challenger == 0) any_incumbent[r.race] = true;
    if (r.challenger != 0 && r.challenger != 1)
      throw Error(label + ": challenger flag out of range in " + r.race.str());
    if (r.open_seat == 1 && r.challenger == 0)
      throw Error(label + ": incumbent in an open-seat race " + r.race.str());
  }
  auto near_one = [](double s) { return std::abs(s - 1.0) <= 1e-9; };
  for (const auto& [race, s] : view_sum)
    if (!near_one(s)) throw Error(label + ": view ratios sum to " + fmt(s) + " in " + race.str());
  for (const auto& [race, s] : receipt_sum)
    if (!near_one(s))
      throw Error(label + ": receipt ratios sum to " + fmt(s) + " in " + race.str());
  for (const auto& [race, s] : news_sum)
    if (!near_one(s)) throw Error(label + ": news ratios sum to " + fmt(s) + " in " + race.str());
  for (const auto& [race, n] : view_wins)
    if (n > 1) throw Error(label + ": multiple view winners in " + race.str());
  for (const auto& [race, n] : via_wins)
    if (n > 1) throw Error(label + ": multiple viability winners in " + race.str());
  for (const auto& [race, n] : news_wins)
    if (n > 1) throw Error(label + ": multiple news winners in " + race.str());
  for (const auto& [race, n] : race_wins)
    if (n != 1) throw Error(label + ": " + std::to_string(n) + " race winners in " + race.str());
}

std::vector<int> selected_weeks(const PipelineConfig& cfg) {
  if (!cfg.weeks.empty()) return cfg.weeks;
  std::vector<int> all(features::kWeeks);
  for (int w = 0; w < features::kWeeks; ++w) all[w] = w;
  return all;
}

fs::path features_dir(const PipelineConfig& cfg) { return fs::path(cfg.out_dir) / "features"; }
fs::path fits_dir(const PipelineConfig& cfg) { return fs::path(cfg.out_dir) / "fits"; }

std::string week_file(int week, bool cumulative) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "week_%02d_%s.csv", week, cumulative ? "cum" : "raw");
  return buf;
}

}  // namespace

void cmd_features(const PipelineConfig& cfg) {
  auto raw = load_raw_dataset(cfg);
  fs::create_directories(features_dir(cfg));

  std::vector<std::string> flagged;
  auto emit = [&](std::optional<int> week, bool cumulative, const std::string& file) {
    auto table = features::assemble_features(raw, week, cumulative);
    check_invariants(table.rows, file);
    features::write_feature_csv((features_dir(cfg) / file).string(), table.rows);
    for (const auto& f : table.flagged_races) {
      std::string tag = file + ": " + f;
      if (std::find(flagged.begin(), flagged.end(), tag) == flagged.end()) flagged.push_back(tag);
    }
  };

  for (int w : selected_weeks(cfg)) {
    emit(w, false, week_file(w, false));
    emit(w, true, week_file(w, true));
  }
  emit(std::nullopt, cfg.cumulative, "final.csv");

  auto final_rows = features::read_feature_csv((features_dir(cfg) / "final.csv").string());
  features::write_feature_json((features_dir(cfg) / "final.json").string(), final_rows);

  std::ofstream report(features_dir(cfg) / "validation.txt");
  report << "rows: " << final_rows.size() << "\nflagged: " << flagged.size() << "\n";
  for (const auto& f : flagged) report << "  " << f << "\n";
}

void cmd_fit(const PipelineConfig& cfg) {
  auto path = features_dir(cfg) / "final.csv";
  if (!fs::exists(path)) throw Error("feature table missing: " + path.string() +
                                     " (run the features stage first)");
  auto rows = features::read_feature_csv(path.string());
  auto names = cfg.models.empty() ? analysis::registry_names() : cfg.models;

  fs::create_directories(fits_dir(cfg));
  std::vector<std::string> failures;
  for (const auto& name : names) {
    try {
      auto fits = analysis::run_registry(rows, {name});
      const auto& fit = fits.at(name);
      std::ofstream(fits_dir(cfg) / (name + ".json")) << fit.to_json();
      std::ofstream(fits_dir(cfg) / (name + ".txt")) << fit.render_text(name);
    } catch (const UnknownModel&) {
      throw;  // a typo in --models is a hard error
    } catch (const Error& e) {
      failures.push_back(name + ": " + e.what());
    }
  }
  std::ofstream summary(fits_dir(cfg) / "summary.txt");
  summary << "models: " << names.size() << "\nfailed: " << failures.size() << "\n";
  for (const auto& f : failures) summary << "  " << f << "\n";
  if (!failures.empty())
    throw Error(std::to_string(failures.size()) + " model(s) failed; see " +
                (fits_dir(cfg) / "summary.txt").string());
}

void cmd_report(const PipelineConfig& cfg) {
  const fs::path out(cfg.out_dir);
  auto load_week = [&](int w, bool cum) {
    auto p = features_dir(cfg) / week_file(w, cum);
    if (!fs::exists(p)) throw MissingFit("feature table missing: " + p.string());
    return features::read_feature_csv(p.string());
  };
  auto final_path = features_dir(cfg) / "final.csv";
  if (!fs::exists(final_path)) throw MissingFit("feature table missing: " + final_path.string());
  auto final_rows = features::read_feature_csv(final_path.string());

  const auto weeks = selected_weeks(cfg);
  std::map<int, std::vector<FeatureRow>> weekly_raw, weekly_cum;
  for (int w : weeks) {
    weekly_raw[w] = load_week(w, false);
    weekly_cum[w] = load_week(w, true);
  }

  regress::DesignSpec view_spec{{{"view_ratio"}}};

  // Figure 2: weekly non-cumulative R2 trace plus the every-4th-week
  // cumulative trace on the same axis.
  auto r2_weekly = analysis::rsq_timeseries(weekly_raw, view_spec, "vote_share");
  std::map<int, std::vector<FeatureRow>> cum_subset;
  for (int w : weeks)
    if (w % 4 == 3) cum_subset[w] = weekly_cum[w];
  auto r2_cum = analysis::rsq_timeseries(cum_subset, view_spec, "vote_share");
  {
    csv::Table t;
    t.header = {"week", "adj_r2_weekly", "adj_r2_cumulative"};
    for (int w : weeks)
      t.rows.push_back({std::to_string(w), fmt(r2_weekly.at(w)),
                        r2_cum.count(w) ? fmt(r2_cum.at(w)) : ""});
    csv::write_file((out / "figure2.csv").string(), t);
  }

  // Figure 3a and Appendix G: group mean ratio traces.
  {
    auto inc = analysis::group_average_timeseries(weekly_raw, analysis::Group::Incumbent,
                                                  "view_ratio");
    auto chal = analysis::group_average_timeseries(weekly_raw, analysis::Group::Challenger,
                                                   "view_ratio");
    csv::Table t;
    t.header = {"week", "incumbent_view_ratio", "challenger_view_ratio"};
    for (int w : weeks) t.rows.push_back({std::to_string(w), fmt(inc.at(w)), fmt(chal.at(w))});
    csv::write_file((out / "figure3a.csv").string(), t);
  }
  {
    auto inc = analysis::group_average_timeseries(weekly_raw, analysis::Group::Incumbent,
                                                  "news_ratio");
    auto chal = analysis::group_average_timeseries(weekly_raw, analysis::Group::Challenger,
                                                   "news_ratio");
    csv::Table t;
    t.header = {"week", "incumbent_news_ratio", "challenger_news_ratio"};
    for (int w : weeks) t.rows.push_back({std::to_string(w), fmt(inc.at(w)), fmt(chal.at(w))});
    csv::write_file((out / "appendixG.csv").string(), t);
  }

  // Figure 3b: per-group slope of vote share on view ratio.
  {
    auto slopes = analysis::group_slopes(final_rows, "challenger", "view_ratio", "vote_share");
    csv::Table t;
    t.header = {"group", "slope", "std_error", "n"};
    for (const auto& [value, s] : slopes)
      t.rows.push_back({value == 1 ? "challenger" : "incumbent", fmt(s.slope), fmt(s.std_error),
                        std::to_string(s.n)});
    csv::write_file((out / "figure3b.csv").string(), t);
  }

  // Figure 4: media -> pageview R2 per group per week.
  {
    regress::DesignSpec news_spec{{{"news_ratio"}}};
    std::map<int, std::vector<FeatureRow>> inc_rows, chal_rows;
    for (int w : weeks) {
      for (const auto& r : weekly_raw[w])
        (r.challenger == 1 ? chal_rows[w] : inc_rows[w]).push_back(r);
    }
    auto inc = analysis::rsq_timeseries(inc_rows, news_spec, "view_ratio");
    auto chal = analysis::rsq_timeseries(chal_rows, news_spec, "view_ratio");
    csv::Table t;
    t.header = {"week", "incumbent_adj_r2", "challenger_adj_r2"};
    for (int w : weeks) t.rows.push_back({std::to_string(w), fmt(inc.at(w)), fmt(chal.at(w))});
    csv::write_file((out / "figure4.csv").string(), t);
  }

  // Figure 1: vote share and view ratio histograms over [0,1].
  {
    auto share = analysis::distribution_histogram(final_rows, "vote_share", 20);
    auto ratio = analysis::distribution_histogram(final_rows, "view_ratio", 20);
    csv::Table t;
    t.header = {"bin_low", "bin_high", "vote_share_count", "view_ratio_count"};
    for (std::size_t b = 0; b < share.counts.size(); ++b)
      t.rows.push_back({fmt(share.edges[b]), fmt(share.edges[b + 1]),
                        std::to_string(share.counts[b]), std::to_string(ratio.counts[b])});
    csv::write_file((out / "figure1_hist.csv").string(), t);
  }

  // Outcome tallies per chamber.
  auto tallies = analysis::outcome_tally(final_rows);
  {
    csv::Table t;
    t.header = {"chamber",           "total_candidates",  "open_seat_races",
                "challenger_victory", "challenger_defeat", "incumbent_victory",
                "incumbent_defeat"};
    for (const auto& [chamber, c] : tallies)
      t.rows.push_back({to_string(chamber), std::to_string(c.total_candidates),
                        std::to_string(c.open_seat_races), std::to_string(c.challenger_victory),
                        std::to_string(c.challenger_defeat), std::to_string(c.incumbent_victory),
                        std::to_string(c.incumbent_defeat)});
    csv::write_file((out / "tallies.csv").string(), t);
  }

  // Probability grid from the multi-covariate winner model.
  auto fit_path = fits_dir(cfg) / "appendixH.json";
  if (!fs::exists(fit_path))
    throw MissingFit("appendixH fit required for the probability grid; run the fit stage");
  std::ifstream fit_in(fit_path);
  std::ostringstream fit_ss;
  fit_ss << fit_in.rdbuf();
  auto grid_fit = regress::FitResult::from_json(fit_ss.str());
  auto grid = analysis::probability_grid(grid_fit, 0);
  {
    csv::Table t;
    t.header = {"opponent_type", "viability", "pageview_outcome", "probability"};
    for (const auto& row : grid)
      t.rows.push_back({analysis::to_string(row.opponent_type),
                        analysis::to_string(row.viability),
                        analysis::to_string(row.pageview_outcome), fmt(row.probability)});
    csv::write_file((out / "probability_grid.csv").string(), t);
  }

  std::ofstream(out / "documented_targets.txt") << analysis::documented_targets();

  // Combined markdown report.
  std::ofstream md(out / "report.md");
  md << "# Pipeline report\n\n## Outcome tallies\n\n"
     << "| chamber | candidates | open seats | chal. wins | chal. losses | inc. wins | inc. "
        "losses |\n|---|---|---|---|---|---|---|\n";
  for (const auto& [chamber, c] : tallies)
    md << "| " << to_string(chamber) << " | " << c.total_candidates << " | " << c.open_seat_races
       << " | " << c.challenger_victory << " | " << c.challenger_defeat << " | "
       << c.incumbent_victory << " | " << c.incumbent_defeat << " |\n";
  md << "\n## Challenger victory probability (stronghold = 0)\n\n"
     << "| opponent | viability | pageviews | P(win) |\n|---|---|---|---|\n";
  for (const auto& row : grid)
    md << "| " << analysis::to_string(row.opponent_type) << " | "
       << analysis::to_string(row.viability) << " | " << analysis::to_string(row.pageview_outcome)
       << " | " << fmt(row.probability) << " |\n";
  md << "\n## Fitted models\n\n";
  std::vector<std::string> fit_names;
  for (const auto& entry : fs::directory_iterator(fits_dir(cfg)))
    if (entry.path().extension() == ".txt" && entry.path().filename() != "summary.txt")
      fit_names.push_back(entry.path().string());
  std::sort(fit_names.begin(), fit_names.end());
  for (const auto& p : fit_names) {
    std::ifstream f(p);
    md << "```\n" << f.rdbuf() << "```\n\n";
  }
  md << "## Published reference values\n\nSee `documented_targets.txt`; those numbers come from "
        "the source study's live-API corpus and are not reproducible offline.\n";
}

int run_command(const PipelineConfig& cfg, const std::string& command) {
  try {
    if (command == "fetch") {
      cmd_fetch(cfg);
    } else if (command == "features") {
      cmd_features(cfg);
    } else if (command == "fit") {
      cmd_fit(cfg);
    } else if (command == "report") {
      cmd_report(cfg);
    } else if (command == "all") {
      cmd_fetch(cfg);
      cmd_features(cfg);
      cmd_fit(cfg);
      cmd_report(cfg);
    } else {
      throw ConfigError("unknown command: " + command);
    }
    return 0;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const RateLimited& e) {
    std::fprintf(stderr, "network error: %s\n", e.what());
    return 3;
  } catch (const TransportError& e) {
    std::fprintf(stderr, "network error: %s\n", e.what());
    return 3;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace ballotlens::cli
