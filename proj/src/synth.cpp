#include "ballotlens/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "ballotlens/cache.hpp"
#include "ballotlens/clients.hpp"
#include "ballotlens/csv.hpp"
#include "ballotlens/dates.hpp"
#include "ballotlens/linalg.hpp"
#include "ballotlens/loaders.hpp"
#include "json.hpp"

namespace ballotlens::synth {

namespace fs = std::filesystem;
using ingest::DiskCache;

namespace {

constexpr int kYear = 2016;
constexpr int kDays = 364;

const char* kFirstNames[] = {"Avery",  "Blake",   "Casey",  "Drew",  "Emery",
                             "Finley", "Harper",  "Jordan", "Kendall", "Logan"};
const char* kLastNames[] = {"Stone", "Reyes", "Walsh", "Osei",  "Tanaka",
                            "Novak", "Ibarra", "Holt",  "Fraser", "Okafor"};
const char* kStates[] = {"AL", "AK", "AZ", "AR", "CA", "CO", "CT", "DE", "FL", "GA",
                         "HI", "ID", "IL", "IN", "IA", "KS", "KY", "LA", "ME", "MD",
                         "MA", "MI", "MN", "MS", "MO", "MT", "NE", "NV", "NH", "NJ",
                         "NM", "NY", "NC", "ND", "OH", "OK", "OR", "PA", "RI", "SC",
                         "SD", "TN", "TX", "UT", "VT", "VA", "WA", "WV", "WI", "WY"};

struct Cand {
  std::string name;
  RaceKey race;
  bool incumbent = false;
  bool no_page = false;
  double vint = 0;         // intended view share
  std::int64_t view_total = 0;
  double vr = 0;           // realized view ratio
  double share = 0;        // planted vote share
  double receipts = 0;
  bool win = false;
  bool stronghold = false;
  std::vector<std::int64_t> views;  // per day, empty when no page
};

std::string make_name(int idx) {
  return std::string(kFirstNames[idx % 10]) + " " + kLastNames[(idx / 10) % 10] +
         std::to_string(idx);
}

// Least-squares projection residual u - Z (Z'Z)^-1 Z'u over one chamber.
void orthogonalize(std::vector<double>& u, const std::vector<double>& vr,
                   const std::vector<double>& ch) {
  const std::size_t n = u.size();
  linalg::Matrix z(n, 4);
  for (std::size_t i = 0; i < n; ++i) {
    z(i, 0) = 1.0;
    z(i, 1) = vr[i];
    z(i, 2) = ch[i];
    z(i, 3) = vr[i] * ch[i];
  }
  auto ls = linalg::svd_lstsq(z, u);
  auto fitted = linalg::matvec(z, ls.beta);
  for (std::size_t i = 0; i < n; ++i) u[i] -= fitted[i];
}

}  // namespace

CorpusSummary generate_corpus(const std::string& dir, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto eday = election_day(kYear);
  auto window = collection_window(eday);

  // --- lay out races ---
  // House: 300 incumbent/challenger (first 45: challenger has no page),
  // then 60 open-seat. Senate: 34 incumbent/challenger, then 6 open-seat.
  std::vector<Cand> cands;
  std::vector<std::pair<int, int>> races;  // candidate index pairs
  int name_idx = 0;

  auto draw_v = [&]() {
    return unit(rng) < 0.45 ? 0.51 + 0.12 * unit(rng) : 0.60 + 0.30 * unit(rng);
  };
  auto add_race = [&](Chamber chamber, int race_no, bool open_seat, bool no_page_chal) {
    RaceKey key;
    key.year = kYear;
    key.chamber = chamber;
    if (chamber == Chamber::House) {
      key.state = kStates[race_no % 50];
      key.district = race_no / 50 + 1;
    } else {
      key.state = kStates[race_no];
      key.district = 0;
    }
    Cand a, b;
    a.race = b.race = key;
    a.name = make_name(name_idx++);
    b.name = make_name(name_idx++);
    if (open_seat) {
      double w = 0.35 + 0.30 * unit(rng);
      a.vint = w;
      b.vint = 1.0 - w;
    } else {
      a.incumbent = true;
      double v = draw_v();
      if (no_page_chal) {
        a.vint = 1.0;
        b.vint = 0.0;
        b.no_page = true;
      } else {
        a.vint = v;
        b.vint = 1.0 - v;
      }
    }
    int ia = static_cast<int>(cands.size());
    cands.push_back(std::move(a));
    cands.push_back(std::move(b));
    races.emplace_back(ia, ia + 1);
  };

  for (int i = 0; i < 300; ++i) add_race(Chamber::House, i, false, i < 45);
  for (int i = 0; i < 60; ++i) add_race(Chamber::House, 300 + i, true, false);
  for (int i = 0; i < 34; ++i) add_race(Chamber::Senate, i, false, false);
  for (int i = 0; i < 6; ++i) add_race(Chamber::Senate, 34 + i, true, false);

  // --- daily pageview series and realized ratios ---
  std::lognormal_distribution<double> race_total(10.5, 0.6);
  for (auto& [ia, ib] : races) {
    double total = race_total(rng);
    for (int idx : {ia, ib}) {
      Cand& c = cands[idx];
      if (c.no_page) continue;
      double lambda = std::max(total * c.vint, 1e-9) / kDays;
      std::poisson_distribution<std::int64_t> day(lambda);
      c.views.resize(kDays);
      c.view_total = 0;
      for (int d = 0; d < kDays; ++d) {
        c.views[d] = day(rng);
        c.view_total += c.views[d];
      }
    }
    std::int64_t t = cands[ia].view_total + cands[ib].view_total;
    cands[ia].vr = t > 0 ? static_cast<double>(cands[ia].view_total) / t : 0.5;
    cands[ib].vr = 1.0 - cands[ia].vr;
  }

  // --- planted vote shares, per chamber ---
  // u carries the planted winner flips: challengers of the first 6 no-page
  // races win, and among both-page incumbent races every 9th underdog wins.
  // u is then projected out of span{1, vr, ch, vr*ch} so the planted
  // coefficients (0.27 slope, +0.15 interaction) stay recoverable.
  std::normal_distribution<double> noise(0.0, 0.025);
  for (Chamber chamber : {Chamber::House, Chamber::Senate}) {
    std::vector<int> idx;
    for (std::size_t i = 0; i < cands.size(); ++i)
      if (cands[i].race.chamber == chamber) idx.push_back(static_cast<int>(i));
    const std::size_t n = idx.size();
    std::vector<double> vr(n), ch(n), u(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      vr[i] = cands[idx[i]].vr;
      ch[i] = cands[idx[i]].incumbent ? 0.0 : 1.0;
    }
    auto flip = [&](std::size_t lo, std::size_t hi, double lo_up, double hi_down) {
      u[lo] += lo_up;
      u[hi] -= hi_down;
    };
    if (chamber == Chamber::House) {
      for (std::size_t r = 0; r < 6; ++r) flip(2 * r + 1, 2 * r, 0.30, 0.28);
      for (std::size_t r = 45; r < 300; r += 9) {
        std::size_t a = 2 * r, b = 2 * r + 1;
        std::size_t lo = vr[a] < vr[b] ? a : b, hi = a + b - lo;
        double gap = 0.27 * std::abs(vr[hi] - vr[lo]) + 0.04;
        flip(lo, hi, gap, gap);
      }
    } else {
      for (std::size_t r = 4; r < 34; r += 9) {
        std::size_t a = 2 * r, b = 2 * r + 1;
        std::size_t lo = vr[a] < vr[b] ? a : b, hi = a + b - lo;
        double gap = 0.27 * std::abs(vr[hi] - vr[lo]) + 0.04;
        flip(lo, hi, gap, gap);
      }
    }
    orthogonalize(u, vr, ch);
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = 0.15 * vr[i] * ch[i] - 0.15 * ch[i] + u[i];
    // Residualize g against vr so the marginal slope stays at 0.27.
    double mv = 0, mg = 0;
    for (std::size_t i = 0; i < n; ++i) {
      mv += vr[i];
      mg += g[i];
    }
    mv /= n;
    mg /= n;
    double cov = 0, var = 0;
    for (std::size_t i = 0; i < n; ++i) {
      cov += (vr[i] - mv) * (g[i] - mg);
      var += (vr[i] - mv) * (vr[i] - mv);
    }
    double b = var > 0 ? cov / var : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double eps = std::clamp(noise(rng), -0.075, 0.075);
      double s = 0.36 + 0.27 * vr[i] + (g[i] - b * (vr[i] - mv)) + eps;
      cands[idx[i]].share = std::clamp(s, 0.01, 0.97);
    }
  }
  for (auto& [ia, ib] : races) {
    double sum = cands[ia].share + cands[ib].share;
    if (sum > 0.995) {
      cands[ia].share *= 0.995 / sum;
      cands[ib].share *= 0.995 / sum;
    }
    (cands[ia].share >= cands[ib].share ? cands[ia] : cands[ib]).win = true;
  }

  // --- receipts and stronghold labels ---
  std::lognormal_distribution<double> rec_noise(0.0, 0.5);
  for (auto& c : cands) {
    c.receipts = std::pow(c.vr + 0.05, 0.8) * rec_noise(rng) * 1e6;
    c.stronghold = unit(rng) < (c.win ? 0.7 : 0.1);
  }

  // --- output tree ---
  fs::path root(dir);
  fs::create_directories(root);
  DiskCache cache((root / "cache").string());

  // results.csv: 2016 rows plus 2014 seat-winner rows so incumbency is
  // derived through the prior-cycle lookback.
  csv::Table results;
  results.header = {"year",      "chamber", "state", "district",
                    "candidate", "party",   "votes", "totalvotes"};
  int foil = 0;
  for (auto& [ia, ib] : races) {
    const Cand& inc = cands[ia];
    if (inc.incumbent) {
      results.rows.push_back({"2014", to_string(inc.race.chamber), inc.race.state,
                              std::to_string(inc.race.district), inc.name, "BLU", "60000",
                              "100000"});
      results.rows.push_back({"2014", to_string(inc.race.chamber), inc.race.state,
                              std::to_string(inc.race.district),
                              "Riley Foil" + std::to_string(foil++), "IND", "40000", "100000"});
    }
    for (int i : {ia, ib}) {
      const Cand& c = cands[i];
      results.rows.push_back({std::to_string(kYear), to_string(c.race.chamber), c.race.state,
                              std::to_string(c.race.district), c.name,
                              c.incumbent ? "BLU" : "GRN",
                              std::to_string(static_cast<std::int64_t>(
                                  std::llround(c.share * 1e6))),
                              "1000000"});
    }
  }
  csv::write_file((root / "results.csv").string(), results);

  csv::Table receipts;
  receipts.header = {"candidate_id", "receipts_usd"};
  csv::Table overrides;
  overrides.header = {"candidate_id", "wikipedia_title", "fec_id", "incumbent", "stronghold"};
  for (const auto& c : cands) {
    std::string id = ingest::candidate_id_for(c.race, c.name);
    std::ostringstream usd;
    usd.setf(std::ios::fixed);
    usd.precision(2);
    usd << c.receipts;
    receipts.rows.push_back({id, usd.str()});
    overrides.rows.push_back({id, "", "", "", c.stronghold ? "1" : "0"});
  }
  csv::write_file((root / "receipts.csv").string(), receipts);
  csv::write_file((root / "overrides.csv").string(), overrides);

  // --- cache fixtures: pageviews ---
  auto day_stamp = [&](int d) { return to_yyyymmdd(add_days(window.begin, d)); };
  for (const auto& c : cands) {
    auto query = ingest::PageviewsClient::cache_query(c.name, window);
    if (c.no_page) {
      cache.put(ingest::PageviewsClient::kEndpoint, query,
                {404, "{\"title\":\"Not found.\",\"status\":404}"});
      continue;
    }
    nlohmann::json items = nlohmann::json::array();
    for (int d = 0; d < kDays; ++d) {
      items.push_back({{"timestamp", day_stamp(d) + "00"}, {"views", c.views[d]}});
    }
    nlohmann::json body;
    body["items"] = std::move(items);
    cache.put(ingest::PageviewsClient::kEndpoint, query, {200, body.dump()});
  }

  // --- cache fixtures: tv mentions, three channels ---
  // Mention volume tracks intended view share with an incumbency bump, so
  // news ratios correlate with (without duplicating) pageview ratios.
  const std::vector<std::string> channels = ingest::default_channels();
  const double channel_weight[3] = {0.5, 0.3, 0.2};
  std::lognormal_distribution<double> mention_total(6.0, 0.5);
  for (auto& [ia, ib] : races) {
    double m = mention_total(rng);
    double wa = 0.25 + 0.50 * cands[ia].vint + (cands[ia].incumbent ? 0.15 : 0.0);
    double wb = 0.25 + 0.50 * cands[ib].vint + (cands[ib].incumbent ? 0.15 : 0.0);
    for (int i : {ia, ib}) {
      const Cand& c = cands[i];
      double share = (i == ia ? wa : wb) / (wa + wb);
      for (std::size_t ch_i = 0; ch_i < channels.size(); ++ch_i) {
        double lambda = m * share * channel_weight[ch_i] / kDays;
        std::poisson_distribution<std::int64_t> day(lambda);
        nlohmann::json data = nlohmann::json::array();
        for (int d = 0; d < kDays; ++d) {
          std::int64_t v = day(rng);
          if (v > 0) data.push_back({{"date", day_stamp(d) + "T000000Z"},
                                     {"value", static_cast<double>(v)}});
        }
        nlohmann::json body;
        body["timeline"] = nlohmann::json::array();
        body["timeline"].push_back({{"series", channels[ch_i]}, {"data", std::move(data)}});
        cache.put(ingest::TvMentionsClient::kEndpoint,
                  ingest::TvMentionsClient::cache_query(c.name, channels[ch_i], window),
                  {200, body.dump()});
      }
    }
  }

  std::ofstream cfg(root / "config.toml");
  cfg << "years = [" << kYear << "]\n"
      << "results = \"" << (root / "results.csv").string() << "\"\n"
      << "receipts = \"" << (root / "receipts.csv").string() << "\"\n"
      << "overrides = \"" << (root / "overrides.csv").string() << "\"\n"
      << "cache_dir = \"" << (root / "cache").string() << "\"\n"
      << "out_dir = \"" << (root / "out").string() << "\"\n"
      << "offline = true\n"
      << "cumulative = true\n";
  cfg.close();

  return {static_cast<int>(races.size()), static_cast<int>(cands.size())};
}

}  // namespace ballotlens::synth
