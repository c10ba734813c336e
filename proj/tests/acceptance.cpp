// Release gate: exercises the eight acceptance criteria and prints one
// PASS/FAIL line per criterion. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ballotlens/analysis.hpp"
#include "ballotlens/config.hpp"
#include "ballotlens/features.hpp"
#include "ballotlens/fit.hpp"
#include "ballotlens/pipeline.hpp"
#include "ballotlens/special.hpp"
#include "ballotlens/synth.hpp"
#include "ballotlens/weekly.hpp"
#include "helpers.hpp"

using namespace ballotlens;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

struct Criterion {
  int number;
  std::string title;
  bool ok = true;
  std::string detail;

  Criterion(int n, std::string t) : number(n), title(std::move(t)) {}
  void require(bool cond, const std::string& what) {
    if (!cond && detail.empty()) detail = what;
    ok = ok && cond;
  }
  ~Criterion() {
    std::printf("%s criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", number, title.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++g_failures;
  }
};

bool near(double value, double target, double tol) { return std::abs(value - target) <= tol; }

std::string slurp(const fs::path& p) {
  std::ostringstream ss;
  ss << std::ifstream(p).rdbuf();
  return ss.str();
}

double coefficient(const regress::FitResult& fit, const std::string& label) {
  for (std::size_t j = 0; j < fit.labels.size(); ++j)
    if (fit.labels[j] == label) return fit.coefficients[j];
  return std::nan("");
}

double std_error(const regress::FitResult& fit, const std::string& label) {
  for (std::size_t j = 0; j < fit.labels.size(); ++j)
    if (fit.labels[j] == label) return fit.std_errors[j];
  return std::nan("");
}

// --- criterion 1: published two-coefficient logits reproduce anchor points.

void criterion1() {
  Criterion c(1, "probability anchors from published coefficient pairs");
  c.require(near(regress::predict_prob({-1.1237, 2.3281}, {1.0, 0.5}), 0.510, 0.005),
            "continuous-ratio model at x=0.5");
  c.require(near(regress::predict_prob({-1.1237, 2.3281}, {1.0, 0.6}), 0.568, 0.010),
            "continuous-ratio model at x=0.6");
  c.require(near(regress::predict_prob({-3.7740, 7.2896}, {1.0, 0.0}), 0.0225, 0.003),
            "mixed-page model at x=0");
  c.require(near(regress::predict_prob({-0.8226, 1.6407}, {1.0, 1.0}), 0.694, 0.015),
            "both-page binary model at x=1");
}

// --- criterion 2: the one pinned probability-grid cell.

void criterion2() {
  Criterion c(2, "pinned grid cell (Incumbent, LessViable, Fewer, stronghold=0)");
  regress::FitResult fit;
  fit.family = regress::Family::Logit;
  fit.labels = {"Intercept", "challenger", "open_seat", "stronghold", "via_win", "view_win"};
  fit.coefficients = {-1.6264, -2.2321, 0.7726, 2.9877, 1.9793, 1.0037};
  auto grid = analysis::probability_grid(fit, 0);
  c.require(grid.size() == 8, "grid must have 8 cells");
  bool found = false;
  for (const auto& cell : grid) {
    if (cell.opponent_type == analysis::OpponentType::Incumbent &&
        cell.viability == analysis::Viability::LessViable &&
        cell.pageview_outcome == analysis::PageviewOutcome::Fewer) {
      found = true;
      c.require(near(cell.probability, 0.021, 0.002),
                "cell probability " + std::to_string(cell.probability));
    }
  }
  c.require(found, "cell not present");
}

// --- criterion 3: estimator cross-validation against independent oracles.

double oracle_ll(const std::vector<double>& x, const std::vector<double>& y, double b0, double b1) {
  double ll = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double eta = b0 + b1 * x[i];
    double lse = eta > 0 ? std::log1p(std::exp(-eta)) : -eta + std::log1p(std::exp(eta));
    ll += y[i] > 0.5 ? -lse : -eta - lse;
  }
  return ll;
}

std::pair<double, double> grid_mle(const std::vector<double>& x, const std::vector<double>& y) {
  double c0 = 0, c1 = 0, half = 12.0;
  for (int pass = 0; pass < 9; ++pass) {
    double best = -1e300, b0best = c0, b1best = c1;
    for (int i = -40; i <= 40; ++i)
      for (int j = -40; j <= 40; ++j) {
        double ll = oracle_ll(x, y, c0 + half * i / 40.0, c1 + half * j / 40.0);
        if (ll > best) {
          best = ll;
          b0best = c0 + half * i / 40.0;
          b1best = c1 + half * j / 40.0;
        }
      }
    c0 = b0best;
    c1 = b1best;
    half /= 10.0;
  }
  return {c0, c1};
}

std::vector<long double> normal_equations(const linalg::Matrix& x, const std::vector<double>& y) {
  const std::size_t n = x.rows(), p = x.cols();
  std::vector<std::vector<long double>> a(p, std::vector<long double>(p + 1, 0.0L));
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t k = 0; k < p; ++k)
      for (std::size_t i = 0; i < n; ++i)
        a[j][k] += static_cast<long double>(x(i, j)) * x(i, k);
    for (std::size_t i = 0; i < n; ++i) a[j][p] += static_cast<long double>(x(i, j)) * y[i];
  }
  for (std::size_t c = 0; c < p; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < p; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    for (std::size_t r = c + 1; r < p; ++r) {
      long double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k <= p; ++k) a[r][k] -= f * a[c][k];
    }
  }
  std::vector<long double> beta(p);
  for (std::size_t c = p; c-- > 0;) {
    long double s = a[c][p];
    for (std::size_t k = c + 1; k < p; ++k) s -= a[c][k] * beta[k];
    beta[c] = s / a[c][c];
  }
  return beta;
}

void criterion3() {
  Criterion c(3, "estimators agree with independent oracles");

  const std::vector<double> lx = {0.1, 0.3, 0.35, 0.5, 0.55, 0.7, 0.8, 0.9};
  const std::vector<double> ly = {0, 0, 1, 0, 1, 1, 0, 1};
  auto [b0, b1] = grid_mle(lx, ly);
  auto lfit = regress::logit_fit(bltest::raw_design({lx}, ly));
  c.require(lfit.converged && std::abs(lfit.coefficients[0] - b0) < 1e-3 &&
                std::abs(lfit.coefficients[1] - b1) < 1e-3,
            "logit vs grid-refinement oracle");

  std::mt19937_64 rng(20160101);
  std::normal_distribution<double> nd;
  const std::size_t n = 200;
  std::vector<std::vector<double>> cols(4, std::vector<double>(n));
  std::vector<double> y(n);
  const double truth[5] = {0.4, 1.3, -0.7, 0.05, 2.1};
  for (std::size_t i = 0; i < n; ++i) {
    double yi = truth[0];
    for (std::size_t k = 0; k < 4; ++k) {
      cols[k][i] = nd(rng) * (k + 1);
      yi += truth[k + 1] * cols[k][i];
    }
    y[i] = yi + 0.3 * nd(rng);
  }
  auto d = bltest::raw_design(cols, y);
  auto ofit = regress::ols_fit(d);
  auto oracle = normal_equations(d.values, d.response);
  for (std::size_t j = 0; j < 5; ++j)
    c.require(std::abs(ofit.coefficients[j] - static_cast<double>(oracle[j])) < 1e-8,
              "ols vs extended-precision normal equations");

  std::mt19937_64 grng(2024);
  std::uniform_real_distribution<double> ub(-1.5, 1.5);
  std::vector<double> x1(50), x2(50), gy(50);
  for (std::size_t i = 0; i < 50; ++i) {
    x1[i] = nd(grng);
    x2[i] = nd(grng);
    gy[i] = (nd(grng) + 0.8 * x1[i] > 0) ? 1.0 : 0.0;
  }
  auto gd = bltest::raw_design({x1, x2}, gy);
  const double h = 1e-6;
  for (int pt = 0; pt < 20; ++pt) {
    std::vector<double> beta = {ub(grng), ub(grng), ub(grng)};
    auto grad = regress::logit_gradient(gd, beta);
    for (std::size_t j = 0; j < 3; ++j) {
      auto bp = beta, bm = beta;
      bp[j] += h;
      bm[j] -= h;
      double fd = (regress::logit_loglik(gd, bp) - regress::logit_loglik(gd, bm)) / (2 * h);
      double scale = std::max({std::abs(grad[j]), std::abs(fd), 1.0});
      c.require(std::abs(grad[j] - fd) / scale < 1e-6, "analytic vs central-difference gradient");
    }
  }
}

// --- criterion 4: analytic edge cases with exact answers.

void criterion4() {
  Criterion c(4, "analytically solvable special cases");

  std::vector<double> x = {0.0, 1.0, 2.0, 3.0, 4.0};
  std::vector<double> y;
  for (double xi : x) y.push_back(2.5 - 1.25 * xi);
  auto fit = regress::ols_fit(bltest::raw_design({x}, y));
  c.require(std::abs(fit.coefficients[0] - 2.5) < 1e-8 &&
                std::abs(fit.coefficients[1] + 1.25) < 1e-8 && fit.ols_stats.r2 == 1.0,
            "noiseless line recovery");

  std::vector<double> wins(20, 0.0);
  for (int i = 0; i < 7; ++i) wins[i] = 1.0;
  auto lfit = regress::logit_fit(bltest::raw_design({}, wins));
  double pbar = 7.0 / 20.0;
  c.require(std::abs(lfit.coefficients[0] - std::log(pbar / (1 - pbar))) < 1e-8,
            "intercept-only logit closed form");
  c.require(lfit.logit_stats.pseudo_r2_mcfadden == 0.0, "null-model pseudo r-squared");

  for (double z : {-2.0, -0.5, 0.0, 0.7, 1.5, 2.5}) {
    double t_tail = special::tail_probability(special::Dist::StudentT, z, 1e6);
    double n_tail = special::tail_probability(special::Dist::Normal, z);
    c.require(std::abs(t_tail - n_tail) < 1e-4, "t(1e6) vs normal tails");
  }
  c.require(near(special::tail_probability(special::Dist::ChiSquare, 5.9915, 2.0), 0.0500, 1e-4),
            "chi-square(2) upper tail at 5.9915");
}

// --- criterion 5: feature invariants over randomized races.

void criterion5() {
  Criterion c(5, "feature invariants over 10^4 randomized races");
  std::mt19937_64 rng(424242);
  std::uniform_int_distribution<int> n_cand(2, 6);
  std::uniform_real_distribution<double> value(0.0, 1e5);
  bool sums_ok = true, scale_ok = true, winner_ok = true;
  for (int race = 0; race < 10000; ++race) {
    int n = n_cand(rng);
    std::map<std::string, double> values;
    for (int i = 0; i < n; ++i) values["c" + std::to_string(i)] = value(rng);

    auto base = features::race_ratios(values);
    double sum = 0;
    for (const auto& [id, r] : base.ratios) sum += r;
    sums_ok = sums_ok && !base.zero_total && std::abs(sum - 1.0) <= 1e-12;

    for (double scale : {1e-3, 1.0, 1e6}) {
      auto scaled_values = values;
      for (auto& [id, v] : scaled_values) v *= scale;
      auto scaled = features::race_ratios(scaled_values);
      for (const auto& [id, r] : base.ratios)
        scale_ok = scale_ok && std::abs(scaled.ratios.at(id) - r) <= 1e-12;
    }

    auto outcome = features::binary_outcome(values);
    int winners = 0;
    std::string argmax;
    double best = -1;
    for (const auto& [id, v] : values)
      if (v > best) best = v, argmax = id;
    for (const auto& [id, w] : outcome) {
      winners += w;
      if (w) winner_ok = winner_ok && id == argmax;
    }
    winner_ok = winner_ok && winners <= 1;
  }
  c.require(sums_ok, "ratio sums within 1e-12 of 1");
  c.require(scale_ok, "scale invariance at 1e-3 / 1 / 1e6");
  c.require(winner_ok, "at most one winner, matching the maximum");

  // Cumulative week 51 times 7 equals the raw daily total.
  std::uint64_t state = 88172645463325252ULL;
  DailySeries daily;
  daily.start_date = add_days(election_day(2016), -363);
  double total = 0;
  for (int i = 0; i < 364; ++i) {
    state ^= state << 13, state ^= state >> 7, state ^= state << 17;
    daily.counts.push_back(static_cast<std::int64_t>(state % 10000));
    total += static_cast<double>(daily.counts.back());
  }
  auto cum = features::to_cumulative(features::weekly_average(daily, election_day(2016)));
  c.require(std::abs(cum.values[51] * 7.0 - total) <= 1e-9 * total,
            "cumulative week 51 reconciles with the daily total");
}

// --- criteria 6-8: the synthetic corpus end to end, plus determinism.

void criteria_6_7_8() {
  const fs::path root = fs::temp_directory_path() / "bl_acceptance";
  fs::remove_all(root);

  {
    Criterion c(6, "end-to-end recovery of planted effects on the synthetic corpus");
    auto start = std::chrono::steady_clock::now();
    auto summary = synth::generate_corpus(root.string(), 7704);
    c.require(summary.races == 400 && summary.candidates == 800, "corpus shape");

    auto cfg = cli::load_config((root / "config.toml").string());
    cfg.out_dir = (root / "run1").string();
    c.require(cli::run_command(cfg, "all") == 0, "pipeline exit status");
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    auto fits_text = slurp(fs::path(cfg.out_dir) / "fits" / "summary.txt");
    c.require(fits_text.find("failed: 0") != std::string::npos, "full registry convergence");

    auto m1 = regress::FitResult::from_json(
        slurp(fs::path(cfg.out_dir) / "fits" / "table3.model1.json"));
    double slope = coefficient(m1, "view_ratio"), se = std_error(m1, "view_ratio");
    c.require(std::abs(slope - 0.27) <= 3 * se,
              "planted slope: got " + std::to_string(slope) + " se " + std::to_string(se));

    auto m4 = regress::FitResult::from_json(
        slurp(fs::path(cfg.out_dir) / "fits" / "table3.model4.json"));
    double inter = coefficient(m4, "view_ratio:challenger");
    double inter_se = std_error(m4, "view_ratio:challenger");
    c.require(std::abs(inter - 0.15) <= 3 * inter_se,
              "planted interaction: got " + std::to_string(inter) + " se " +
                  std::to_string(inter_se));

    c.require(elapsed < 30.0, "runtime " + std::to_string(elapsed) + " s");
  }

  {
    Criterion c(7, "published real-corpus values are documented targets, not gates");
    auto text = slurp(root / "run1" / "documented_targets.txt");
    c.require(!text.empty(), "documented_targets.txt missing");
    c.require(text.find("reference only, not CI gates") != std::string::npos,
              "non-gating statement");
    for (const char* value : {"0.273", "-3.7740", "7.2896", "-1.6264", "0.7322"})
      c.require(text.find(value) != std::string::npos, std::string("missing value ") + value);
  }

  {
    Criterion c(8, "offline reruns are byte-identical");
    auto cfg = cli::load_config((root / "config.toml").string());
    cfg.out_dir = (root / "run2").string();
    c.require(cli::run_command(cfg, "all") == 0, "second run exit status");
    std::size_t compared = 0;
    for (const auto& entry : fs::recursive_directory_iterator(root / "run1")) {
      if (!entry.is_regular_file()) continue;
      auto rel = fs::relative(entry.path(), root / "run1");
      auto twin = root / "run2" / rel;
      c.require(fs::exists(twin) && slurp(entry.path()) == slurp(twin),
                "differs: " + rel.string());
      ++compared;
    }
    c.require(compared > 100, "too few files compared");
  }

  fs::remove_all(root);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criteria_6_7_8();
  return g_failures;
}
