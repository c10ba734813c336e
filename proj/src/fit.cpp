#include "ballotlens/fit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "ballotlens/errors.hpp"
#include "ballotlens/special.hpp"
#include "json.hpp"

namespace ballotlens::regress {

namespace {

constexpr double kRankRcond = 1e-10;
constexpr double kSeparationBound = 30.0;
constexpr double kLogitGradTol = 1e-8;
constexpr double kLogitLlTol = 1e-10;
constexpr int kLogitMaxIter = 100;
constexpr int kMaxHalvings = 10;
constexpr double kNormalQ975 = 1.959964;

double sigmoid(double t) {
  if (t >= 0) {
    double e = std::exp(-t);
    return 1.0 / (1.0 + e);
  }
  double e = std::exp(t);
  return e / (1.0 + e);
}

// log(sigmoid(t)) without overflow
double log_sigmoid(double t) { return t >= 0 ? -std::log1p(std::exp(-t)) : t - std::log1p(std::exp(t)); }

std::string offending_columns(const linalg::Svd& svd, const std::vector<std::string>& labels,
                              double cutoff) {
  std::string out;
  const std::size_t p = labels.size();
  for (std::size_t k = 0; k < p; ++k) {
    if (svd.singular[k] > cutoff) continue;
    for (std::size_t j = 0; j < p; ++j) {
      if (std::abs(svd.vt(k, j)) > 0.3) {
        if (!out.empty()) out += ", ";
        out += labels[j];
      }
    }
  }
  return out.empty() ? "(unidentified)" : out;
}

void fill_inference(FitResult& fit, const linalg::Matrix& cov, double crit,
                    special::Dist dist, std::optional<double> df) {
  const std::size_t p = fit.coefficients.size();
  fit.covariance = cov;
  fit.std_errors.resize(p);
  fit.test_stats.resize(p);
  fit.p_values.resize(p);
  fit.conf_intervals_95.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    double se = std::sqrt(std::max(0.0, cov(j, j)));
    fit.std_errors[j] = se;
    double b = fit.coefficients[j];
    if (se > 0) {
      double stat = b / se;
      fit.test_stats[j] = stat;
      fit.p_values[j] = special::tail_probability(dist, stat, df);
    } else {
      fit.test_stats[j] = b == 0 ? 0.0 : std::numeric_limits<double>::infinity();
      fit.p_values[j] = b == 0 ? 1.0 : 0.0;
    }
    fit.conf_intervals_95[j] = {b - crit * se, b + crit * se};
  }
}

}  // namespace

FitResult ols_fit(const DesignMatrix& d) {
  const std::size_t n = d.values.rows(), p = d.values.cols();
  if (n <= p) throw RankDeficient("need n > p, got n=" + std::to_string(n) +
                                  " p=" + std::to_string(p));

  auto svd = linalg::jacobi_svd(d.values);
  double cutoff = kRankRcond * svd.singular[0];
  for (double s : svd.singular)
    if (s <= cutoff)
      throw RankDeficient("rank-deficient design; offending columns: " +
                          offending_columns(svd, d.column_labels, cutoff));

  auto ls = linalg::svd_lstsq(d.values, d.response, kRankRcond);

  FitResult fit;
  fit.family = Family::OLS;
  fit.n = n;
  fit.labels = d.column_labels;
  fit.coefficients = ls.beta;
  fit.converged = true;
  fit.iterations = 0;

  std::vector<double> yhat = linalg::matvec(d.values, ls.beta);
  double rss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double e = d.response[i] - yhat[i];
    rss += e * e;
  }
  double ssy = 0;
  for (double y : d.response) ssy += y * y;
  if (rss <= 1e-24 * ssy) rss = 0;  // exact fit up to rounding

  const bool has_intercept = !d.column_labels.empty() && d.column_labels[0] == "Intercept";
  double tss = 0;
  if (has_intercept) {
    double mean = 0;
    for (double y : d.response) mean += y;
    mean /= static_cast<double>(n);
    for (double y : d.response) tss += (y - mean) * (y - mean);
  } else {
    for (double y : d.response) tss += y * y;
  }

  const double dof = static_cast<double>(n - p);
  double sigma2 = rss / dof;
  linalg::Matrix cov(p, p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) cov(i, j) = sigma2 * ls.xtx_inverse(i, j);

  double crit = sigma2 > 0 ? special::student_t_quantile(0.05, dof) : 0.0;
  fill_inference(fit, cov, crit, special::Dist::StudentT, dof);

  OlsStats& s = fit.ols_stats;
  s.r2 = tss > 0 ? 1.0 - rss / tss : 1.0;
  s.r2 = std::clamp(s.r2, 0.0, 1.0);
  double k_model = static_cast<double>(p) - (has_intercept ? 1.0 : 0.0);
  s.adj_r2 = k_model > 0 && n > p
                 ? 1.0 - (1.0 - s.r2) * (static_cast<double>(n) - 1.0) / dof
                 : s.r2;
  if (k_model > 0 && rss > 0) {
    s.f_stat = ((tss - rss) / k_model) / (rss / dof);
    s.f_pvalue = special::tail_probability(special::Dist::F, s.f_stat, k_model, dof);
  } else {
    s.f_stat = 0;
    s.f_pvalue = 1;
  }
  double sigma2_mle = rss / static_cast<double>(n);
  s.log_likelihood = sigma2_mle > 0
                         ? -0.5 * static_cast<double>(n) *
                               (std::log(2.0 * M_PI * sigma2_mle) + 1.0)
                         : std::numeric_limits<double>::infinity();
  s.aic = 2.0 * static_cast<double>(p) - 2.0 * s.log_likelihood;
  s.bic = static_cast<double>(p) * std::log(static_cast<double>(n)) - 2.0 * s.log_likelihood;

  if (rss > 0 && n >= 3) {
    fit.diagnostics = residual_diagnostics(d, fit);
  }
  return fit;
}

Diagnostics residual_diagnostics(const DesignMatrix& d, const FitResult& fit) {
  const std::size_t n = d.values.rows();
  if (n < 3) throw DegenerateResiduals("need at least 3 residuals");
  std::vector<double> yhat = linalg::matvec(d.values, fit.coefficients);
  std::vector<double> e(n);
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    e[i] = d.response[i] - yhat[i];
    ss += e[i] * e[i];
  }
  double ssy = 0;
  for (double y : d.response) ssy += y * y;
  if (ss <= 1e-24 * ssy) throw DegenerateResiduals("all residuals are zero");

  Diagnostics g;
  double num = 0;
  for (std::size_t i = 1; i < n; ++i) {
    double de = e[i] - e[i - 1];
    num += de * de;
  }
  g.durbin_watson = num / ss;

  double mean = 0;
  for (double v : e) mean += v;
  mean /= static_cast<double>(n);
  double m2 = 0, m3 = 0, m4 = 0;
  for (double v : e) {
    double c = v - mean;
    m2 += c * c;
    m3 += c * c * c;
    m4 += c * c * c * c;
  }
  m2 /= static_cast<double>(n);
  m3 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);
  g.skew = m3 / std::pow(m2, 1.5);
  g.kurtosis = m4 / (m2 * m2);
  double k3 = g.kurtosis - 3.0;
  g.jarque_bera = static_cast<double>(n) / 6.0 * (g.skew * g.skew + 0.25 * k3 * k3);
  g.jb_pvalue = special::tail_probability(special::Dist::ChiSquare, g.jarque_bera, 2.0);

  auto svd = linalg::jacobi_svd(d.values);
  double smin = svd.singular.back();
  g.condition_number = smin > 0 ? svd.singular.front() / smin
                                : std::numeric_limits<double>::infinity();
  return g;
}

double logit_loglik(const DesignMatrix& d, const std::vector<double>& beta) {
  std::vector<double> eta = linalg::matvec(d.values, beta);
  double ll = 0;
  for (std::size_t i = 0; i < eta.size(); ++i) {
    // y*log(mu) + (1-y)*log(1-mu), with log(1-sigmoid(t)) = log_sigmoid(-t)
    ll += d.response[i] > 0.5 ? log_sigmoid(eta[i]) : log_sigmoid(-eta[i]);
  }
  return ll;
}

std::vector<double> logit_gradient(const DesignMatrix& d, const std::vector<double>& beta) {
  std::vector<double> eta = linalg::matvec(d.values, beta);
  std::vector<double> resid(eta.size());
  for (std::size_t i = 0; i < eta.size(); ++i) resid[i] = d.response[i] - sigmoid(eta[i]);
  return linalg::matvec_t(d.values, resid);
}

FitResult logit_fit(const DesignMatrix& d) {
  const std::size_t n = d.values.rows(), p = d.values.cols();
  if (n <= p) throw RankDeficient("need n > p, got n=" + std::to_string(n) +
                                  " p=" + std::to_string(p));
  double ybar = 0;
  for (double y : d.response) {
    if (y != 0.0 && y != 1.0) throw SchemaError("logit response must be 0/1");
    ybar += y;
  }
  ybar /= static_cast<double>(n);
  if (ybar <= 0.0 || ybar >= 1.0) throw Separation("response is constant");

  const bool has_intercept = !d.column_labels.empty() && d.column_labels[0] == "Intercept";

  FitResult fit;
  fit.family = Family::Logit;
  fit.n = n;
  fit.labels = d.column_labels;

  std::vector<double> beta(p, 0.0);
  double ll = logit_loglik(d, beta);
  int iter = 0;
  bool converged = false;

  if (has_intercept && p == 1) {
    // closed-form MLE for the intercept-only model
    beta[0] = std::log(ybar / (1.0 - ybar));
    ll = logit_loglik(d, beta);
    converged = true;
  }

  while (!converged) {
    if (iter >= kLogitMaxIter)
      throw NotConverged("logit did not converge in " + std::to_string(kLogitMaxIter) +
                         " iterations");
    ++iter;

    std::vector<double> eta = linalg::matvec(d.values, beta);
    std::vector<double> grad(p, 0.0);
    linalg::Matrix hess(p, p);
    for (std::size_t i = 0; i < n; ++i) {
      double mu = sigmoid(eta[i]);
      double w = mu * (1.0 - mu);
      double r = d.response[i] - mu;
      for (std::size_t a = 0; a < p; ++a) {
        grad[a] += d.values(i, a) * r;
        for (std::size_t b = 0; b <= a; ++b) hess(a, b) += w * d.values(i, a) * d.values(i, b);
      }
    }
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = a + 1; b < p; ++b) hess(a, b) = hess(b, a);

    double gmax = 0;
    for (double g : grad) gmax = std::max(gmax, std::abs(g));
    if (gmax < kLogitGradTol) {
      converged = true;
      break;
    }

    std::vector<double> step;
    if (!linalg::cholesky_solve(hess, grad, step)) {
      // Hessian degenerate while the gradient still pushes uphill
      throw Separation("singular Hessian with non-vanishing gradient (|grad| = " +
                       std::to_string(gmax) + ")");
    }

    double scale = 1.0;
    double new_ll = -std::numeric_limits<double>::infinity();
    std::vector<double> cand(p);
    for (int h = 0; h <= kMaxHalvings; ++h) {
      for (std::size_t j = 0; j < p; ++j) cand[j] = beta[j] + scale * step[j];
      new_ll = logit_loglik(d, cand);
      if (new_ll >= ll || h == kMaxHalvings) break;
      scale *= 0.5;
    }
    double dll = new_ll - ll;
    beta = cand;
    ll = new_ll;

    for (double b : beta)
      if (std::abs(b) > kSeparationBound)
        throw Separation("coefficient escaped beyond |" + std::to_string(kSeparationBound) +
                         "|; data are (quasi-)separated");

    if (std::abs(dll) < kLogitLlTol) {
      converged = true;
      break;
    }
  }

  fit.coefficients = beta;
  fit.converged = true;
  fit.iterations = iter;

  // covariance from the observed information at the optimum
  std::vector<double> eta = linalg::matvec(d.values, beta);
  linalg::Matrix hess(p, p);
  for (std::size_t i = 0; i < n; ++i) {
    double mu = sigmoid(eta[i]);
    double w = mu * (1.0 - mu);
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = 0; b <= a; ++b) hess(a, b) += w * d.values(i, a) * d.values(i, b);
  }
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = a + 1; b < p; ++b) hess(a, b) = hess(b, a);
  linalg::Matrix cov;
  if (!linalg::spd_inverse(hess, cov))
    throw Separation("information matrix is singular at the optimum");
  fill_inference(fit, cov, kNormalQ975, special::Dist::Normal, std::nullopt);

  LogitStats& s = fit.logit_stats;
  s.log_likelihood = ll;
  if (has_intercept && p == 1) {
    s.ll_null = ll;  // the model is its own null
  } else {
    DesignMatrix null_d;
    null_d.values = linalg::Matrix(n, 1, 1.0);
    null_d.response = d.response;
    null_d.column_labels = {"Intercept"};
    std::vector<double> b0 = {std::log(ybar / (1.0 - ybar))};
    s.ll_null = logit_loglik(null_d, b0);
  }
  s.pseudo_r2_mcfadden = s.ll_null != 0 ? 1.0 - s.log_likelihood / s.ll_null : 0.0;
  if (std::abs(s.pseudo_r2_mcfadden) < 1e-12) s.pseudo_r2_mcfadden = 0.0;
  double df_model = static_cast<double>(p) - (has_intercept ? 1.0 : 0.0);
  if (df_model > 0) {
    double lr = 2.0 * (s.log_likelihood - s.ll_null);
    s.llr_pvalue = special::tail_probability(special::Dist::ChiSquare, std::max(0.0, lr), df_model);
  } else {
    s.llr_pvalue = 1.0;
  }
  s.aic = 2.0 * static_cast<double>(p) - 2.0 * ll;
  s.bic = static_cast<double>(p) * std::log(static_cast<double>(n)) - 2.0 * ll;
  return fit;
}

double predict_prob(const std::vector<double>& coefficients, const std::vector<double>& x) {
  if (coefficients.size() != x.size())
    throw DimensionMismatch("coefficient/covariate length mismatch: " +
                            std::to_string(coefficients.size()) + " vs " +
                            std::to_string(x.size()));
  double eta = 0;
  for (std::size_t i = 0; i < x.size(); ++i) eta += coefficients[i] * x[i];
  return sigmoid(eta);
}

double predict_prob(const FitResult& fit, const std::vector<double>& x) {
  return predict_prob(fit.coefficients, x);
}

double classify_accuracy(const FitResult& fit, const DesignSpec& spec,
                         const std::vector<features::FeatureRow>& rows, double threshold) {
  DesignMatrix d = build_design(rows, spec, "win_lose");
  const std::size_t n = d.values.rows();
  std::size_t hits = 0;
  std::vector<double> x(d.values.cols());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = d.values(i, j);
    bool pred = predict_prob(fit, x) > threshold;
    bool actual = d.response[i] > 0.5;
    if (pred == actual) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(n);
}

// ---- serialization ----

std::string FitResult::to_json() const {
  nlohmann::json j;
  j["family"] = family == Family::OLS ? "OLS" : "Logit";
  j["n"] = n;
  j["labels"] = labels;
  j["coefficients"] = coefficients;
  j["se"] = std_errors;
  j["stat"] = test_stats;
  j["p"] = p_values;
  nlohmann::json ci = nlohmann::json::array();
  for (const auto& [lo, hi] : conf_intervals_95) ci.push_back({lo, hi});
  j["conf_intervals_95"] = ci;
  nlohmann::json cv = nlohmann::json::array();
  for (std::size_t i = 0; i < covariance.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t k = 0; k < covariance.cols(); ++k) row.push_back(covariance(i, k));
    cv.push_back(row);
  }
  j["covariance"] = cv;
  if (family == Family::OLS) {
    j["fit_stats"] = {{"r2", ols_stats.r2},
                      {"adj_r2", ols_stats.adj_r2},
                      {"f_stat", ols_stats.f_stat},
                      {"f_pvalue", ols_stats.f_pvalue},
                      {"log_likelihood", ols_stats.log_likelihood},
                      {"aic", ols_stats.aic},
                      {"bic", ols_stats.bic}};
  } else {
    j["fit_stats"] = {{"log_likelihood", logit_stats.log_likelihood},
                      {"ll_null", logit_stats.ll_null},
                      {"pseudo_r2_mcfadden", logit_stats.pseudo_r2_mcfadden},
                      {"llr_pvalue", logit_stats.llr_pvalue},
                      {"aic", logit_stats.aic},
                      {"bic", logit_stats.bic}};
  }
  if (diagnostics) {
    j["diagnostics"] = {{"durbin_watson", diagnostics->durbin_watson},
                        {"jarque_bera", diagnostics->jarque_bera},
                        {"jb_pvalue", diagnostics->jb_pvalue},
                        {"skew", diagnostics->skew},
                        {"kurtosis", diagnostics->kurtosis},
                        {"condition_number", diagnostics->condition_number}};
  }
  j["converged"] = converged;
  j["iterations"] = iterations;
  return j.dump(2);
}

FitResult FitResult::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  FitResult f;
  f.family = j.at("family") == "OLS" ? Family::OLS : Family::Logit;
  f.n = j.at("n").get<std::size_t>();
  f.labels = j.at("labels").get<std::vector<std::string>>();
  f.coefficients = j.at("coefficients").get<std::vector<double>>();
  f.std_errors = j.at("se").get<std::vector<double>>();
  f.test_stats = j.at("stat").get<std::vector<double>>();
  f.p_values = j.at("p").get<std::vector<double>>();
  for (const auto& ci : j.at("conf_intervals_95"))
    f.conf_intervals_95.emplace_back(ci[0].get<double>(), ci[1].get<double>());
  const auto& cv = j.at("covariance");
  std::size_t p = cv.size();
  f.covariance = linalg::Matrix(p, p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t k = 0; k < p; ++k) f.covariance(i, k) = cv[i][k].get<double>();
  const auto& fs = j.at("fit_stats");
  if (f.family == Family::OLS) {
    f.ols_stats = {fs.at("r2"),      fs.at("adj_r2"),        fs.at("f_stat"), fs.at("f_pvalue"),
                   fs.at("log_likelihood"), fs.at("aic"), fs.at("bic")};
  } else {
    f.logit_stats = {fs.at("log_likelihood"), fs.at("ll_null"), fs.at("pseudo_r2_mcfadden"),
                     fs.at("llr_pvalue"),     fs.at("aic"),     fs.at("bic")};
  }
  if (j.contains("diagnostics")) {
    const auto& dg = j.at("diagnostics");
    f.diagnostics = Diagnostics{dg.at("durbin_watson"), dg.at("jarque_bera"), dg.at("jb_pvalue"),
                                dg.at("skew"),          dg.at("kurtosis"),
                                dg.at("condition_number")};
  }
  f.converged = j.at("converged").get<bool>();
  f.iterations = j.at("iterations").get<int>();
  return f;
}

std::string FitResult::render_text(const std::string& title) const {
  std::ostringstream out;
  auto line = [&] { out << std::string(78, '=') << '\n'; };
  auto row2 = [&](const std::string& a, const std::string& b) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%-28s %-20s", a.c_str(), b.c_str());
    out << buf << '\n';
  };
  char buf[256];

  if (!title.empty()) out << title << '\n';
  out << (family == Family::OLS ? "OLS Regression Results" : "Logit Regression Results") << '\n';
  line();
  row2("No. Observations:", std::to_string(n));
  row2("Df Residuals:", std::to_string(n - coefficients.size()));
  row2("Df Model:",
       std::to_string(coefficients.size() - (!labels.empty() && labels[0] == "Intercept")));
  if (family == Family::OLS) {
    std::snprintf(buf, sizeof(buf), "%.4f", ols_stats.r2);
    row2("R-squared:", buf);
    std::snprintf(buf, sizeof(buf), "%.4f", ols_stats.adj_r2);
    row2("Adj. R-squared:", buf);
    std::snprintf(buf, sizeof(buf), "%.4g", ols_stats.f_stat);
    row2("F-statistic:", buf);
    std::snprintf(buf, sizeof(buf), "%.4g", ols_stats.f_pvalue);
    row2("Prob (F-statistic):", buf);
    std::snprintf(buf, sizeof(buf), "%.4f", ols_stats.log_likelihood);
    row2("Log-Likelihood:", buf);
    std::snprintf(buf, sizeof(buf), "%.4g", ols_stats.aic);
    row2("AIC:", buf);
    std::snprintf(buf, sizeof(buf), "%.4g", ols_stats.bic);
    row2("BIC:", buf);
  } else {
    std::snprintf(buf, sizeof(buf), "%.4f", logit_stats.pseudo_r2_mcfadden);
    row2("Pseudo R-squ.:", buf);
    std::snprintf(buf, sizeof(buf), "%.4f", logit_stats.log_likelihood);
    row2("Log-Likelihood:", buf);
    std::snprintf(buf, sizeof(buf), "%.4f", logit_stats.ll_null);
    row2("LL-Null:", buf);
    std::snprintf(buf, sizeof(buf), "%.4g", logit_stats.llr_pvalue);
    row2("LLR p-value:", buf);
    row2("converged:", converged ? "True" : "False");
  }
  line();
  const char* stat_name = family == Family::OLS ? "t" : "z";
  std::snprintf(buf, sizeof(buf), "%-28s %10s %10s %10s %10s %10s %10s", "", "coef", "std err",
                stat_name, family == Family::OLS ? "P>|t|" : "P>|z|", "[0.025", "0.975]");
  out << buf << '\n';
  line();
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%-28s %10.4f %10.3f %10.3f %10.3f %10.3f %10.3f",
                  labels[i].c_str(), coefficients[i], std_errors[i], test_stats[i], p_values[i],
                  conf_intervals_95[i].first, conf_intervals_95[i].second);
    out << buf << '\n';
  }
  line();
  if (diagnostics) {
    std::snprintf(buf, sizeof(buf), "Durbin-Watson: %.3f   Jarque-Bera (JB): %.3f   Prob(JB): %.3g",
                  diagnostics->durbin_watson, diagnostics->jarque_bera, diagnostics->jb_pvalue);
    out << buf << '\n';
    std::snprintf(buf, sizeof(buf), "Skew: %.3f   Kurtosis: %.3f   Cond. No. %.3g",
                  diagnostics->skew, diagnostics->kurtosis, diagnostics->condition_number);
    out << buf << '\n';
    line();
  }
  return out.str();
}

}  // namespace ballotlens::regress
