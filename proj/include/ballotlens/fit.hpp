#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ballotlens/design.hpp"
#include "ballotlens/features.hpp"
#include "ballotlens/linalg.hpp"

namespace ballotlens::regress {

enum class Family { OLS, Logit };

struct OlsStats {
  double r2 = 0;
  double adj_r2 = 0;
  double f_stat = 0;
  double f_pvalue = 1;
  double log_likelihood = 0;
  double aic = 0;
  double bic = 0;
};

struct LogitStats {
  double log_likelihood = 0;
  double ll_null = 0;
  double pseudo_r2_mcfadden = 0;
  double llr_pvalue = 1;
  double aic = 0;
  double bic = 0;
};

struct Diagnostics {
  double durbin_watson = 0;
  double jarque_bera = 0;
  double jb_pvalue = 1;
  double skew = 0;
  double kurtosis = 0;
  double condition_number = 0;
};

struct FitResult {
  Family family = Family::OLS;
  std::size_t n = 0;
  std::vector<std::string> labels;
  std::vector<double> coefficients;
  linalg::Matrix covariance;
  std::vector<double> std_errors;
  std::vector<double> test_stats;   // t for OLS, z for Logit
  std::vector<double> p_values;
  std::vector<std::pair<double, double>> conf_intervals_95;
  OlsStats ols_stats;               // valid when family == OLS
  LogitStats logit_stats;           // valid when family == Logit
  std::optional<Diagnostics> diagnostics;  // OLS only
  bool converged = true;
  int iterations = 0;

  std::string to_json() const;
  static FitResult from_json(const std::string& text);
  std::string render_text(const std::string& title = "") const;
};

// Least squares by singular value decomposition. Throws RankDeficient
// (naming the offending columns) below a relative singular-value
// threshold of 1e-10.
FitResult ols_fit(const DesignMatrix& d);

// Bernoulli MLE by Newton-Raphson with step halving, started at beta = 0.
// Throws Separation when |beta| exceeds 30 or the Hessian degenerates
// while the likelihood is still improving; NotConverged after 100
// iterations.
FitResult logit_fit(const DesignMatrix& d);

// P = 1 / (1 + exp(-beta . x)); x includes the intercept slot.
double predict_prob(const std::vector<double>& coefficients, const std::vector<double>& x);
double predict_prob(const FitResult& fit, const std::vector<double>& x);

// Fraction of rows whose thresholded probability matches win_lose.
double classify_accuracy(const FitResult& fit, const DesignSpec& spec,
                         const std::vector<features::FeatureRow>& rows, double threshold = 0.5);

// Durbin-Watson, Jarque-Bera, skew/kurtosis, design condition number.
// Throws DegenerateResiduals on an all-zero residual vector.
Diagnostics residual_diagnostics(const DesignMatrix& d, const FitResult& fit);

// Log-likelihood and analytic gradient of the logit model, exposed for
// the finite-difference checks in the test suite.
double logit_loglik(const DesignMatrix& d, const std::vector<double>& beta);
std::vector<double> logit_gradient(const DesignMatrix& d, const std::vector<double>& beta);

}  // namespace ballotlens::regress
