#include "ballotlens/special.hpp"

#include <cmath>
#include <limits>

#include "ballotlens/errors.hpp"

namespace ballotlens::special {

namespace {

constexpr int kMaxIter = 500;
constexpr double kEps = 1e-16;

// Lower incomplete gamma by series expansion, valid for x < a+1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper incomplete gamma by modified Lentz continued fraction, x >= a+1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for the incomplete beta (Lentz).
double incbeta_cf(double a, double b, double x) {
  const double tiny = 1e-300;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double gamma_p(double a, double x) {
  if (a <= 0.0) throw InvalidDf("gamma_p: a must be > 0");
  if (x < 0.0) throw InvalidDf("gamma_p: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
  if (a <= 0.0) throw InvalidDf("gamma_q: a must be > 0");
  if (x < 0.0) throw InvalidDf("gamma_q: x must be >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double incbeta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0) throw InvalidDf("incbeta: a,b must be > 0");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  double front = std::exp(a * std::log(x) + b * std::log1p(-x) - lbeta);
  // symmetry pivot keeps the continued fraction in its convergent region
  if (x < (a + 1.0) / (a + b + 2.0)) return front * incbeta_cf(a, b, x) / a;
  return 1.0 - front * incbeta_cf(b, a, 1.0 - x) / b;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_two_sided(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

double tail_probability(Dist dist, double stat, std::optional<double> df1,
                        std::optional<double> df2) {
  switch (dist) {
    case Dist::Normal:
      return normal_two_sided(stat);
    case Dist::StudentT: {
      if (!df1 || *df1 <= 0.0) throw InvalidDf("StudentT requires df > 0");
      double v = *df1;
      double x = v / (v + stat * stat);
      return incbeta(v / 2.0, 0.5, x);
    }
    case Dist::ChiSquare: {
      if (!df1 || *df1 <= 0.0) throw InvalidDf("ChiSquare requires df > 0");
      if (stat <= 0.0) return 1.0;
      return gamma_q(*df1 / 2.0, stat / 2.0);
    }
    case Dist::F: {
      if (!df1 || *df1 <= 0.0 || !df2 || *df2 <= 0.0)
        throw InvalidDf("F requires two positive df");
      if (stat <= 0.0) return 1.0;
      double d1 = *df1, d2 = *df2;
      return incbeta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * stat));
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double student_t_quantile(double two_sided_p, double df) {
  if (two_sided_p <= 0.0 || two_sided_p >= 1.0) throw InvalidDf("quantile p must be in (0,1)");
  double lo = 0.0, hi = 1.0;
  while (tail_probability(Dist::StudentT, hi, df) > two_sided_p) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (tail_probability(Dist::StudentT, mid, df) > two_sided_p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace ballotlens::special
