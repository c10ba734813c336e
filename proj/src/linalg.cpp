#include "ballotlens/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ballotlens::linalg {

// One-sided Jacobi: rotate column pairs of a working copy of A until all
// pairs are orthogonal. Columns end up as U*s; V accumulates rotations.
Svd jacobi_svd(const Matrix& a) {
  const std::size_t n = a.rows(), p = a.cols();
  Matrix w = a;
  Matrix v(p, p);
  for (std::size_t i = 0; i < p; ++i) v(i, i) = 1.0;

  const double eps = 1e-15;
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool converged = true;
    for (std::size_t j = 0; j + 1 < p; ++j) {
      for (std::size_t k = j + 1; k < p; ++k) {
        double alpha = 0, beta = 0, gamma = 0;
        for (std::size_t i = 0; i < n; ++i) {
          alpha += w(i, j) * w(i, j);
          beta += w(i, k) * w(i, k);
          gamma += w(i, j) * w(i, k);
        }
        if (std::abs(gamma) <= eps * std::sqrt(alpha * beta)) continue;
        converged = false;
        double zeta = (beta - alpha) / (2.0 * gamma);
        double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = c * t;
        for (std::size_t i = 0; i < n; ++i) {
          double wj = w(i, j), wk = w(i, k);
          w(i, j) = c * wj - s * wk;
          w(i, k) = s * wj + c * wk;
        }
        for (std::size_t i = 0; i < p; ++i) {
          double vj = v(i, j), vk = v(i, k);
          v(i, j) = c * vj - s * vk;
          v(i, k) = s * vj + c * vk;
        }
      }
    }
    if (converged) break;
  }

  Svd out;
  out.singular.resize(p);
  std::vector<std::size_t> order(p);
  std::vector<double> norms(p);
  for (std::size_t j = 0; j < p; ++j) {
    double s2 = 0;
    for (std::size_t i = 0; i < n; ++i) s2 += w(i, j) * w(i, j);
    norms[j] = std::sqrt(s2);
  }
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

  out.u = Matrix(n, p);
  out.vt = Matrix(p, p);
  for (std::size_t jj = 0; jj < p; ++jj) {
    std::size_t j = order[jj];
    double s = norms[j];
    out.singular[jj] = s;
    double inv = s > 0 ? 1.0 / s : 0.0;
    for (std::size_t i = 0; i < n; ++i) out.u(i, jj) = w(i, j) * inv;
    for (std::size_t i = 0; i < p; ++i) out.vt(jj, i) = v(i, j);
  }
  return out;
}

LstsqResult svd_lstsq(const Matrix& a, const std::vector<double>& y, double rcond) {
  const std::size_t n = a.rows(), p = a.cols();
  Svd svd = jacobi_svd(a);
  const double cutoff = svd.singular.empty() ? 0.0 : rcond * svd.singular[0];

  LstsqResult r;
  r.singular = svd.singular;
  r.beta.assign(p, 0.0);
  r.xtx_inverse = Matrix(p, p);
  for (std::size_t k = 0; k < p; ++k) {
    double s = svd.singular[k];
    if (s <= cutoff) continue;
    ++r.rank;
    double uty = 0;
    for (std::size_t i = 0; i < n; ++i) uty += svd.u(i, k) * y[i];
    double coef = uty / s;
    for (std::size_t j = 0; j < p; ++j) r.beta[j] += svd.vt(k, j) * coef;
    double inv2 = 1.0 / (s * s);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) r.xtx_inverse(i, j) += svd.vt(k, i) * svd.vt(k, j) * inv2;
  }
  return r;
}

bool cholesky_solve(Matrix s, std::vector<double> b, std::vector<double>& x) {
  const std::size_t p = s.rows();
  // in-place lower Cholesky
  for (std::size_t j = 0; j < p; ++j) {
    double d = s(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= s(j, k) * s(j, k);
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    d = std::sqrt(d);
    s(j, j) = d;
    for (std::size_t i = j + 1; i < p; ++i) {
      double v = s(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= s(i, k) * s(j, k);
      s(i, j) = v / d;
    }
  }
  // forward then backward substitution
  for (std::size_t i = 0; i < p; ++i) {
    double v = b[i];
    for (std::size_t k = 0; k < i; ++k) v -= s(i, k) * b[k];
    b[i] = v / s(i, i);
  }
  for (std::size_t ii = p; ii-- > 0;) {
    double v = b[ii];
    for (std::size_t k = ii + 1; k < p; ++k) v -= s(k, ii) * b[k];
    b[ii] = v / s(ii, ii);
  }
  x = std::move(b);
  return true;
}

bool spd_inverse(const Matrix& s, Matrix& inv) {
  const std::size_t p = s.rows();
  inv = Matrix(p, p);
  std::vector<double> e(p, 0.0), col;
  for (std::size_t j = 0; j < p; ++j) {
    std::fill(e.begin(), e.end(), 0.0);
    e[j] = 1.0;
    if (!cholesky_solve(s, e, col)) return false;
    for (std::size_t i = 0; i < p; ++i) inv(i, j) = col[i];
  }
  // symmetrize against roundoff
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j) {
      double m = 0.5 * (inv(i, j) + inv(j, i));
      inv(i, j) = inv(j, i) = m;
    }
  return true;
}

std::vector<double> matvec(const Matrix& a, const std::vector<double>& x) {
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

std::vector<double> matvec_t(const Matrix& a, const std::vector<double>& x) {
  std::vector<double> y(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[j] += a(i, j) * x[i];
  return y;
}

}  // namespace ballotlens::linalg
