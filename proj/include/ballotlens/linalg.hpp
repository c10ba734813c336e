#pragma once

#include <cstddef>
#include <vector>

namespace ballotlens::linalg {

// Row-major dense matrix. Sized for n up to a few thousand rows and a
// handful of columns; no attempt at BLAS-level performance.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<double>& data() const { return data_; }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Thin SVD A = U diag(s) V^T via one-sided Jacobi. Singular values are
// sorted descending. Intended for tall skinny matrices (p small).
struct Svd {
  Matrix u;                       // n x p
  std::vector<double> singular;   // p, descending
  Matrix vt;                      // p x p
};

Svd jacobi_svd(const Matrix& a);

// Minimum-norm least squares via SVD with relative cutoff on singular
// values. Also returns (A^T A)^+ = V diag(1/s^2) V^T for covariance use.
struct LstsqResult {
  std::vector<double> beta;
  Matrix xtx_inverse;            // p x p pseudo-inverse of A^T A
  std::vector<double> singular;
  std::size_t rank = 0;
};

LstsqResult svd_lstsq(const Matrix& a, const std::vector<double>& y, double rcond = 1e-10);

// Solves S x = b for symmetric positive definite S in place.
// Returns false when S is not (numerically) positive definite.
bool cholesky_solve(Matrix s, std::vector<double> b, std::vector<double>& x);

// Inverse of a symmetric positive definite matrix; false on failure.
bool spd_inverse(const Matrix& s, Matrix& inv);

std::vector<double> matvec(const Matrix& a, const std::vector<double>& x);
std::vector<double> matvec_t(const Matrix& a, const std::vector<double>& x);  // A^T x

}  // namespace ballotlens::linalg
