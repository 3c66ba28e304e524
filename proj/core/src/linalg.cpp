#include "densitrace/linalg.hpp"

#include <cmath>

namespace densitrace {

std::vector<double> Matrix::multiply(const std::vector<double>& v) const {
  if (v.size() != cols_) throw ShapeMismatch("matrix-vector size mismatch");
  std::vector<double> out(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    double sum = 0.0;
    const double* row = a_.data() + r * cols_;
    for (std::size_t c = 0; c < cols_; ++c) sum += row[c] * v[c];
    out[r] = sum;
  }
  return out;
}

std::vector<double> Matrix::transpose_multiply(const std::vector<double>& v) const {
  if (v.size() != rows_) throw ShapeMismatch("matrix-vector size mismatch");
  std::vector<double> out(cols_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    const double* row = a_.data() + r * cols_;
    const double vr = v[r];
    for (std::size_t c = 0; c < cols_; ++c) out[c] += row[c] * vr;
  }
  return out;
}

Matrix Matrix::gram() const {
  Matrix g(cols_, cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    const double* row = a_.data() + r * cols_;
    for (std::size_t i = 0; i < cols_; ++i) {
      if (row[i] == 0.0) continue;
      const double ri = row[i];
      for (std::size_t j = i; j < cols_; ++j) {
        g.at(i, j) += ri * row[j];
      }
    }
  }
  for (std::size_t i = 0; i < cols_; ++i) {
    for (std::size_t j = 0; j < i; ++j) g.at(i, j) = g.at(j, i);
  }
  return g;
}

Matrix cholesky_factor(Matrix a) {
  if (a.rows() != a.cols()) throw ShapeMismatch("cholesky needs a square matrix");
  const std::size_t n = a.rows();
  for (std::size_t j = 0; j < n; ++j) {
    double d = a.at(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= a.at(j, k) * a.at(j, k);
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw SolveFailure("nonpositive pivot in Cholesky factorization");
    }
    const double ljj = std::sqrt(d);
    a.at(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a.at(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= a.at(i, k) * a.at(j, k);
      a.at(i, j) = s / ljj;
    }
    for (std::size_t k = j + 1; k < n; ++k) a.at(j, k) = 0.0;
  }
  return a;
}

std::vector<double> cholesky_solve_factored(const Matrix& l, std::vector<double> b) {
  const std::size_t n = l.rows();
  if (b.size() != n) throw ShapeMismatch("rhs size mismatch");
  // forward substitution L y = b
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l.at(i, k) * b[k];
    b[i] = s / l.at(i, i);
  }
  // back substitution L^T x = y
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= l.at(k, ii) * b[k];
    b[ii] = s / l.at(ii, ii);
  }
  return b;
}

std::vector<double> cholesky_solve(Matrix a, std::vector<double> b) {
  return cholesky_solve_factored(cholesky_factor(std::move(a)), std::move(b));
}

}  // namespace densitrace
