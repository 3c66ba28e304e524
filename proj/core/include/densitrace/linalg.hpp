#pragma once

#include <cstddef>
#include <vector>

#include "densitrace/errors.hpp"

namespace densitrace {

/// Dense row-major matrix. Just enough linear algebra for the kernel
/// transform and the ridge solves; sizes here are (n-k+1) squared.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  std::vector<double> multiply(const std::vector<double>& v) const;
  std::vector<double> transpose_multiply(const std::vector<double>& v) const;

  /// A^T A (symmetric positive semidefinite for any A).
  Matrix gram() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> a_;
};

/// Solves A x = b for symmetric positive definite A by Cholesky
/// factorization. Throws SolveFailure when a pivot is not strictly positive
/// (the system is numerically singular). A is taken by value and factored
/// in place.
std::vector<double> cholesky_solve(Matrix a, std::vector<double> b);

/// Cholesky factor L (lower triangular, A = L L^T), reusable across many
/// right-hand sides. Throws SolveFailure on a nonpositive pivot.
Matrix cholesky_factor(Matrix a);
std::vector<double> cholesky_solve_factored(const Matrix& l, std::vector<double> b);

}  // namespace densitrace
