#pragma once

// Small dense matrices (n <= 8) for determinants, cofactors and solves.

#include <cstddef>
#include <span>
#include <vector>

#include "ndual/errors.hpp"

namespace ndual {

inline constexpr std::size_t kMaxDetSize = 8;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  /// Row-major nested initializer; throws ShapeError on ragged rows.
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);
  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  /// Copy without row i and column j.
  Matrix minor(std::size_t i, std::size_t j) const;
  Matrix transposed() const;
  std::vector<std::vector<double>> to_rows() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Determinant of a square matrix of size <= 8 (0x0 gives 1).
///
/// Integer-valued matrices small enough that every Bareiss intermediate fits
/// in the 53-bit mantissa are evaluated by fraction-free elimination and are
/// exact. Everything else goes through LU with partial pivoting.
/// Throws ShapeError for non-square input, UnsupportedSizeError above 8.
double det(const Matrix& m);

/// (-1)^(i+j) det(minor(i, j)).
double cofactor(const Matrix& m, std::size_t i, std::size_t j);

/// Solves A c = b by LU with partial pivoting. Throws DependentFamilyError
/// when a pivot is exactly zero.
std::vector<double> solve(const Matrix& a, std::span<const double> b);

/// Rank of the row set by Gaussian elimination with complete pivoting; each
/// row is scaled to unit max-norm and pivots below `rel_tol` count as zero.
std::size_t numerical_rank(const Matrix& rows, double rel_tol);

}  // namespace ndual
