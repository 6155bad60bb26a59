#include "ndual/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace ndual {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw ShapeError("ragged matrix rows");
    std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + static_cast<std::ptrdiff_t>(i * c));
  }
  return m;
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::minor(std::size_t i, std::size_t j) const {
  Matrix out(rows_ - 1, cols_ - 1);
  for (std::size_t r = 0, rr = 0; r < rows_; ++r) {
    if (r == i) continue;
    for (std::size_t c = 0, cc = 0; c < cols_; ++c) {
      if (c == j) continue;
      out(rr, cc++) = (*this)(r, c);
    }
    ++rr;
  }
  return out;
}

Matrix Matrix::transposed() const {
  Matrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

std::vector<std::vector<double>> Matrix::to_rows() const {
  std::vector<std::vector<double>> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i].assign(row(i).begin(), row(i).end());
  return out;
}

namespace {

// Bareiss keeps every intermediate equal to a minor of the input, and each
// update multiplies two of them before an exact division. With integer
// entries and squared Hadamard bound below 2^125 all of it fits in __int128;
// the one rounding happens in the final conversion, which is odd-symmetric,
// so row swaps negate the result exactly.
bool bareiss_exact(const Matrix& m) {
  long double log2_bound = 0.0L;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    long double row_sq = 0.0L;
    for (double v : m.row(i)) {
      if (v != std::trunc(v) || std::abs(v) > 2147483647.0) return false;
      row_sq += static_cast<long double>(v) * v;
    }
    log2_bound += 0.5L * std::log2(std::max(1.0L, row_sq));
  }
  return 2.0L * log2_bound < 125.0L;
}

double det_bareiss(const Matrix& m) {
  const std::size_t n = m.rows();
  std::vector<__int128> a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = static_cast<__int128>(static_cast<long long>(m(i, j)));
  auto at = [&](std::size_t i, std::size_t j) -> __int128& { return a[i * n + j]; };
  bool negate = false;
  __int128 prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (at(k, k) == 0) {
      std::size_t swap = k + 1;
      while (swap < n && at(swap, k) == 0) ++swap;
      if (swap == n) return 0.0;
      for (std::size_t c = 0; c < n; ++c) std::swap(at(k, c), at(swap, c));
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) at(i, j) = (at(k, k) * at(i, j) - at(i, k) * at(k, j)) / prev;
    prev = at(k, k);
  }
  __int128 d = at(n - 1, n - 1);
  if (negate) d = -d;
  const bool neg = d < 0;
  const auto mag = static_cast<unsigned __int128>(neg ? -d : d);
  const double out = static_cast<double>(mag);
  return neg ? -out : out;
}

double det_lu(Matrix a) {
  const std::size_t n = a.rows();
  double result = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (a(piv, k) == 0.0) return 0.0;
    if (piv != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(piv, c));
      result = -result;
    }
    const double pivot = a(k, k);
    result *= pivot;
    for (std::size_t i = k + 1; i < n; ++i) {
      const double factor = a(i, k) / pivot;
      if (factor == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= factor * a(k, j);
    }
  }
  return result;
}

}  // namespace

double det(const Matrix& m) {
  if (!m.is_square()) {
    throw ShapeError("determinant of a " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()) + " matrix");
  }
  if (m.rows() > kMaxDetSize) {
    throw UnsupportedSizeError("determinant size " + std::to_string(m.rows()) + " exceeds 8");
  }
  const std::size_t n = m.rows();
  if (n == 0) return 1.0;
  if (n == 1) return m(0, 0);
  if (bareiss_exact(m)) return det_bareiss(m);
  return det_lu(m);
}

double cofactor(const Matrix& m, std::size_t i, std::size_t j) {
  const double minor_det = det(m.minor(i, j));
  return ((i + j) % 2 == 0) ? minor_det : -minor_det;
}

std::vector<double> solve(const Matrix& a_in, std::span<const double> b_in) {
  if (!a_in.is_square() || a_in.rows() != b_in.size()) throw ShapeError("solve: shape mismatch");
  const std::size_t n = a_in.rows();
  Matrix a = a_in;
  std::vector<double> b(b_in.begin(), b_in.end());
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (a(piv, k) == 0.0) throw DependentFamilyError("solve: singular system");
    if (piv != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(piv, c));
      std::swap(b[k], b[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double factor = a(i, k) / a(k, k);
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= factor * a(k, j);
      b[i] -= factor * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double acc = b[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= a(i, j) * x[j];
    x[i] = acc / a(i, i);
  }
  return x;
}

std::size_t numerical_rank(const Matrix& rows, double rel_tol) {
  Matrix a = rows;
  const std::size_t r = a.rows();
  const std::size_t c = a.cols();
  for (std::size_t i = 0; i < r; ++i) {
    double mx = 0.0;
    for (double v : a.row(i)) mx = std::max(mx, std::abs(v));
    if (mx > 0.0)
      for (std::size_t j = 0; j < c; ++j) a(i, j) /= mx;
  }
  std::size_t rank = 0;
  std::vector<bool> row_used(r, false);
  std::vector<bool> col_used(c, false);
  for (std::size_t step = 0; step < std::min(r, c); ++step) {
    double best = 0.0;
    std::size_t bi = 0;
    std::size_t bj = 0;
    for (std::size_t i = 0; i < r; ++i) {
      if (row_used[i]) continue;
      for (std::size_t j = 0; j < c; ++j) {
        if (col_used[j]) continue;
        if (std::abs(a(i, j)) > best) {
          best = std::abs(a(i, j));
          bi = i;
          bj = j;
        }
      }
    }
    if (best <= rel_tol) break;
    ++rank;
    row_used[bi] = true;
    col_used[bj] = true;
    for (std::size_t i = 0; i < r; ++i) {
      if (row_used[i]) continue;
      const double factor = a(i, bj) / a(bi, bj);
      for (std::size_t j = 0; j < c; ++j) a(i, j) -= factor * a(bi, j);
    }
  }
  return rank;
}

}  // namespace ndual
