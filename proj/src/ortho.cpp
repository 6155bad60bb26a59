#include "ndual/ortho.hpp"

#include <cmath>
#include <string>

#include "ndual/sip.hpp"

namespace ndual {

namespace {

constexpr double kDependentGram = 1e-12;

void check_gram(double gamma, std::span<const Vector> ys) {
  double scale = 1.0;
  for (const Vector& y : ys) {
    const double n = lp_norm(y);
    scale *= n * n;
  }
  if (!(std::abs(gamma) >= kDependentGram * scale) || scale == 0.0) {
    throw DependentFamilyError("Gram determinant " + std::to_string(gamma) +
                               " is below the dependency threshold");
  }
}

// Plain permutation expansion; the bordered oracle avoids LU on purpose.
double leibniz_det(const Matrix& m) {
  const std::size_t n = m.rows();
  double total = 0.0;
  for (const Permutation& s : all_permutations(n)) {
    double prod = permutation_sign(s);
    for (std::size_t i = 0; i < n; ++i) prod *= m(i, s(i));
    total += prod;
  }
  return total;
}

Matrix rows_of(std::span<const Vector> xs) {
  Matrix m(xs.size(), xs.front().size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t k = 0; k < xs[i].size(); ++k) m(i, k) = xs[i][k];
  return m;
}

}  // namespace

GramMatrix gram_matrix(std::span<const Vector> ys) {
  GramMatrix gm{Matrix(ys.size(), ys.size()), std::vector<Vector>(ys.begin(), ys.end())};
  if (ys.empty()) return gm;
  common_space(ys);
  for (std::size_t i = 0; i < ys.size(); ++i)
    for (std::size_t j = 0; j < ys.size(); ++j) gm.entries(i, j) = g(ys[i], ys[j]);
  return gm;
}

double gram_determinant(std::span<const Vector> ys) { return det(gram_matrix(ys).entries); }

Vector project(const Vector& x, std::span<const Vector> ys) {
  if (ys.empty()) return Vector::zero(x.space());
  common_space(ys);
  if (!(ys.front().space() == x.space())) throw DimensionError("project: x and Y live in different spaces");
  const GramMatrix gm = gram_matrix(ys);
  check_gram(det(gm.entries), ys);
  std::vector<double> rhs(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) rhs[i] = g(ys[i], x);
  const std::vector<double> c = solve(gm.entries, rhs);
  Vector out = Vector::zero(x.space());
  for (std::size_t j = 0; j < ys.size(); ++j) out = out + c[j] * ys[j];
  return out;
}

Vector bordered_determinant_project(const Vector& x, std::span<const Vector> ys) {
  if (ys.size() > 3) throw UnsupportedSizeError("bordered determinant oracle supports |Y| <= 3");
  if (ys.empty()) return Vector::zero(x.space());
  common_space(ys);
  if (!(ys.front().space() == x.space())) throw DimensionError("project: x and Y live in different spaces");
  const std::size_t n = ys.size();

  // Numeric rows 1..n of the bordered matrix: [g(y_i, x), g(y_i, y_1), ...].
  Matrix lower(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    lower(i, 0) = g(ys[i], x);
    for (std::size_t j = 0; j < n; ++j) lower(i, j + 1) = g(ys[i], ys[j]);
  }
  Matrix gram(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) gram(i, j) = lower(i, j + 1);
  const double gamma = leibniz_det(gram);
  check_gram(gamma, ys);

  // Expansion along row 0 = (0, y_1, ..., y_n): entry (0, j) has sign (-1)^j
  // and its minor drops column j from the numeric rows.
  Vector acc = Vector::zero(x.space());
  for (std::size_t j = 1; j <= n; ++j) {
    Matrix minor(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t c = 0, cc = 0; c <= n; ++c) {
        if (c == j) continue;
        minor(i, cc++) = lower(i, c);
      }
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    acc = acc + (sign * leibniz_det(minor)) * ys[j - 1];
  }
  return (-1.0 / gamma) * acc;
}

bool is_independent(std::span<const Vector> xs, double tol) {
  if (xs.empty()) return true;
  if (xs.size() > xs.front().size()) return false;
  return numerical_rank(rows_of(xs), tol) == xs.size();
}

OrthogonalizationResult left_g_orthogonalize(std::span<const Vector> xs) {
  if (xs.empty()) throw ShapeError("left_g_orthogonalize: empty tuple");
  common_space(xs);
  if (!is_independent(xs)) throw DependentFamilyError("left_g_orthogonalize: tuple is linearly dependent");

  OrthogonalizationResult r;
  r.originals.assign(xs.begin(), xs.end());
  r.orthogonalized.push_back(xs.front());
  r.coefficients.emplace_back();
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const std::span<const Vector> prev(r.orthogonalized);
    const GramMatrix gm = gram_matrix(prev);
    const double gamma = det(gm.entries);
    check_gram(gamma, prev);
    std::vector<double> rhs(i);
    for (std::size_t k = 0; k < i; ++k) rhs[k] = g(prev[k], xs[i]);
    std::vector<double> c = solve(gm.entries, rhs);
    Vector next = xs[i];
    for (std::size_t k = 0; k < i; ++k) next = next - c[k] * prev[k];
    r.step_gram_dets.push_back(gamma);
    r.coefficients.push_back(std::move(c));
    r.orthogonalized.push_back(std::move(next));
  }
  return r;
}

}  // namespace ndual
