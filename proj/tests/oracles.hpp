#pragma once

// Independent reference computations for the unit tests. Nothing here calls
// into the estimators it is used to check.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ndual/functionals.hpp"
#include "ndual/spaces.hpp"

namespace oracle {

using ndual::Vector;

/// Leibniz expansion over all permutations generated by std::next_permutation.
inline double leibniz_det(const std::vector<std::vector<double>>& m) {
  const std::size_t n = m.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double total = 0.0;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    double term = inversions % 2 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) term *= m[i][perm[i]];
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

inline double pnorm(const std::vector<double>& v, double p) {
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x), p);
  return std::pow(s, 1.0 / p);
}

/// ((1/n!) sum over all index tuples J in {0..d-1}^n of |det(x_i[j_k])|^p)^(1/p).
inline double lp_n_norm_all_tuples(const std::vector<Vector>& xs) {
  const std::size_t n = xs.size();
  const std::size_t d = xs.front().size();
  const double p = xs.front().space().p();
  std::vector<std::size_t> idx(n, 0);
  double sum = 0.0;
  for (;;) {
    std::vector<std::vector<double>> m(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) m[i][k] = xs[i][idx[k]];
    sum += std::pow(std::abs(leibniz_det(m)), p);
    std::size_t pos = 0;
    while (pos < n && ++idx[pos] == d) idx[pos++] = 0;
    if (pos == n) break;
  }
  double nfact = 1.0;
  for (std::size_t k = 2; k <= n; ++k) nfact *= static_cast<double>(k);
  return std::pow(sum / nfact, 1.0 / p);
}

/// Gähler n-norm at p = 1: |det[f_j(x_i)]| is multilinear in the f_j, so its
/// maximum over the l^inf unit box is attained at sign vertices.
inline double gahler_p1_vertices(const std::vector<Vector>& xs) {
  const std::size_t n = xs.size();
  const std::size_t d = xs.front().size();
  const std::size_t verts = std::size_t{1} << d;
  std::vector<std::size_t> pick(n, 0);
  double best = 0.0;
  for (;;) {
    std::vector<std::vector<double>> m(n, std::vector<double>(n));
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < d; ++k) s += ((pick[j] >> k) & 1 ? -1.0 : 1.0) * xs[i][k];
        m[i][j] = s;
      }
    }
    best = std::max(best, std::abs(leibniz_det(m)));
    std::size_t pos = 0;
    while (pos < n && ++pick[pos] == verts) pick[pos++] = 0;
    if (pos == n) break;
  }
  return best;
}

/// sqrt(det of the Euclidean Gram matrix).
inline double euclidean_volume(const std::vector<Vector>& xs) {
  const auto n = static_cast<Eigen::Index>(xs.size());
  const auto d = static_cast<Eigen::Index>(xs.front().size());
  Eigen::MatrixXd a(d, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < d; ++k) a(k, i) = xs[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
  return std::sqrt(std::max(0.0, (a.transpose() * a).determinant()));
}

/// Largest singular value of the d x d coefficient matrix of an order-2 tensor.
inline double top_singular_value(const ndual::MultiFunctional& f) {
  const auto d = static_cast<Eigen::Index>(f.space().d);
  Eigen::MatrixXd c(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) c(i, j) = f.coeffs()[static_cast<std::size_t>(i * d + j)];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(c);
  return svd.singularValues()(0);
}

/// Orthogonal projection of x onto span(ys) by least squares.
inline std::vector<double> least_squares_projection(const Vector& x, const std::vector<Vector>& ys) {
  const auto d = static_cast<Eigen::Index>(x.size());
  const auto m = static_cast<Eigen::Index>(ys.size());
  Eigen::MatrixXd a(d, m);
  Eigen::VectorXd b(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    b(k) = x[static_cast<std::size_t>(k)];
    for (Eigen::Index j = 0; j < m; ++j) a(k, j) = ys[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
  const Eigen::VectorXd proj = a * c;
  return {proj.data(), proj.data() + d};
}

/// sup |f(x, y)| / (||x|| ||y||) for an order-2 tensor on R^2, sampled on a
/// grid of unit-sphere points.
inline double grid_norm_n1_d2(const ndual::MultiFunctional& f, int steps) {
  const double p = f.space().p();
  std::vector<std::vector<double>> pts;
  for (int s = 0; s < steps; ++s) {
    const double t = 2.0 * M_PI * s / steps;
    std::vector<double> v{std::cos(t), std::sin(t)};
    const double nv = pnorm(v, p);
    pts.push_back({v[0] / nv, v[1] / nv});
  }
  double best = 0.0;
  for (const auto& x : pts)
    for (const auto& y : pts) {
      double val = 0.0;
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) val += f.coeffs()[i * 2 + j] * x[i] * y[j];
      best = std::max(best, std::abs(val));
    }
  return best;
}

/// Symmetric difference quotient of t -> ||x + t y||_p, scaled by ||x||.
inline double g_difference_quotient(const Vector& x, const Vector& y, double h) {
  const double p = x.space().p();
  std::vector<double> plus(x.size()), minus(x.size()), base(x.coords().begin(), x.coords().end());
  for (std::size_t k = 0; k < x.size(); ++k) {
    plus[k] = x[k] + h * y[k];
    minus[k] = x[k] - h * y[k];
  }
  return pnorm(base, p) * (pnorm(plus, p) - pnorm(minus, p)) / (2.0 * h);
}

}  // namespace oracle
