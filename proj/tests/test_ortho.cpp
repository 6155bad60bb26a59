#include <cmath>

#include "doctest.h"
#include "ndual/ortho.hpp"
#include "ndual/sip.hpp"
#include "oracles.hpp"

using namespace ndual;
using doctest::Approx;

namespace {

Vector v2(double p, double a, double b) { return Vector(SpaceSpec(2, p), {a, b}); }

void check_close(const Vector& a, const Vector& b, double tol) {
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - b[k]) <= tol);
}

}  // namespace

TEST_CASE("Gram matrix examples") {
  const std::vector<Vector> e{v2(2, 1, 0), v2(2, 0, 1)};
  CHECK(gram_matrix(e).entries == Matrix::identity(2));
  CHECK(gram_determinant(e) == 1.0);

  const std::vector<Vector> h{v2(2, 1, 1), v2(2, 1, -1)};
  CHECK(gram_matrix(h).entries == Matrix::from_rows({{2, 0}, {0, 2}}));
  CHECK(gram_determinant(h) == Approx(4.0).epsilon(1e-15));

  const std::vector<Vector> q{v2(3, 1, 1), v2(3, 1, 0)};
  const Matrix g3 = gram_matrix(q).entries;
  CHECK(g3(0, 0) == Approx(std::pow(2.0, 2.0 / 3.0)).epsilon(1e-14));
  CHECK(g3(0, 1) == Approx(std::pow(2.0, -1.0 / 3.0)).epsilon(1e-14));
  CHECK(g3(1, 0) == Approx(1.0).epsilon(1e-14));
  CHECK(g3(1, 1) == Approx(1.0).epsilon(1e-14));

  for (double p : {1.0, 1.5, 3.0}) {
    const std::vector<Vector> dep{v2(p, 1, 0), v2(p, 1, 0)};
    CHECK(gram_determinant(dep) == 0.0);
  }
  const std::vector<Vector> mixed{v2(2, 1, 0), v2(3, 0, 1)};
  CHECK_THROWS_AS(gram_matrix(mixed), DimensionError);
}

TEST_CASE("Gram diagonal is the squared norm") {
  for (double p : {1.0, 1.5, 3.0}) {
    const auto ys = random_tuple(SpaceSpec(4, p), 3, 17);
    const Matrix gm = gram_matrix(ys).entries;
    for (std::size_t i = 0; i < 3; ++i) CHECK(gm(i, i) == Approx(std::pow(lp_norm(ys[i]), 2)).epsilon(1e-10));
  }
}

TEST_CASE("projection examples") {
  const std::vector<Vector> y2{v2(2, 1, 0)};
  check_close(project(v2(2, 1, 1), y2), v2(2, 1, 0), 1e-15);
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    const std::vector<Vector> y{v2(p, 1, 0)};
    check_close(project(v2(p, 2, 0), y), v2(p, 2, 0), 1e-15);
  }
  const std::vector<Vector> y3{v2(3, 1, 1)};
  check_close(project(v2(3, 0, 1), y3), v2(3, 0.5, 0.5), 1e-14);

  const std::vector<Vector> none;
  CHECK(project(v2(3, 4, 5), none).is_zero());
  const std::vector<Vector> dep{v2(2, 1, 1), v2(2, 2, 2)};
  CHECK_THROWS_AS(project(v2(2, 0, 1), dep), DependentFamilyError);
}

TEST_CASE("bordered determinant reproduces the projection examples") {
  const std::vector<Vector> y2{v2(2, 1, 0)};
  check_close(bordered_determinant_project(v2(2, 1, 1), y2), v2(2, 1, 0), 1e-15);
  const std::vector<Vector> y1{v2(1.5, 1, 0)};
  check_close(bordered_determinant_project(v2(1.5, 2, 0), y1), v2(1.5, 2, 0), 1e-15);
  const std::vector<Vector> y3{v2(3, 1, 1)};
  check_close(bordered_determinant_project(v2(3, 0, 1), y3), v2(3, 0.5, 0.5), 1e-14);

  // Singleton: (g(y, x) / g(y, y)) y.
  const Vector y = v2(3, 2, -1);
  const Vector x = v2(3, 0.5, 4);
  const std::vector<Vector> ys{y};
  check_close(bordered_determinant_project(x, ys), (g(y, x) / g(y, y)) * y, 1e-14);

  const auto four = random_tuple(SpaceSpec(5, 2.0), 4, 3);
  CHECK(bordered_determinant_project(v2(2, 1, 1), std::vector<Vector>{}).is_zero());
  CHECK_THROWS_AS(bordered_determinant_project(random_vector(SpaceSpec(5, 2.0), 1), four), UnsupportedSizeError);
}

TEST_CASE("Euclidean projection matches least squares") {
  for (std::uint64_t t = 0; t < 50; ++t) {
    const SpaceSpec s(3, 2.0);
    const auto ys = random_tuple(s, 2, derive_seed(21, {t}));
    const Vector x = random_vector(s, derive_seed(22, {t}));
    const auto ls = oracle::least_squares_projection(x, ys);
    check_close(project(x, ys), Vector(s, ls), 1e-10);
    check_close(bordered_determinant_project(x, ys), Vector(s, ls), 1e-10);
  }
}

TEST_CASE("projection properties on random families") {
  for (double p : {1.5, 2.0, 3.0, 6.0}) {
    for (std::uint64_t t = 0; t < 100; ++t) {
      const SpaceSpec s(4, p);
      const std::size_t m = 1 + t % 3;
      const auto ys = random_tuple(s, m, derive_seed(23, {t}));
      const Vector x = random_vector(s, derive_seed(24, {t}));
      const Vector xy = project(x, ys);
      // g(y_i, x - x_Y) = 0.
      for (const Vector& y : ys) CHECK(std::abs(g(y, x - xy)) <= 1e-8 * (1 + lp_norm(y) * lp_norm(x)));
      // Idempotent.
      check_close(project(xy, ys), xy, 1e-9 * std::max(1.0, lp_norm(xy)));
      // Oracle equivalence.
      const Vector b = bordered_determinant_project(x, ys);
      double scale = 1.0;
      for (double c : xy.coords()) scale = std::max(scale, std::abs(c));
      check_close(b, xy, 1e-10 * scale);
    }
  }
}

TEST_CASE("left g-orthogonalization examples") {
  const std::vector<Vector> e{v2(2, 1, 0), v2(2, 1, 1)};
  const auto r = left_g_orthogonalize(e);
  check_close(r.orthogonalized[0], v2(2, 1, 0), 0.0);
  check_close(r.orthogonalized[1], v2(2, 0, 1), 1e-15);

  for (double p : {1.0, 1.5, 3.0}) {
    const std::vector<Vector> basis{v2(p, 1, 0), v2(p, 0, 1)};
    const auto rb = left_g_orthogonalize(basis);
    CHECK(rb.orthogonalized == basis);
  }

  const std::vector<Vector> q{v2(3, 1, 1), v2(3, 0, 1)};
  const auto r3 = left_g_orthogonalize(q);
  check_close(r3.orthogonalized[1], v2(3, -0.5, 0.5), 1e-14);
  REQUIRE(r3.coefficients.size() == 2);
  CHECK(r3.coefficients[0].empty());
  CHECK(r3.coefficients[1][0] == Approx(0.5).epsilon(1e-14));

  const std::vector<Vector> dep{v2(2, 1, 2), v2(2, 2, 4)};
  CHECK_THROWS_AS(left_g_orthogonalize(dep), DependentFamilyError);
  CHECK_THROWS_AS(left_g_orthogonalize(std::vector<Vector>{}), ShapeError);
}

TEST_CASE("left g-orthogonality and span on random tuples") {
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    for (std::uint64_t t = 0; t < 100; ++t) {
      const std::size_t d = 2 + t % 4;
      const std::size_t n = 1 + t % d;
      const SpaceSpec s(d, p);
      const auto xs = random_tuple(s, n, derive_seed(25, {t}));
      const auto r = left_g_orthogonalize(xs);
      const auto& o = r.orthogonalized;
      CHECK(o[0] == xs[0]);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j)
          CHECK(std::abs(g(o[i], o[j])) <= 1e-8 * (1 + lp_norm(o[i]) * lp_norm(o[j])));
        // x_i° - x_i lies in span(x_1..x_{i-1}): least-squares residual.
        if (i > 0) {
          const std::vector<Vector> prev(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(i));
          const Vector diff = o[i] - xs[i];
          const auto fit = oracle::least_squares_projection(diff, prev);
          double res = 0.0;
          for (std::size_t k = 0; k < d; ++k) res = std::max(res, std::abs(fit[k] - diff[k]));
          CHECK(res <= 1e-9 * std::max(1.0, lp_norm(diff)));
        }
      }
    }
  }
}

TEST_CASE("Euclidean orthogonalization is classical Gram-Schmidt and preserves volume") {
  for (std::uint64_t t = 0; t < 100; ++t) {
    const std::size_t d = 2 + t % 4;
    const std::size_t n = 1 + t % d;
    const SpaceSpec s(d, 2.0);
    const auto xs = random_tuple(s, n, derive_seed(26, {t}));
    const auto o = left_g_orthogonalize(xs).orthogonalized;
    std::vector<Vector> gs;
    for (const Vector& x : xs) {
      Vector v = x;
      for (const Vector& u : gs) {
        const auto c = oracle::least_squares_projection(x, {u});
        v = v - Vector(s, c);
      }
      gs.push_back(v);
    }
    double prod = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      check_close(o[i], gs[i], 1e-10 * std::max(1.0, lp_norm(gs[i])));
      prod *= lp_norm(o[i]);
    }
    CHECK(prod == Approx(oracle::euclidean_volume(xs)).epsilon(1e-9));
  }
}

TEST_CASE("independence test") {
  const SpaceSpec s(3, 2.0);
  CHECK(is_independent(random_tuple(s, 3, 1)));
  const std::vector<Vector> near{Vector(s, {1, 2, 3}), Vector(s, {2, 4, 6 + 1e-13})};
  CHECK_FALSE(is_independent(near));
}
