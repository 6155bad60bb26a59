#include <random>

#include "doctest.h"
#include "ndual/linalg.hpp"

using namespace ndual;
using doctest::Approx;

TEST_CASE("determinant examples") {
  CHECK(det(Matrix::identity(2)) == 1.0);
  CHECK(det(Matrix::from_rows({{1, 1}, {1, 1}})) == 0.0);
  CHECK(det(Matrix::from_rows({{1, 2}, {3, 4}})) == -2.0);
  CHECK(det(Matrix(0, 0)) == 1.0);
  CHECK(det(Matrix::from_rows({{2, 0, 1}, {1, 3, 2}, {1, 1, 2}})) == 6.0);
}

TEST_CASE("determinant errors") {
  CHECK_THROWS_AS(det(Matrix(2, 3)), ShapeError);
  CHECK_THROWS_AS(det(Matrix::identity(9)), UnsupportedSizeError);
  CHECK_THROWS_AS(Matrix::from_rows({{1, 2}, {3}}), ShapeError);
}

TEST_CASE("row swaps negate integer determinants exactly") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> entry(-9, 9);
  for (std::size_t n = 2; n <= 8; ++n) {
    for (int t = 0; t < 50; ++t) {
      Matrix m(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = entry(rng);
      Matrix swapped = m;
      const std::size_t a = static_cast<std::size_t>(t) % n;
      const std::size_t b = (a + 1 + static_cast<std::size_t>(t) / n % (n - 1)) % n;
      for (std::size_t j = 0; j < n; ++j) std::swap(swapped(a, j), swapped(b, j));
      CHECK(det(swapped) == -det(m));
      CHECK(det(m) == std::round(det(m)));
    }
  }
}

TEST_CASE("determinant of a real matrix matches cofactor expansion") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  for (int t = 0; t < 100; ++t) {
    Matrix m(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) m(i, j) = normal(rng);
    double expansion = 0.0;
    for (std::size_t j = 0; j < 4; ++j) expansion += m(0, j) * cofactor(m, 0, j);
    CHECK(det(m) == Approx(expansion).epsilon(1e-12));
  }
}

TEST_CASE("solve and rank") {
  const Matrix a = Matrix::from_rows({{4, 1}, {2, 3}});
  const auto x = solve(a, std::vector<double>{1, 2});
  CHECK(x[0] == Approx(0.1));
  CHECK(x[1] == Approx(0.6));
  CHECK_THROWS_AS(solve(Matrix::from_rows({{1, 2}, {2, 4}}), std::vector<double>{1, 2}), DependentFamilyError);

  CHECK(numerical_rank(Matrix::from_rows({{1, 0, 0}, {0, 1, 0}}), 1e-12) == 2);
  CHECK(numerical_rank(Matrix::from_rows({{1, 2, 3}, {2, 4, 6}}), 1e-12) == 1);
  CHECK(numerical_rank(Matrix::from_rows({{1, 2, 3}, {2, 4, 6 + 1e-9}}), 1e-12) == 2);
  CHECK(numerical_rank(Matrix::from_rows({{1, 2, 3}, {2, 4, 6 + 1e-13}}), 1e-12) == 1);
}
