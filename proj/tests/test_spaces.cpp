#include <cmath>
#include <random>

#include "doctest.h"
#include "ndual/spaces.hpp"
#include "oracles.hpp"

using namespace ndual;
using doctest::Approx;

TEST_CASE("exponent range and duality") {
  CHECK_THROWS_AS(PExponent(0.5), RangeError);
  CHECK_THROWS_AS(PExponent(16.5), RangeError);
  CHECK_THROWS_AS(PExponent(std::nan("")), RangeError);
  CHECK(dual_exponent(2).q() == 2.0);
  CHECK(dual_exponent(1).q_is_infinite());
  CHECK(dual_exponent(3).q() == Approx(1.5).epsilon(1e-15));
  CHECK(dual_exponent(16).p() == 16.0);
  for (double p : {1.1, 1.5, 2.0, 3.0, 7.25, 16.0}) {
    const PExponent e(p);
    CHECK(std::abs(1.0 / e.p() + 1.0 / e.q() - 1.0) <= 1e-15);
  }
}

TEST_CASE("vector construction rejects bad input") {
  const SpaceSpec s(2, 2.0);
  CHECK_THROWS_AS(SpaceSpec(0, 2.0), DimensionError);
  CHECK_THROWS_AS(Vector(s, {1, 2, 3}), DimensionError);
  CHECK_THROWS_AS(Vector(s, {1, std::nan("")}), ValueError);
  CHECK_THROWS_AS(Vector(s, {1, INFINITY}), ValueError);
  CHECK(Vector::zero(s).is_zero());
  CHECK(Vector::basis(s, 1) == Vector(s, {0, 1}));
}

TEST_CASE("lp_norm values") {
  CHECK(lp_norm(Vector(SpaceSpec(2, 2.0), {3, 4})) == Approx(5.0).epsilon(1e-15));
  CHECK(lp_norm(Vector(SpaceSpec(3, 1.0), {1, -1, 1})) == 3.0);
  CHECK(lp_norm(Vector(SpaceSpec(2, 3.0), {1, 1})) == Approx(1.2599210498948732).epsilon(1e-14));
  CHECK(lp_norm(Vector::zero(SpaceSpec(4, 1.5))) == 0.0);
  CHECK_THROWS_AS(lp_norm(Vector(SpaceSpec(2, 2.0), {1, 1}), SpaceSpec(3, 2.0)), DimensionError);
}

TEST_CASE("lp_norm is homogeneous and subadditive on random triples") {
  for (double p : {1.0, 1.5, 2.0, 3.0, 16.0}) {
    const SpaceSpec s(5, p);
    for (std::uint64_t t = 0; t < 200; ++t) {
      const Vector x = random_vector(s, derive_seed(1, {t, 0}));
      const Vector y = random_vector(s, derive_seed(1, {t, 1}));
      const double a = -3.0 + 0.03 * static_cast<double>(t);
      const double nx = lp_norm(x);
      CHECK(std::abs(lp_norm(a * x) - std::abs(a) * nx) <= 1e-10 * std::max(1.0, std::abs(a) * nx));
      CHECK(lp_norm(x + y) <= (nx + lp_norm(y)) * (1 + 1e-10));
      CHECK(nx == Approx(oracle::pnorm({x.coords().begin(), x.coords().end()}, p)).epsilon(1e-12));
    }
  }
}

TEST_CASE("norming functional examples") {
  const auto f = norming_functional(Vector(SpaceSpec(2, 2.0), {3, 4}));
  CHECK(f.coeffs()[0] == Approx(0.6).epsilon(1e-15));
  CHECK(f.coeffs()[1] == Approx(0.8).epsilon(1e-15));

  const auto h = norming_functional(Vector(SpaceSpec(2, 1.0), {2, 0}));
  CHECK(h.coeffs()[0] == 1.0);
  CHECK(h.coeffs()[1] == 0.0);
  CHECK(h.norm() == 1.0);

  for (double p : {1.0, 1.5, 3.0}) {
    const SpaceSpec s(3, p);
    const auto e = norming_functional(Vector::basis(s, 0));
    CHECK(e.coeffs()[0] == Approx(1.0).epsilon(1e-15));
    CHECK(e.coeffs()[1] == 0.0);
    CHECK(e.coeffs()[2] == 0.0);
  }
  CHECK_THROWS_AS(norming_functional(Vector::zero(SpaceSpec(2, 2.0))), ZeroVectorError);
}

TEST_CASE("Hölder inequality with equality at the norming functional") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  for (double p : {1.0, 1.5, 2.0, 3.0, 6.0}) {
    const SpaceSpec s(4, p);
    const PExponent e(p);
    for (std::uint64_t t = 0; t < 100; ++t) {
      const Vector x = random_vector(s, derive_seed(9, {t}));
      std::vector<double> w(4);
      for (double& c : w) c = normal(rng);
      const double nw = dual_norm(w, e);
      for (double& c : w) c /= nw;
      const double nx = lp_norm(x);
      CHECK(std::abs(dot(w, x.coords())) <= nx * (1 + 1e-12));
      const auto f = norming_functional(x);
      CHECK(f(x) == Approx(nx).epsilon(1e-12));
      CHECK(f.norm() == Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("norming vector attains the dual norm") {
  for (double p : {1.0, 1.5, 2.0, 4.0}) {
    const SpaceSpec s(3, p);
    const PExponent e(p);
    const std::vector<double> phi{0.5, -2.0, 1.25};
    const Vector x = norming_vector(phi, s);
    CHECK(lp_norm(x) == Approx(1.0).epsilon(1e-12));
    CHECK(dot(phi, x.coords()) == Approx(dual_norm(phi, e)).epsilon(1e-12));
  }
  // p = 1: the first largest coordinate wins ties.
  const Vector tie = norming_vector(std::vector<double>{-3.0, 3.0}, SpaceSpec(2, 1.0));
  CHECK(tie == Vector(SpaceSpec(2, 1.0), {-1.0, 0.0}));
}

TEST_CASE("permutation signs") {
  CHECK(permutation_sign(Permutation::identity(4)) == 1);
  CHECK(permutation_sign(Permutation({1, 0})) == -1);
  CHECK(permutation_sign(Permutation({1, 2, 0})) == 1);
  CHECK_THROWS_AS(Permutation({0, 0, 1}), ValueError);
  CHECK_THROWS_AS(Permutation({0, 3}), ValueError);
}

TEST_CASE("permutation sign is multiplicative (exhaustive up to n = 5)") {
  for (std::size_t n = 1; n <= 5; ++n) {
    const auto perms = all_permutations(n);
    CHECK(perms.size() == factorial(n));
    for (const auto& s : perms)
      for (const auto& t : perms) CHECK(permutation_sign(s.compose(t)) == permutation_sign(s) * permutation_sign(t));
  }
}

TEST_CASE("random generators") {
  const SpaceSpec s3(3, 2.0);
  CHECK(random_vector(s3, 7) == random_vector(s3, 7));
  CHECK_FALSE(random_vector(s3, 7) == random_vector(s3, 8));

  const SpaceSpec s2(2, 2.0);
  CHECK(std::abs(lp_norm(random_vector(s2, 1, Conditioning::unit_sphere)) - 1.0) <= 1e-12);
  for (double p : {1.0, 1.5, 3.0}) {
    const SpaceSpec sp(4, p);
    for (std::uint64_t seed = 0; seed < 20; ++seed)
      CHECK(std::abs(lp_norm(random_vector(sp, seed, Conditioning::unit_sphere)) - 1.0) <= 1e-12);
  }

  // Angle to the shared base direction.
  const Vector v = random_vector(s2, 5, Conditioning::near_dependent);
  const Vector base = near_dependent_base(s2);
  const double cosang = dot(v.coords(), base.coords()) / (lp_norm(v) * lp_norm(base));
  CHECK(std::acos(std::min(1.0, std::abs(cosang))) < 1e-5);

  CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
  CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
}

TEST_CASE("common_space") {
  const std::vector<Vector> empty;
  CHECK_THROWS_AS(common_space(empty), ShapeError);
  const std::vector<Vector> mixed{Vector(SpaceSpec(2, 2.0), {1, 0}), Vector(SpaceSpec(2, 3.0), {0, 1})};
  CHECK_THROWS_AS(common_space(mixed), DimensionError);
}
