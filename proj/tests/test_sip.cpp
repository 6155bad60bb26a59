#include <cmath>

#include "doctest.h"
#include "ndual/sip.hpp"
#include "oracles.hpp"

using namespace ndual;
using doctest::Approx;

namespace {
Vector v2(double p, double a, double b) { return Vector(SpaceSpec(2, p), {a, b}); }
}  // namespace

TEST_CASE("tau examples") {
  const TauPair t1 = tau(v2(1, 1, 0), v2(1, 0, 1));
  CHECK(t1.tau_minus == Approx(-1.0).epsilon(1e-9));
  CHECK(t1.tau_plus == Approx(1.0).epsilon(1e-9));

  const TauPair t2 = tau(v2(2, 1, 0), v2(2, 1, 0));
  CHECK(t2.tau_minus == Approx(1.0).epsilon(1e-9));
  CHECK(t2.tau_plus == Approx(1.0).epsilon(1e-9));

  const TauPair t3 = tau(v2(2, 0, 1), v2(2, 1, 0));
  CHECK(std::abs(t3.tau_minus) <= 1e-6);
  CHECK(std::abs(t3.tau_plus) <= 1e-6);

  CHECK_FALSE(t1.step_trace.empty());
  CHECK_THROWS_AS(tau(v2(2, 0, 0), v2(2, 1, 0)), ZeroVectorError);
  CHECK_THROWS_AS(tau(v2(2, 1, 0), v2(3, 1, 0)), DimensionError);
}

TEST_CASE("tau ordering on random pairs") {
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    const SpaceSpec s(4, p);
    for (std::uint64_t t = 0; t < 50; ++t) {
      const TauPair tp = tau(random_vector(s, derive_seed(2, {t, 0})), random_vector(s, derive_seed(2, {t, 1})));
      CHECK(tp.tau_minus <= tp.tau_plus + 1e-8 * (1 + std::abs(tp.tau_plus)));
    }
  }
}

TEST_CASE("sip config validation") {
  SipConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.steps = {1e-4, 1e-3};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.steps = {1e-3, 1e-10};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("closed-form g examples") {
  CHECK(g(v2(2, 3, 4), v2(2, 3, 4)) == Approx(25.0).epsilon(1e-14));
  CHECK(g(v2(2, 1, 2), v2(2, 3, 4)) == Approx(11.0).epsilon(1e-14));
  CHECK(g(v2(3, 1, 1), v2(3, 1, 0)) == Approx(0.7937005259840998).epsilon(1e-14));
  CHECK(g(v2(1, 1, 0), v2(1, 0, 1)) == 0.0);
  CHECK(g(v2(3, 0, 0), v2(3, 1, 5)) == 0.0);
}

TEST_CASE("numeric g examples") {
  CHECK(g_numeric(v2(2, 1, 0), v2(2, 1, 0)) == Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(g_numeric(v2(2, 0, 2), v2(2, 2, 0))) <= 1e-6);
  CHECK(g_numeric(v2(3, 1, 1), v2(3, 1, 0)) == Approx(std::pow(2.0, -1.0 / 3.0)).epsilon(1e-8));
  SipConfig cfg;
  cfg.method = SipConfig::Method::numeric;
  CHECK(g(v2(2, 0, 0), v2(2, 1, 1), cfg) == 0.0);
}

TEST_CASE("closed form matches the difference-quotient oracle") {
  // The symmetric quotient is an O(h^2) oracle where the norm is smooth
  // along the segment; coordinates of x are kept away from zero.
  for (double p : {1.5, 2.0, 3.0, 6.0}) {
    const SpaceSpec s(3, p);
    for (std::uint64_t t = 0; t < 50; ++t) {
      Vector x = random_vector(s, derive_seed(4, {t, 0}));
      std::vector<double> c(x.coords().begin(), x.coords().end());
      for (double& v : c) v = std::copysign(0.5 + std::abs(v), v);
      x = Vector(s, c);
      const Vector y = random_vector(s, derive_seed(4, {t, 1}));
      CHECK(std::abs(g(x, y) - oracle::g_difference_quotient(x, y, 1e-5)) <= 1e-6);
    }
  }
}

TEST_CASE("closed form matches g_numeric on random pairs") {
  for (double p : {1.0, 1.5, 2.0, 3.0, 6.0}) {
    const SpaceSpec s(4, p);
    for (std::uint64_t t = 0; t < 100; ++t) {
      const Vector x = random_vector(s, derive_seed(6, {t, 0}));
      const Vector y = random_vector(s, derive_seed(6, {t, 1}));
      CHECK(std::abs(g(x, y) - g_numeric(x, y)) <= 1e-6);
    }
  }
}

TEST_CASE("g functional") {
  const DualFunctional f = g_functional(v2(2, 3, 4));
  CHECK(f.coeffs()[0] == Approx(0.6).epsilon(1e-14));
  CHECK(f.coeffs()[1] == Approx(0.8).epsilon(1e-14));
  CHECK(f(v2(2, 3, 4)) == Approx(5.0).epsilon(1e-14));

  const DualFunctional e = g_functional(Vector::basis(SpaceSpec(2, 3.0), 0));
  CHECK(e.coeffs()[0] == Approx(1.0).epsilon(1e-15));
  CHECK(e.coeffs()[1] == 0.0);

  for (double p : {1.5, 2.0, 3.0}) {
    const SpaceSpec s(3, p);
    for (std::uint64_t t = 0; t < 50; ++t) {
      const Vector x = random_vector(s, derive_seed(8, {t}));
      const DualFunctional gx = g_functional(x);
      CHECK(gx.norm() == Approx(1.0).epsilon(1e-12));
      CHECK(gx(x) == Approx(lp_norm(x)).epsilon(1e-12));
      const DualFunctional nf = norming_functional(x);
      for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(gx.coeffs()[k] - nf.coeffs()[k]) <= 1e-12);
    }
  }
  CHECK_THROWS_AS(g_functional(Vector::zero(SpaceSpec(2, 2.0))), ZeroVectorError);
}

TEST_CASE("g property report") {
  for (std::uint64_t t = 0; t < 20; ++t) {
    const SpaceSpec s(3, 2.0);
    const auto r = check_g_properties(random_vector(s, t), random_vector(s, t + 100), -1.5 + 0.1 * static_cast<double>(t),
                                      0.7, 1e-8);
    CHECK(r.all());
  }
  CHECK(check_g_properties(v2(3, 1, 1), v2(3, 2, -3), 2.0, -1.0, 1e-8).all());

  const SipEvaluator corrupted = [](const Vector& x, const Vector& y) {
    return g(x, y) / std::pow(lp_norm(x), 2.0 - x.space().p());
  };
  const auto bad = check_g_properties(v2(3, 1, 1), v2(3, 2, -3), 2.0, -1.0, 1e-8, corrupted);
  CHECK_FALSE(bad.g1);
  CHECK(bad.violations[0] > 1e-3);
}

TEST_CASE("g axioms on random instances") {
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    const SpaceSpec s(4, p);
    for (std::uint64_t t = 0; t < 500; ++t) {
      const Vector x = random_vector(s, derive_seed(10, {t, 0}));
      const Vector y = random_vector(s, derive_seed(10, {t, 1}));
      const Vector z = random_vector(s, derive_seed(10, {t, 2}));
      const auto r = check_g_properties(x, y, z, 1.25, -0.5, 1e-8);
      CHECK(r.all());
      // Linearity in the second slot at the tighter tolerance.
      CHECK(r.violations[4] <= 1e-10);
    }
  }
}

TEST_CASE("g orthogonality") {
  CHECK(is_g_orthogonal(Vector::basis(SpaceSpec(2, 2.0), 0), Vector::basis(SpaceSpec(2, 2.0), 1)));
  CHECK_FALSE(is_g_orthogonal(v2(3, 1, 1), v2(3, 1, 0)));
  CHECK_FALSE(is_g_orthogonal(v2(1.5, 2, -1), v2(1.5, 2, -1)));
}
