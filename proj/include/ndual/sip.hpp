#pragma once

// The semi-inner product g(x, y) = (||x||/2)(tau_-(x,y) + tau_+(x,y)) on l^p.
//
// g() evaluates the l^p closed form; tau() and g_numeric() compute the
// one-sided derivatives directly and serve as an independent check.

#include <array>
#include <functional>
#include <utility>
#include <vector>

#include "ndual/spaces.hpp"

namespace ndual {

struct TauPair {
  double tau_minus = 0.0;
  double tau_plus = 0.0;
  /// (signed step, difference quotient) for every evaluated step, minus side first.
  std::vector<std::pair<double, double>> step_trace;
};

struct SipConfig {
  enum class Method { closed_form, numeric };

  Method method = Method::closed_form;
  std::vector<double> steps{1e-3, 1e-4, 1e-5};
  int extrapolation_order = 2;

  /// Throws ConfigError unless steps are strictly decreasing and > 1e-9.
  void validate() const;
};

/// One-sided derivatives of t -> ||x + t y||_p at t = 0 by polynomial
/// (Richardson) extrapolation of difference quotients to zero step.
///
/// The configured steps are shrunk by the distance to the nearest coordinate
/// kink (x_k + t y_k = 0 with x_k != 0) so that no quotient straddles one.
/// For 1 < p < 2 a coordinate with x_k = 0, y_k != 0 contributes a
/// t^(p-1) term that polynomial extrapolation cannot remove; accuracy
/// degrades there. Throws ZeroVectorError when x = 0.
TauPair tau(const Vector& x, const Vector& y, const SipConfig& cfg = {});

/// Closed form. g(0, y) = 0.
double g(const Vector& x, const Vector& y);

/// (||x||/2)(tau_- + tau_+). Throws ZeroVectorError when x = 0.
double g_numeric(const Vector& x, const Vector& y, const SipConfig& cfg = {});

/// Dispatches on cfg.method; g(0, y) = 0 for both methods.
double g(const Vector& x, const Vector& y, const SipConfig& cfg);

/// y -> g(x, y) / ||x||. Throws ZeroVectorError when x = 0.
DualFunctional g_functional(const Vector& x);

bool is_g_orthogonal(const Vector& x, const Vector& y, double tol = 1e-10);

using SipEvaluator = std::function<double(const Vector&, const Vector&)>;

struct GPropertyReport {
  bool g1 = false;
  bool g2 = false;
  bool g3 = false;
  bool g4 = false;
  bool additivity = false;
  /// Normalized violation of each check, in the order g1..g4, additivity.
  std::array<double, 5> violations{};
  /// Largest normalized violation seen across the five checks.
  double worst = 0.0;

  bool all() const noexcept { return g1 && g2 && g3 && g4 && additivity; }
};

/// Checks (G1)-(G4) and linearity in the second slot,
///   g(x, a y + b z) = a g(x, y) + b g(x, z),
/// each with a relative tolerance. `z` defaults to y with reversed
/// coordinates. `evaluator` defaults to the closed form.
GPropertyReport check_g_properties(const Vector& x, const Vector& y, double alpha, double beta,
                                   double tol, const SipEvaluator& evaluator = {});
GPropertyReport check_g_properties(const Vector& x, const Vector& y, const Vector& z,
                                   double alpha, double beta, double tol,
                                   const SipEvaluator& evaluator = {});

}  // namespace ndual
