#include "ndual/sip.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ndual {

void SipConfig::validate() const {
  if (steps.empty()) throw ConfigError("sip: at least one step required");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!(steps[i] > 1e-9)) throw ConfigError("sip: steps must exceed 1e-9");
    if (i > 0 && !(steps[i] < steps[i - 1])) throw ConfigError("sip: steps must be strictly decreasing");
  }
  if (extrapolation_order < 0) throw ConfigError("sip: negative extrapolation order");
}

namespace {

using ld = long double;

// ||x + t y||_p in extended precision.
ld shifted_norm(const Vector& x, const Vector& y, ld t) {
  const ld p = x.space().p();
  ld mx = 0.0L;
  std::vector<ld> v(x.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    v[k] = std::abs(static_cast<ld>(x[k]) + t * static_cast<ld>(y[k]));
    mx = std::max(mx, v[k]);
  }
  if (mx == 0.0L) return 0.0L;
  ld s = 0.0L;
  if (p == 1.0L) {
    for (ld a : v) s += a;
    return s;
  }
  for (ld a : v) s += std::pow(a / mx, p);
  return mx * std::pow(s, 1.0L / p);
}

// Value at 0 of the polynomial through (h_i, q_i) (Neville's scheme).
ld extrapolate_to_zero(const std::vector<ld>& h, std::vector<ld> q) {
  const std::size_t m = h.size();
  for (std::size_t level = 1; level < m; ++level) {
    for (std::size_t i = 0; i + level < m; ++i) {
      q[i] = (h[i + level] * q[i] - h[i] * q[i + 1]) / (h[i + level] - h[i]);
    }
  }
  return q[0];
}

double one_sided(const Vector& x, const Vector& y, const std::vector<ld>& steps, int side,
                 std::vector<std::pair<double, double>>& trace) {
  const ld base = shifted_norm(x, y, 0.0L);
  std::vector<ld> quotients;
  quotients.reserve(steps.size());
  for (ld h : steps) {
    const ld t = side * h;
    const ld qt = (shifted_norm(x, y, t) - base) / t;
    quotients.push_back(qt);
    trace.emplace_back(static_cast<double>(t), static_cast<double>(qt));
  }
  return static_cast<double>(extrapolate_to_zero(steps, quotients));
}

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

TauPair tau(const Vector& x, const Vector& y, const SipConfig& cfg) {
  cfg.validate();
  if (!(x.space() == y.space())) throw DimensionError("tau: x and y live in different spaces");
  if (x.is_zero()) throw ZeroVectorError("tau: x = 0");

  // Distance (in t) to the nearest kink |x_k + t y_k| = 0 away from t = 0.
  double kink = 1.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] != 0.0 && y[k] != 0.0) kink = std::min(kink, std::abs(x[k] / y[k]));
  }
  const ld shrink = 0.5L * kink;

  const std::size_t used = std::min<std::size_t>(cfg.steps.size(), static_cast<std::size_t>(cfg.extrapolation_order) + 1);
  std::vector<ld> steps;
  // The smallest configured steps carry the least truncation error.
  for (std::size_t i = cfg.steps.size() - used; i < cfg.steps.size(); ++i) steps.push_back(cfg.steps[i] * shrink);

  TauPair out;
  out.tau_minus = one_sided(x, y, steps, -1, out.step_trace);
  out.tau_plus = one_sided(x, y, steps, +1, out.step_trace);
  return out;
}

double g(const Vector& x, const Vector& y) {
  if (!(x.space() == y.space())) throw DimensionError("g: x and y live in different spaces");
  if (x.is_zero()) return 0.0;
  // ||x||^(2-p) sum |x_k|^(p-1) sgn(x_k) y_k  ==  ||x|| * N_x(y), where N_x is
  // the norming functional; at p = 1 N_x is the sign vector with sgn(0) = 0.
  const double nx = lp_norm(x);
  const double p = x.space().p();
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] == 0.0) continue;
    const double w = p == 1.0 ? sgn(x[k]) : sgn(x[k]) * std::pow(std::abs(x[k]) / nx, p - 1.0);
    s += w * y[k];
  }
  return nx * s;
}

double g_numeric(const Vector& x, const Vector& y, const SipConfig& cfg) {
  const TauPair t = tau(x, y, cfg);
  return 0.5 * lp_norm(x) * (t.tau_minus + t.tau_plus);
}

double g(const Vector& x, const Vector& y, const SipConfig& cfg) {
  if (cfg.method == SipConfig::Method::closed_form) return g(x, y);
  if (x.is_zero()) return 0.0;
  return g_numeric(x, y, cfg);
}

DualFunctional g_functional(const Vector& x) {
  if (x.is_zero()) throw ZeroVectorError("g_functional: x = 0");
  // g(x, .) is linear, so its coefficients are its values on the basis.
  const double nx = lp_norm(x);
  std::vector<double> c(x.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = g(x, Vector::basis(x.space(), k)) / nx;
  return DualFunctional(x.space(), std::move(c));
}

bool is_g_orthogonal(const Vector& x, const Vector& y, double tol) {
  return std::abs(g(x, y)) <= tol * (1.0 + lp_norm(x) * lp_norm(y));
}

GPropertyReport check_g_properties(const Vector& x, const Vector& y, double alpha, double beta,
                                   double tol, const SipEvaluator& evaluator) {
  std::vector<double> rev(y.coords().rbegin(), y.coords().rend());
  return check_g_properties(x, y, Vector(y.space(), std::move(rev)), alpha, beta, tol, evaluator);
}

GPropertyReport check_g_properties(const Vector& x, const Vector& y, const Vector& z,
                                   double alpha, double beta, double tol,
                                   const SipEvaluator& evaluator) {
  const SipEvaluator gg = evaluator ? evaluator : SipEvaluator([](const Vector& a, const Vector& b) { return g(a, b); });
  const double nx = lp_norm(x);
  const double ny = lp_norm(y);
  const double nz = lp_norm(z);
  GPropertyReport r;

  // Each check measures |lhs - rhs| / (1 + natural scale) against tol.
  auto score = [&](std::size_t k, double lhs, double rhs, double scale) {
    r.violations[k] = std::abs(lhs - rhs) / (1.0 + scale);
    r.worst = std::max(r.worst, r.violations[k]);
    return r.violations[k] <= tol;
  };

  const double gxy = gg(x, y);
  r.g1 = score(0, gg(x, x), nx * nx, nx * nx);
  r.g2 = score(1, gg(alpha * x, beta * y), alpha * beta * gxy, std::abs(alpha * beta) * nx * ny);
  r.g3 = score(2, gg(x, x + y), nx * nx + gxy, nx * nx + nx * ny);
  r.violations[3] = std::max(0.0, std::abs(gxy) - nx * ny) / (1.0 + nx * ny);
  r.worst = std::max(r.worst, r.violations[3]);
  r.g4 = r.violations[3] <= tol;
  r.additivity = score(4, gg(x, alpha * y + beta * z), alpha * gxy + beta * gg(x, z),
                       nx * (std::abs(alpha) * ny + std::abs(beta) * nz));
  return r;
}

}  // namespace ndual
