#include "ndual/verifier.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <random>
#include <sstream>

#include "ndual/errors.hpp"
#include "ndual/json_io.hpp"
#include "ndual/nnorms.hpp"
#include "ndual/ortho.hpp"
#include "ndual/sip.hpp"

namespace ndual {

using nlohmann::json;

namespace {

struct PropertyMeta {
  const char* id;
  const char* result;
  const char* statement;
  double tolerance;
  bool soft;
};

// Report order. Tolerances are relative unless the statement says otherwise.
const std::vector<PropertyMeta>& catalogue() {
  static const std::vector<PropertyMeta> props{
      {"prop.axiom.degeneracy", "l^p n-norm", "||x_1..x_n||_p = 0 iff x_1..x_n are linearly dependent (absolute)", 1e-9, false},
      {"prop.axiom.permutation", "l^p n-norm", "||x_1..x_n||_p is invariant under permutations", 1e-12, false},
      {"prop.axiom.homogeneity", "l^p n-norm", "||a x_1, x_2..x_n||_p = |a| ||x_1..x_n||_p", 1e-10, false},
      {"prop.axiom.triangle", "l^p n-norm", "||x_1 + y, x_2..x_n||_p <= ||x_1..x_n||_p + ||y, x_2..x_n||_p", 1e-10, false},
      {"prop.gahler.euclidean", "Gähler n-norm on l^2", "||x_1..x_n||_G = sqrt(det[<x_i, x_j>])", 1e-6, false},
      {"prop.sandwich.gahler", "Gähler sandwich", "prod ||x_i°|| <= ||x_1..x_n||_G <= n! prod ||x_i|| (absolute)", 1e-8, false},
      {"prop.sip.oracle", "semi-inner product on l^p", "closed-form g(x, y) = (||x||/2)(tau_-(x, y) + tau_+(x, y)) (absolute)", 1e-6, false},
      {"prop.sip.G1", "semi-inner product axioms", "(G1) g(x, x) = ||x||^2", 1e-8, false},
      {"prop.sip.G2", "semi-inner product axioms", "(G2) g(a x, b y) = a b g(x, y)", 1e-8, false},
      {"prop.sip.G3", "semi-inner product axioms", "(G3) g(x, x + y) = ||x||^2 + g(x, y)", 1e-8, false},
      {"prop.sip.G4", "semi-inner product axioms", "(G4) |g(x, y)| <= ||x|| ||y||", 1e-8, false},
      {"prop.sip.linearity", "semi-inner product axioms", "g(x, a y + b z) = a g(x, y) + b g(x, z)", 1e-8, false},
      {"prop.ortho.left", "left g-orthogonal sequence", "g(x_i°, x_j°) = 0 for i < j", 1e-8, false},
      {"prop.ortho.bordered", "projection formula", "solved projection equals -(1/Gamma) times the bordered determinant", 1e-10, false},
      {"prop.ortho.classical_gs", "left g-orthogonal sequence on l^2", "at p = 2 the sequence is classical Gram-Schmidt", 1e-10, false},
      {"prop.gahler.invariance_p2", "orthogonalization invariance on l^2", "||x_1..x_n||_G = ||x_1°..x_n°||_G", 1e-9, false},
      {"prop.gahler.invariance_general", "orthogonalization invariance on l^p", "||x_1..x_n||_G = ||x_1°..x_n°||_G for p != 2 (estimated)", 1e-4, true},
      {"prop.lemma.sandwich", "functional norm sandwich", "||f||_{n,n} <= ||f||_{n,1} <= n! ||f||_{n,n} (absolute)", 1e-6, false},
      {"prop.corollary.sandwich", "operator norm sandwich", "||u||_G <= ||u||_op <= n! ||u||_G (absolute)", 1e-6, false},
      {"prop.isometry.curry", "currying isometry", "||u_f||_op = ||f||_{n,1} (exact)", 0.0, false},
      {"prop.theta.roundtrip", "currying bijection", "uncurry(curry(f)) = f and curry(uncurry(u))(z) = u(z) (exact)", 0.0, false},
      {"prop.values.det_norms", "determinant functional on l^2_2", "||det||_{2,1} = ||det||_{2,2} = 1 (absolute)", 1e-6, false},
      {"prop.values.gahler_n1", "Gähler 1-norm", "||x||_G = ||x||_p for n = 1 (relative to max(1, ||x||))", 1e-8, false},
      {"prop.divergence.witness", "non-antisymmetric functionals", "|f(x, x + e y)| / ||x, x + e y||_G exceeds the threshold for f = e_1 (x) e_2, x = e_1 + e_2, y = e_2, e = 1e-8", 1e6, false},
  };
  return props;
}

const PropertyMeta& meta(const std::string& id) {
  for (const PropertyMeta& m : catalogue())
    if (id == m.id) return m;
  throw ConfigError("unknown property id \"" + id + "\"");
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string join(const std::vector<std::size_t>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + std::to_string(xs[i]);
  return out;
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::ostringstream s;
    s.precision(17);
    s << xs[i];
    out += (i ? "," : "") + s.str();
  }
  return out;
}

std::string reproduce_command(const SuiteConfig& cfg, const std::string& id) {
  std::string cmd = "ndual verify --seed " + std::to_string(cfg.seed) + " --trials " +
                    std::to_string(cfg.trials_per_property) + " --p " + join(cfg.exponents) + " --dims " +
                    join(cfg.dims) + " --orders " + join(cfg.orders) + " --only " + id;
  for (const auto& [k, v] : cfg.tolerances) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    cmd += " --tol " + k + "=" + s.str();
  }
  if (cfg.mutation != Mutation::none) cmd += " --mutate " + to_string(cfg.mutation);
  return cmd;
}

/// Accumulates trials for one property; the first failure becomes the
/// counterexample.
class Recorder {
 public:
  Recorder(const SuiteConfig& cfg, const std::string& id) : cfg_(&cfg) {
    const PropertyMeta& m = meta(id);
    rec_.property_id = m.id;
    rec_.result = m.result;
    rec_.statement = m.statement;
    rec_.soft = m.soft;
    rec_.tolerance = cfg.tolerance(id);
  }

  double tol() const { return rec_.tolerance; }

  /// `describe` is called only for the first failure.
  void trial(bool pass, double violation, const std::function<json()>& describe) {
    ++rec_.trials;
    if (std::isfinite(violation)) {
      rec_.worst_violation = std::max(rec_.worst_violation, violation);
    } else {
      rec_.worst_violation = std::numeric_limits<double>::infinity();
    }
    if (pass) {
      ++rec_.passes;
      return;
    }
    if (!rec_.counterexample) {
      json cx = describe();
      cx["violation"] = std::isfinite(violation) ? json(violation) : json("inf");
      cx["reproduce"] = reproduce_command(*cfg_, rec_.property_id);
      rec_.counterexample = std::move(cx);
    }
  }

  /// Folds in a batch of trials scored elsewhere.
  void merge(int trials, int passes, double worst, const std::function<json()>& describe) {
    rec_.trials += trials;
    rec_.passes += passes;
    rec_.worst_violation = std::max(rec_.worst_violation, worst);
    if (passes < trials && !rec_.counterexample) {
      json cx = describe();
      cx["reproduce"] = reproduce_command(*cfg_, rec_.property_id);
      rec_.counterexample = std::move(cx);
    }
  }

  PropertyRecord take() { return std::move(rec_); }

 private:
  const SuiteConfig* cfg_;
  PropertyRecord rec_;
};

int scaled(const SuiteConfig& cfg, int base) {
  const long long n = (static_cast<long long>(base) * cfg.trials_per_property + 199) / 200;
  return static_cast<int>(std::max(1LL, n));
}

std::vector<std::size_t> within(const std::vector<std::size_t>& xs, std::size_t lo, std::size_t hi,
                                std::vector<std::size_t> fallback) {
  std::vector<std::size_t> out;
  for (std::size_t x : xs)
    if (x >= lo && x <= hi) out.push_back(x);
  return out.empty() ? fallback : out;
}

template <typename T>
T pick(std::mt19937_64& rng, const std::vector<T>& xs) {
  return xs[std::uniform_int_distribution<std::size_t>(0, xs.size() - 1)(rng)];
}

json cell_json(std::size_t d, std::size_t n, double p) { return json{{"d", d}, {"n", n}, {"p", p}}; }

json tuple_instance(std::span<const Vector> xs) { return json{{"tuple", json_io::to_json(xs)}}; }

double max_abs_diff(const Vector& a, const Vector& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.coords().size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

double max_abs(const Vector& a) {
  double m = 0.0;
  for (double c : a.coords()) m = std::max(m, std::abs(c));
  return m;
}

// Mutations ------------------------------------------------------------------

double g_without_norm_factor(const Vector& x, const Vector& y) {
  const double p = x.space().p();
  double s = 0.0;
  for (std::size_t k = 0; k < x.coords().size(); ++k) {
    const double xk = x[k];
    if (xk == 0.0) continue;
    s += std::copysign(std::pow(std::abs(xk), p - 1.0), xk) * y[k];
  }
  return s;
}

double sum_of_norms(std::span<const Vector> xs) {
  double s = 0.0;
  for (const Vector& x : xs) s += lp_norm(x);
  return s;
}

// Property groups --------------------------------------------------------------
//
// Each group returns records for the ids it owns; trial seeds are derived
// from (suite seed, group tag, cell, trial).

using Group = std::function<std::vector<PropertyRecord>(const SuiteConfig&)>;

struct Cell {
  std::size_t d;
  std::size_t n;
  double p;
};

std::vector<Cell> cells(const SuiteConfig& cfg) {
  std::vector<Cell> out;
  for (double p : cfg.exponents)
    for (std::size_t d : cfg.dims)
      for (std::size_t n : cfg.orders)
        if (n <= d) out.push_back({d, n, p});
  return out;
}

std::uint64_t cell_seed(const SuiteConfig& cfg, const std::string& tag, const Cell& c) {
  return derive_seed(cfg.seed, {fnv1a(tag), c.d, c.n, static_cast<std::uint64_t>(std::llround(c.p * 1e6))});
}

std::vector<PropertyRecord> axioms(const SuiteConfig& cfg) {
  const char* ids[] = {"prop.axiom.degeneracy", "prop.axiom.permutation", "prop.axiom.homogeneity",
                       "prop.axiom.triangle"};
  std::vector<Recorder> recs;
  for (const char* id : ids) recs.emplace_back(cfg, id);
  const AxiomTolerances tol{recs[0].tol(), recs[1].tol(), recs[2].tol(), recs[3].tol()};
  const NNormEvaluator norm = cfg.mutation == Mutation::nnorm_sum_of_norms
                                  ? NNormEvaluator(sum_of_norms)
                                  : NNormEvaluator([](std::span<const Vector> xs) { return lp_n_norm(xs); });
  const int trials = scaled(cfg, 200);
  for (const Cell& c : cells(cfg)) {
    const SpaceSpec spec(c.d, c.p);
    const std::uint64_t seed = cell_seed(cfg, "axioms", c);
    const AxiomReport rep = check_n_norm_axioms(norm, spec, c.n, trials, seed, tol);
    const AxiomStats* stats[] = {&rep.degeneracy, &rep.permutation, &rep.homogeneity, &rep.triangle};
    for (std::size_t k = 0; k < 4; ++k) {
      const AxiomStats& st = *stats[k];
      recs[k].merge(st.trials, st.passes, st.worst_violation, [&] {
        const std::uint64_t ts = derive_seed(seed, {static_cast<std::uint64_t>(st.first_failure_trial)});
        json cx = tuple_instance(random_tuple(spec, c.n, ts));
        cx["cell"] = cell_json(c.d, c.n, c.p);
        cx["trial"] = st.first_failure_trial;
        cx["trial_seed"] = ts;
        return cx;
      });
    }
  }
  std::vector<PropertyRecord> out;
  for (Recorder& r : recs) out.push_back(r.take());
  return out;
}

std::vector<PropertyRecord> gahler_euclidean(const SuiteConfig& cfg) {
  Recorder rec(cfg, "prop.gahler.euclidean");
  const auto dims = within(cfg.dims, 1, 5, {2, 3, 4, 5});
  const int trials = scaled(cfg, 50);
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t ts = derive_seed(cfg.seed, {fnv1a("gahler.euclidean"), static_cast<std::uint64_t>(t)});
    std::mt19937_64 rng(ts);
    const std::size_t d = pick(rng, dims);
    const std::size_t n = pick(rng, within(cfg.orders, 1, std::min<std::size_t>(3, d), {1}));
    const SpaceSpec spec(d, 2.0);
    const auto xs = random_tuple(spec, n, derive_seed(ts, {1}));
    NNormConfig nc;
    nc.seed = derive_seed(ts, {2});
    const double est = gahler_n_norm_estimate(xs, nc).value;
    const double ref = gahler_n_norm_euclidean(xs);
    const double err = std::abs(est - ref) / std::max(ref, 1e-300);
    rec.trial(err <= rec.tol(), err, [&] {
      json cx = tuple_instance(xs);
      cx["trial"] = t;
      cx["estimate"] = est;
      cx["closed_form"] = ref;
      return cx;
    });
  }
  // The worked value ||(3,0,0), (0,4,0)||_G = 12.
  {
    const SpaceSpec spec(3, 2.0);
    const std::vector<Vector> xs{Vector(spec, {3, 0, 0}), Vector(spec, {0, 4, 0})};
    const double est = gahler_n_norm_estimate(xs).value;
    const double err = std::abs(est - 12.0) / 12.0;
    rec.trial(err <= rec.tol(), err, [&] {
      json cx = tuple_instance(xs);
      cx["estimate"] = est;
      cx["expected"] = 12.0;
      return cx;
    });
  }
  return {rec.take()};
}

std::vector<PropertyRecord> gahler_sandwich(const SuiteConfig& cfg) {
  Recorder rec(cfg, "prop.sandwich.gahler");
  const int trials = scaled(cfg, 200);
  for (const Cell& c : cells(cfg)) {
    const SpaceSpec spec(c.d, c.p);
    const std::uint64_t seed = cell_seed(cfg, "sandwich", c);
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t ts = derive_seed(seed, {static_cast<std::uint64_t>(t)});
      const Conditioning cond = t % 5 == 4 ? Conditioning::near_dependent : Conditioning::generic;
      const auto xs = random_tuple(spec, c.n, ts, cond);
      NNormConfig nc;
      nc.seed = derive_seed(ts, {1});
      const SandwichBounds b = sandwich_bounds(xs);
      double value = 0.0;
      std::string error;
      try {
        value = gahler_n_norm_estimate(xs, nc).value;
      } catch (const std::logic_error& e) {
        error = e.what();
      }
      const double violation =
          error.empty() ? std::max({0.0, b.lower - value, value - b.upper}) : std::numeric_limits<double>::infinity();
      rec.trial(violation <= rec.tol(), violation, [&] {
        json cx = tuple_instance(xs);
        cx["cell"] = cell_json(c.d, c.n, c.p);
        cx["trial"] = t;
        cx["estimate"] = value;
        cx["lower"] = b.lower;
        cx["upper"] = b.upper;
        if (!error.empty()) cx["error"] = error;
        return cx;
      });
    }
  }
  return {rec.take()};
}

std::vector<PropertyRecord> sip_oracle(const SuiteConfig& cfg) {
  Recorder rec(cfg, "prop.sip.oracle");
  const int trials = scaled(cfg, 100);
  for (double p : cfg.exponents) {
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t ts = derive_seed(cfg.seed, {fnv1a("sip.oracle"), static_cast<std::uint64_t>(std::llround(p * 1e6)),
                                                      static_cast<std::uint64_t>(t)});
      std::mt19937_64 rng(ts);
      const SpaceSpec spec(pick(rng, cfg.dims), p);
      const Vector x = random_vector(spec, derive_seed(ts, {1}));
      const Vector y = random_vector(spec, derive_seed(ts, {2}));
      const double closed = g(x, y);
      const double numeric = g_numeric(x, y);
      const double err = std::abs(closed - numeric);
      rec.trial(err <= rec.tol(), err, [&] {
        return json{{"x", json_io::to_json(x)}, {"y", json_io::to_json(y)}, {"closed_form", closed},
                    {"numeric", numeric}, {"trial", t}};
      });
    }
  }
  return {rec.take()};
}

std::vector<PropertyRecord> sip_axioms(const SuiteConfig& cfg) {
  const char* ids[] = {"prop.sip.G1", "prop.sip.G2", "prop.sip.G3", "prop.sip.G4", "prop.sip.linearity"};
  std::vector<Recorder> recs;
  for (const char* id : ids) recs.emplace_back(cfg, id);
  const SipEvaluator eval = cfg.mutation == Mutation::sip_drop_norm_factor ? SipEvaluator(g_without_norm_factor)
                                                                             : SipEvaluator{};
  const int trials = scaled(cfg, 500);
  for (double p : cfg.exponents) {
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t ts = derive_seed(cfg.seed, {fnv1a("sip.axioms"), static_cast<std::uint64_t>(std::llround(p * 1e6)),
                                                      static_cast<std::uint64_t>(t)});
      std::mt19937_64 rng(ts);
      std::uniform_real_distribution<double> coef(-3.0, 3.0);
      const SpaceSpec spec(pick(rng, cfg.dims), p);
      const Vector x = random_vector(spec, derive_seed(ts, {1}));
      const Vector y = random_vector(spec, derive_seed(ts, {2}));
      const Vector z = random_vector(spec, derive_seed(ts, {3}));
      const double a = coef(rng);
      const double b = coef(rng);
      const GPropertyReport r = check_g_properties(x, y, z, a, b, 0.0, eval);
      for (std::size_t k = 0; k < recs.size(); ++k) {
        recs[k].trial(r.violations[k] <= recs[k].tol(), r.violations[k], [&] {
          return json{{"x", json_io::to_json(x)}, {"y", json_io::to_json(y)}, {"z", json_io::to_json(z)},
                      {"alpha", a}, {"beta", b}, {"trial", t}};
        });
      }
    }
  }
  std::vector<PropertyRecord> out;
  for (Recorder& r : recs) out.push_back(r.take());
  return out;
}

std::vector<PropertyRecord> ortho_left(const SuiteConfig& cfg) {
  Recorder rec(cfg, "prop.ortho.left");
  const int trials = scaled(cfg, 200);
  const auto dims = within(cfg.dims, 2, 8, {2, 3, 4});
  for (double p : cfg.exponents) {
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t ts = derive_seed(cfg.seed, {fnv1a("ortho.left"), static_cast<std::uint64_t>(std::llround(p * 1e6)),
                                                      static_cast<std::uint64_t>(t)});
      std::mt19937_64 rng(ts);
      const std::size_t d = pick(rng, dims);
      const std::size_t n = std::uniform_int_distribution<std::size_t>(2, d)(rng);
      const SpaceSpec spec(d, p);
      const auto xs = random_tuple(spec, n, derive_seed(ts, {1}));
      const auto res = left_g_orthogonalize(xs);
      const auto& o = res.orthogonalized;
      double worst = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          worst = std::max(worst, std::abs(g(o[i], o[j])) / (1.0 + lp_norm(o[i]) * lp_norm(o[j])));
      rec.trial(worst <= rec.tol(), worst, [&] {
        json cx = tuple_instance(xs);
        cx["orthogonalized"] = json_io::to_json(o);
        cx["trial"] = t;
        return cx;
      });
    }
  }
  return {rec.take()};
}

std::vector<PropertyRecord> ortho_bordered(const SuiteConfig& cfg) {
  Recorder rec(cfg, "prop.ortho.bordered");
  const int trials = scaled(cfg, 200);
  for (double p : cfg.exponents) {
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t ts = derive_seed(cfg.seed, {fnv1a("ortho.bordered"), static_cast<std::uint64_t>(std::llround(p * 1e6)),
                                                      static_cast<std::uint64_t>(t)});
      std::mt19937_64 rng(ts);
      const std::size_t d = pick(rng, cfg.dims);
      const std::size_t m = std::uniform_int_distribution<std::size_t>(1, std::min<std::size_t>(3, d))(rng);
      const SpaceSpec spec(d, p);
      // The formula needs Gamma(Y) != 0; at p = 1 two vectors with the same
      // sign pattern already make it vanish, so such families are redrawn.
      std::vector<Vector> ys;
      for (std::uint64_t attempt = 0;; ++attempt) {
        ys = random_tuple(spec, m, derive_seed(ts, {1, attempt}));
        double scale = 1.0;
        for (const Vector& y : ys) scale *= lp_norm(y) * lp_norm(y);
        if (std::abs(gram_determinant(ys)) >= 1e-8 * scale) break;
      }
      const Vector x = random_vector(spec, derive_seed(ts, {2}));
      const Vector solved = project(x, ys);
      const Vector bordered = bordered_determinant_project(x, ys);
      const double err = max_abs_diff(solved, bordered) / std::max(1.0, max_abs(solved));
      rec.trial(err <= rec.tol(), err, [&] {
        return json{{"x", json_io::to_json(x)}, {"family", json_io::to_json(ys)},
                    {"solved", json_io::to_json(solved)}, {"bordered", json_io::to_json(bordered)}, {"trial", t}};
      });
    }
  }
  return {rec.take()};
}

std::vector<PropertyRecord> ortho_classical(const SuiteConfig& cfg) {
  Recorder rec(cfg, "prop.ortho.classical_gs");
  const int trials = scaled(cfg, 200);
  const auto dims = within(cfg.dims, 2, 8, {2, 3, 4});
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t ts = derive_seed(cfg.seed, {fnv1a("ortho.classical"), static_cast<std::uint64_t>(t)});
    std::mt19937_64 rng(ts);
    const std::size_t d = pick(rng, dims);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, d)(rng);
    const SpaceSpec spec(d, 2.0);
    const auto xs = random_tuple(spec, n, derive_seed(ts, {1}));
    const auto ours = left_g_orthogonalize(xs).orthogonalized;
    // Textbook Gram-Schmidt with dot products.
    std::vector<Vector> gs;
    for (const Vector& x : xs) {
      Vector v = x;
      for (const Vector& u : gs) v = v - (dot(u.coords(), x.coords()) / dot(u.coords(), u.coords())) * u;
      gs.push_back(v);
    }
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) err = std::max(err, max_abs_diff(ours[i], gs[i]) / std::max(1.0, max_abs(gs[i])));
    rec.trial(err <= rec.tol(), err, [&] {
      json cx = tuple_instance(xs);
      cx["orthogonalized"] = json_io::to_json(ours);
      cx["gram_schmidt"] = json_io::to_json(gs);
      cx["trial"] = t;
      return cx;
    });
  }
  return {rec.take()};
}

std::vector<PropertyRecord> invariance_p2(const SuiteConfig& cfg) {
  Recorder rec(cfg, "prop.gahler.invariance_p2");
  const int trials = scaled(cfg, 200);
  const auto dims = within(cfg.dims, 2, 8, {2, 3, 4});
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t ts = derive_seed(cfg.seed, {fnv1a("invariance.p2"), static_cast<std::uint64_t>(t)});
    std::mt19937_64 rng(ts);
    const std::size_t d = pick(rng, dims);
    const std::size_t n = pick(rng, within(cfg.orders, 1, d, {d}));
    const SpaceSpec spec(d, 2.0);
    const auto xs = random_tuple(spec, n, derive_seed(ts, {1}));
    const auto o = left_g_orthogonalize(xs).orthogonalized;
    const double a = gahler_n_norm_euclidean(xs);
    const double b = gahler_n_norm_euclidean(o);
    const double err = std::abs(a - b) / std::max(a, 1e-300);
    rec.trial(err <= rec.tol(), err, [&] {
      json cx = tuple_instance(xs);
      cx["original_norm"] = a;
      cx["orthogonalized_norm"] = b;
      cx["trial"] = t;
      return cx;
    });
  }
  return {rec.take()};
}

std::vector<PropertyRecord> invariance_general(const SuiteConfig& cfg) {
  Recorder rec(cfg, "prop.gahler.invariance_general");
  const int trials = scaled(cfg, 50);
  const auto dims = within(cfg.dims, 2, 8, {2, 3, 4});
  for (double p : cfg.exponents) {
    if (p == 2.0) continue;
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t ts = derive_seed(cfg.seed, {fnv1a("invariance.general"), static_cast<std::uint64_t>(std::llround(p * 1e6)),
                                                      static_cast<std::uint64_t>(t)});
      std::mt19937_64 rng(ts);
      const std::size_t d = pick(rng, dims);
      const std::size_t n = pick(rng, within(cfg.orders, 2, d, {2}));
      const SpaceSpec spec(d, p);
      const auto xs = random_tuple(spec, n, derive_seed(ts, {1}));
      const auto o = left_g_orthogonalize(xs).orthogonalized;
      NNormConfig nc;
      nc.seed = derive_seed(ts, {2});
      const double a = gahler_n_norm_estimate(xs, nc).value;
      const double b = gahler_n_norm_estimate(o, nc).value;
      const double err = std::abs(a - b) / std::max(a, 1e-300);
      rec.trial(err <= rec.tol(), err, [&] {
        json cx = tuple_instance(xs);
        cx["original_estimate"] = a;
        cx["orthogonalized_estimate"] = b;
        cx["trial"] = t;
        return cx;
      });
    }
  }
  return {rec.take()};
}

struct TensorCell {
  std::size_t d;
  std::size_t n;
};

TensorCell tensor_cell(const SuiteConfig& cfg, std::mt19937_64& rng, std::size_t min_n) {
  const std::size_t d = pick(rng, within(cfg.dims, std::max<std::size_t>(2, min_n), 4, {2, 3, 4}));
  const std::size_t n = pick(rng, within(cfg.orders, min_n, std::min<std::size_t>(3, d), {2}));
  return {d, n};
}

std::vector<PropertyRecord> lemma(const SuiteConfig& cfg) {
  Recorder rec(cfg, "prop.lemma.sandwich");
  const int trials = scaled(cfg, 30);
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t ts = derive_seed(cfg.seed, {fnv1a("lemma"), static_cast<std::uint64_t>(t)});
    std::mt19937_64 rng(ts);
    const TensorCell c = tensor_cell(cfg, rng, 2);
    const MultiFunctional f = generate_antisymmetric_tensor(SpaceSpec(c.d, 2.0), c.n, derive_seed(ts, {1}));
    NNormConfig nc;
    nc.seed = derive_seed(ts, {2});
    const NormPair np = cross_seeded_norms(f, nc);
    const double nn = np.lower.value;
    const double n1 = np.upper.value;
    const double violation = std::max({0.0, nn - n1, n1 - factorial(c.n) * nn});
    rec.trial(violation <= rec.tol(), violation, [&] {
      return json{{"tensor", json_io::to_json(f)}, {"norm_nn", nn}, {"norm_n1", n1}, {"trial", t}};
    });
  }
  return {rec.take()};
}

std::vector<PropertyRecord> corollary(const SuiteConfig& cfg) {
  Recorder rec(cfg, "prop.corollary.sandwich");
  const int trials = scaled(cfg, 30);
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t ts = derive_seed(cfg.seed, {fnv1a("corollary"), static_cast<std::uint64_t>(t)});
    std::mt19937_64 rng(ts);
    const TensorCell c = tensor_cell(cfg, rng, 2);
    const CurriedOperator u = generate_operator(SpaceSpec(c.d, 2.0), c.n, derive_seed(ts, {1}));
    NNormConfig nc;
    nc.seed = derive_seed(ts, {2});
    const NormPair np = cross_seeded_op_norms(u, nc);
    const double g_norm = np.lower.value;
    const double op = np.upper.value;
    const double violation = std::max({0.0, g_norm - op, op - factorial(c.n) * g_norm});
    rec.trial(violation <= rec.tol(), violation, [&] {
      return json{{"operator_tensor", json_io::to_json(uncurry(u))}, {"norm_G", g_norm}, {"norm_op", op}, {"trial", t}};
    });
  }
  return {rec.take()};
}

std::vector<PropertyRecord> currying(const SuiteConfig& cfg) {
  Recorder iso(cfg, "prop.isometry.curry");
  Recorder round(cfg, "prop.theta.roundtrip");
  const int trials = scaled(cfg, 100);
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t ts = derive_seed(cfg.seed, {fnv1a("currying"), static_cast<std::uint64_t>(t)});
    std::mt19937_64 rng(ts);
    const std::size_t d = pick(rng, within(cfg.dims, 1, 4, {2, 3, 4}));
    const std::size_t n = pick(rng, within(cfg.orders, 1, 3, {1, 2, 3}));
    const double p = pick(rng, cfg.exponents);
    const SpaceSpec spec(d, p);
    std::vector<double> coeffs(static_cast<std::size_t>(std::pow(d, n)));
    std::normal_distribution<double> normal;
    for (double& c : coeffs) c = normal(rng);
    const MultiFunctional f(spec, n, coeffs);
    const CurriedOperator u = curry(f);

    NNormConfig nc;
    nc.seed = derive_seed(ts, {1});
    const double a = norm_n1(f, nc).value;
    const double b = op_norm(u, nc).value;
    iso.trial(std::abs(a - b) <= iso.tol(), std::abs(a - b), [&] {
      return json{{"tensor", json_io::to_json(f)}, {"norm_n1", a}, {"norm_op", b}, {"trial", t}};
    });

    const MultiFunctional back = uncurry(u);
    const CurriedOperator again = curry(back);
    double err = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) err = std::max(err, std::abs(back.coeffs()[k] - coeffs[k]));
    for (int s = 0; s < 5; ++s) {
      const Vector z = random_vector(spec, derive_seed(ts, {2, static_cast<std::uint64_t>(s)}));
      const MultiFunctional lhs = again(z);
      const MultiFunctional rhs = u(z);
      for (std::size_t k = 0; k < lhs.coeffs().size(); ++k)
        err = std::max(err, std::abs(lhs.coeffs()[k] - rhs.coeffs()[k]));
    }
    round.trial(err <= round.tol(), err, [&] { return json{{"tensor", json_io::to_json(f)}, {"trial", t}}; });
  }
  return {iso.take(), round.take()};
}

std::vector<PropertyRecord> values(const SuiteConfig& cfg) {
  Recorder det_rec(cfg, "prop.values.det_norms");
  {
    const MultiFunctional det = det_functional(SpaceSpec(2, 2.0));
    NNormConfig nc;
    nc.seed = derive_seed(cfg.seed, {fnv1a("values.det")});
    const double n1 = norm_n1(det, nc).value;
    const double nn = norm_nn(det, nc).value;
    det_rec.trial(std::abs(n1 - 1.0) <= det_rec.tol(), std::abs(n1 - 1.0),
                  [&] { return json{{"mode", "n1"}, {"value", n1}, {"expected", 1.0}}; });
    det_rec.trial(std::abs(nn - 1.0) <= det_rec.tol(), std::abs(nn - 1.0),
                  [&] { return json{{"mode", "nn"}, {"value", nn}, {"expected", 1.0}}; });
  }
  Recorder n1_rec(cfg, "prop.values.gahler_n1");
  const int trials = scaled(cfg, 50);
  for (double p : cfg.exponents) {
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t ts = derive_seed(cfg.seed, {fnv1a("values.n1"), static_cast<std::uint64_t>(std::llround(p * 1e6)),
                                                      static_cast<std::uint64_t>(t)});
      std::mt19937_64 rng(ts);
      const SpaceSpec spec(pick(rng, cfg.dims), p);
      const Vector x = random_vector(spec, derive_seed(ts, {1}));
      NNormConfig nc;
      nc.seed = derive_seed(ts, {2});
      const std::vector<Vector> xs{x};
      const double est = gahler_n_norm_estimate(xs, nc).value;
      const double norm = lp_norm(x);
      const double err = std::abs(est - norm) / std::max(1.0, norm);
      n1_rec.trial(err <= n1_rec.tol(), err, [&] {
        return json{{"x", json_io::to_json(x)}, {"estimate", est}, {"norm", norm}, {"trial", t}};
      });
    }
  }
  return {det_rec.take(), n1_rec.take()};
}

std::vector<PropertyRecord> divergence(const SuiteConfig& cfg) {
  Recorder rec(cfg, "prop.divergence.witness");
  const SpaceSpec spec(2, 2.0);
  const MultiFunctional f = MultiFunctional::outer(spec, {{1.0, 0.0}, {0.0, 1.0}});
  const double eps = 1e-8;
  const Vector x(spec, {1.0, 1.0});
  const std::vector<Vector> xs{x, x + eps * Vector::basis(spec, 1)};
  const double ratio = std::abs(f(xs)) / gahler_n_norm_euclidean(xs);
  const double threshold = rec.tol();
  rec.trial(ratio > threshold, ratio > threshold ? 0.0 : threshold / std::max(ratio, 1e-300), [&] {
    json cx = tuple_instance(xs);
    cx["tensor"] = json_io::to_json(f);
    cx["ratio"] = ratio;
    return cx;
  });
  return {rec.take()};
}

struct GroupEntry {
  std::vector<std::string> ids;
  Group run;
};

const std::vector<GroupEntry>& groups() {
  static const std::vector<GroupEntry> gs{
      {{"prop.axiom.degeneracy", "prop.axiom.permutation", "prop.axiom.homogeneity", "prop.axiom.triangle"}, axioms},
      {{"prop.gahler.euclidean"}, gahler_euclidean},
      {{"prop.sandwich.gahler"}, gahler_sandwich},
      {{"prop.sip.oracle"}, sip_oracle},
      {{"prop.sip.G1", "prop.sip.G2", "prop.sip.G3", "prop.sip.G4", "prop.sip.linearity"}, sip_axioms},
      {{"prop.ortho.left"}, ortho_left},
      {{"prop.ortho.bordered"}, ortho_bordered},
      {{"prop.ortho.classical_gs"}, ortho_classical},
      {{"prop.gahler.invariance_p2"}, invariance_p2},
      {{"prop.gahler.invariance_general"}, invariance_general},
      {{"prop.lemma.sandwich"}, lemma},
      {{"prop.corollary.sandwich"}, corollary},
      {{"prop.isometry.curry", "prop.theta.roundtrip"}, currying},
      {{"prop.values.det_norms", "prop.values.gahler_n1"}, values},
      {{"prop.divergence.witness"}, divergence},
  };
  return gs;
}

bool selected(const SuiteConfig& cfg, const std::string& id) {
  if (cfg.only.empty()) return true;
  return std::any_of(cfg.only.begin(), cfg.only.end(),
                     [&](const std::string& prefix) { return id.rfind(prefix, 0) == 0; });
}

json number_or_inf(double v) { return std::isfinite(v) ? json(v) : json("inf"); }

}  // namespace

std::optional<Mutation> parse_mutation(const std::string& name) {
  if (name == "none") return Mutation::none;
  if (name == "sip.drop_norm_factor") return Mutation::sip_drop_norm_factor;
  if (name == "nnorm.sum_of_norms") return Mutation::nnorm_sum_of_norms;
  return std::nullopt;
}

std::string to_string(Mutation m) {
  switch (m) {
    case Mutation::none: return "none";
    case Mutation::sip_drop_norm_factor: return "sip.drop_norm_factor";
    case Mutation::nnorm_sum_of_norms: return "nnorm.sum_of_norms";
  }
  return "none";
}

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> tols = [] {
    std::map<std::string, double> m;
    for (const PropertyMeta& p : catalogue()) m.emplace(p.id, p.tolerance);
    return m;
  }();
  return tols;
}

const std::vector<std::string>& property_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const PropertyMeta& p : catalogue()) v.emplace_back(p.id);
    return v;
  }();
  return ids;
}

void SuiteConfig::validate() const {
  if (trials_per_property < 1) throw ConfigError("trials_per_property must be >= 1");
  if (dims.empty()) throw ConfigError("dims must not be empty");
  if (orders.empty()) throw ConfigError("orders must not be empty");
  if (exponents.empty()) throw ConfigError("exponents must not be empty");
  for (std::size_t d : dims)
    if (d < 1 || d > 8) throw ConfigError("dimension " + std::to_string(d) + " outside [1, 8]");
  const std::size_t max_d = *std::max_element(dims.begin(), dims.end());
  for (std::size_t n : orders) {
    if (n < 1) throw ConfigError("orders must be >= 1");
    if (n > max_d) {
      throw ConfigError("order " + std::to_string(n) + " exceeds every listed dimension (max " +
                        std::to_string(max_d) + ")");
    }
  }
  for (double p : exponents)
    if (!(p >= 1.0 && p <= 16.0)) throw ConfigError("exponent " + std::to_string(p) + " outside [1, 16]");
  for (const auto& [id, v] : tolerances) {
    if (!default_tolerances().contains(id)) throw ConfigError("unknown property id \"" + id + "\" in tolerances");
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("tolerance for \"" + id + "\" must be finite and >= 0");
  }
  for (const std::string& prefix : only) {
    const bool hit = std::any_of(property_ids().begin(), property_ids().end(),
                                 [&](const std::string& id) { return id.rfind(prefix, 0) == 0; });
    if (!hit) throw ConfigError("--only \"" + prefix + "\" matches no property");
  }
}

double SuiteConfig::tolerance(const std::string& id) const {
  if (auto it = tolerances.find(id); it != tolerances.end()) return it->second;
  return default_tolerances().at(id);
}

bool VerificationReport::all_pass() const {
  return std::all_of(properties.begin(), properties.end(), [](const PropertyRecord& r) { return r.soft || r.ok(); });
}

json VerificationReport::to_json() const {
  json tols = json::object();
  for (const std::string& id : property_ids()) tols[id] = config.tolerance(id);
  json cfg{{"seed", config.seed},
           {"trials_per_property", config.trials_per_property},
           {"dims", config.dims},
           {"orders", config.orders},
           {"exponents", config.exponents},
           {"tolerances", tols},
           {"parallel", config.parallel},
           {"mutation", to_string(config.mutation)},
           {"only", config.only}};
  json props = json::array();
  for (const PropertyRecord& r : properties) {
    props.push_back(json{{"property_id", r.property_id},
                         {"anchor", {{"result", r.result}, {"statement", r.statement}}},
                         {"tolerance", r.tolerance},
                         {"soft", r.soft},
                         {"trials", r.trials},
                         {"passes", r.passes},
                         {"worst_violation", number_or_inf(r.worst_violation)},
                         {"counterexample", r.counterexample ? *r.counterexample : json(nullptr)}});
  }
  return json{{"config", cfg}, {"properties", props}, {"wall_time_ms", wall_time_ms}};
}

VerificationReport run_suite(const SuiteConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();

  std::vector<const GroupEntry*> chosen;
  for (const GroupEntry& gr : groups())
    if (std::any_of(gr.ids.begin(), gr.ids.end(), [&](const std::string& id) { return selected(cfg, id); }))
      chosen.push_back(&gr);

  std::vector<std::vector<PropertyRecord>> results(chosen.size());
  if (cfg.parallel) {
    std::vector<std::future<std::vector<PropertyRecord>>> futures;
    for (const GroupEntry* gr : chosen) futures.push_back(std::async(std::launch::async, gr->run, std::cref(cfg)));
    for (std::size_t i = 0; i < futures.size(); ++i) results[i] = futures[i].get();
  } else {
    for (std::size_t i = 0; i < chosen.size(); ++i) results[i] = chosen[i]->run(cfg);
  }

  VerificationReport rep;
  rep.config = cfg;
  std::map<std::string, PropertyRecord> by_id;
  for (auto& group : results)
    for (PropertyRecord& r : group) by_id.emplace(r.property_id, std::move(r));
  for (const std::string& id : property_ids()) {
    auto it = by_id.find(id);
    if (it != by_id.end() && selected(cfg, id)) rep.properties.push_back(std::move(it->second));
  }
  rep.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::vector<Vector> generate_tuple(const SpaceSpec& spec, std::size_t n, std::uint64_t seed) {
  return random_tuple(spec, n, seed);
}

MultiFunctional generate_antisymmetric_tensor(const SpaceSpec& spec, std::size_t n, std::uint64_t seed) {
  if (n < 1 || n > spec.d) throw ConfigError("antisymmetric tensors need 1 <= n <= d");
  const auto size = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(spec.d), static_cast<double>(n))));
  for (std::uint64_t attempt = 0;; ++attempt) {
    std::mt19937_64 rng(derive_seed(seed, {attempt}));
    std::normal_distribution<double> normal;
    std::vector<double> coeffs(size);
    for (double& c : coeffs) c = normal(rng);
    MultiFunctional f = antisymmetrize(MultiFunctional(spec, n, std::move(coeffs)));
    if (f.frobenius() >= 1e-6) return f;
  }
}

CurriedOperator generate_operator(const SpaceSpec& spec, std::size_t n, std::uint64_t seed) {
  return curry(generate_antisymmetric_tensor(spec, n, seed));
}

Instance generate_instance(InstanceKind kind, const SpaceSpec& spec, std::size_t n, std::uint64_t seed) {
  switch (kind) {
    case InstanceKind::tuple: return generate_tuple(spec, n, seed);
    case InstanceKind::antisymmetric_tensor: return generate_antisymmetric_tensor(spec, n, seed);
    case InstanceKind::operator_: return generate_operator(spec, n, seed);
  }
  throw ConfigError("unknown instance kind");
}

void write_atomically(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw ConfigError("cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw ConfigError("cannot rename onto " + path + ": " + ec.message());
  }
}

}  // namespace ndual
