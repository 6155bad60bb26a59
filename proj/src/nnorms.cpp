#include "ndual/nnorms.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "ndual/linalg.hpp"
#include "ndual/ortho.hpp"
#include "ndual/sip.hpp"

namespace ndual {

void NNormConfig::validate() const {
  if (restarts < 1) throw ConfigError("restarts must be >= 1");
  if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (!(conv_tol > 0.0)) throw ConfigError("conv_tol must be > 0");
}

namespace {

std::size_t check_tuple(std::span<const Vector> xs) {
  const SpaceSpec& space = common_space(xs);
  if (xs.size() > space.d) {
    throw RankError("n = " + std::to_string(xs.size()) + " exceeds dimension d = " + std::to_string(space.d));
  }
  if (xs.size() > kMaxDetSize) throw UnsupportedSizeError("n-norms support n <= 8");
  return xs.size();
}

Matrix rows_of(std::span<const Vector> xs) {
  Matrix m(xs.size(), xs.front().size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t k = 0; k < xs[i].size(); ++k) m(i, k) = xs[i][k];
  return m;
}

// M(i, j) = f_j(x_i).
Matrix pairing(std::span<const Vector> xs, std::span<const DualFunctional> fs) {
  Matrix m(xs.size(), fs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < fs.size(); ++j) m(i, j) = fs[j](xs[i]);
  return m;
}

DualFunctional random_unit_functional(const SpaceSpec& space, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> c(space.d);
  double nrm = 0.0;
  do {
    for (double& v : c) v = normal(rng);
    nrm = dual_norm(c, space.exponent);
  } while (nrm == 0.0);
  for (double& v : c) v /= nrm;
  return DualFunctional(space, std::move(c));
}

struct AscentResult {
  std::vector<DualFunctional> functionals;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

AscentResult ascend(std::span<const Vector> xs, std::vector<DualFunctional> fs, const NNormConfig& cfg) {
  const std::size_t n = xs.size();
  Matrix m = pairing(xs, fs);
  double obj = std::abs(det(m));
  AscentResult r;
  r.trace.push_back(obj);
  for (int it = 1; it <= cfg.max_iters; ++it) {
    const double before = obj;
    for (std::size_t j = 0; j < n; ++j) {
      // Slot j: det = f_j(v_j) with v_j = sum_i C_ij x_i.
      std::vector<double> v(xs.front().size(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double c = cofactor(m, i, j);
        if (c == 0.0) continue;
        for (std::size_t k = 0; k < v.size(); ++k) v[k] += c * xs[i][k];
      }
      const Vector vj(xs.front().space(), std::move(v));
      if (vj.is_zero()) continue;  // flat in this slot: keep f_j
      DualFunctional cand = norming_functional(vj);
      Matrix trial = m;
      for (std::size_t i = 0; i < n; ++i) trial(i, j) = cand(xs[i]);
      const double val = std::abs(det(trial));
      // Hölder makes val >= obj in exact arithmetic; the guard keeps the
      // recorded objective monotone under rounding.
      if (val >= obj) {
        fs[j] = std::move(cand);
        m = std::move(trial);
        obj = val;
      }
    }
    r.trace.push_back(obj);
    r.iterations = it;
    if (obj - before <= cfg.conv_tol * obj) {
      r.converged = true;
      break;
    }
  }
  r.functionals = std::move(fs);
  r.value = obj;
  return r;
}

double product_of_norms(std::span<const Vector> xs) {
  double prod = 1.0;
  for (const Vector& x : xs) prod *= lp_norm(x);
  return prod;
}

}  // namespace

double functional_det(std::span<const Vector> xs, std::span<const DualFunctional> fs) {
  if (xs.size() != fs.size()) throw ShapeError("functional_det: need as many functionals as vectors");
  return std::abs(det(pairing(xs, fs)));
}

double lp_n_norm(std::span<const Vector> xs) {
  const std::size_t n = check_tuple(xs);
  const SpaceSpec& space = xs.front().space();
  const std::size_t d = space.d;
  const double p = space.p();

  // Increasing index tuples j_1 < ... < j_n.
  std::vector<double> dets;
  std::vector<std::size_t> idx(n);
  for (std::size_t k = 0; k < n; ++k) idx[k] = k;
  Matrix minor(n, n);
  while (true) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) minor(i, k) = xs[i][idx[k]];
    dets.push_back(std::abs(det(minor)));
    std::size_t pos = n;
    while (pos > 0 && idx[pos - 1] == d - n + pos - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t k = pos; k < n; ++k) idx[k] = idx[k - 1] + 1;
  }
  const double mx = *std::max_element(dets.begin(), dets.end());
  if (mx == 0.0) return 0.0;
  double s = 0.0;
  for (double v : dets) s += std::pow(v / mx, p);
  return mx * std::pow(s, 1.0 / p);
}

double gahler_n_norm_euclidean(std::span<const Vector> xs) {
  const std::size_t n = check_tuple(xs);
  if (xs.front().space().p() != 2.0) throw UnsupportedError("Euclidean Gähler closed form requires p = 2");
  const std::size_t d = xs.front().size();
  // Columns are the x_i; Householder reflections reduce them to R.
  Matrix a(d, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k) a(k, i) = xs[i][k];
  double volume = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    double sq = 0.0;
    for (std::size_t r = col; r < d; ++r) sq += a(r, col) * a(r, col);
    const double len = std::sqrt(sq);
    if (len == 0.0) return 0.0;
    const double alpha = a(col, col) > 0.0 ? -len : len;
    std::vector<double> v(d - col);
    for (std::size_t r = col; r < d; ++r) v[r - col] = a(r, col);
    v[0] -= alpha;
    const double vv = dot(v, v);
    if (vv > 0.0) {
      for (std::size_t c = col; c < n; ++c) {
        double s = 0.0;
        for (std::size_t r = col; r < d; ++r) s += v[r - col] * a(r, c);
        const double f = 2.0 * s / vv;
        for (std::size_t r = col; r < d; ++r) a(r, c) -= f * v[r - col];
      }
    }
    volume *= std::abs(alpha);
  }
  return volume;
}

std::vector<double> gahler_ascent_trace(std::span<const Vector> xs, std::vector<DualFunctional> start,
                                        const NNormConfig& cfg) {
  cfg.validate();
  check_tuple(xs);
  if (start.size() != xs.size()) throw ShapeError("gahler_ascent_trace: start size != n");
  return ascend(xs, std::move(start), cfg).trace;
}

GahlerEstimate gahler_n_norm_estimate(std::span<const Vector> xs, const NNormConfig& cfg) {
  cfg.validate();
  const std::size_t n = check_tuple(xs);
  const SpaceSpec& space = xs.front().space();

  GahlerEstimate est;
  est.upper_bound = static_cast<double>(factorial(n)) * product_of_norms(xs);

  if (numerical_rank(rows_of(xs), 1e-12) < n) {
    est.functionals.assign(n, DualFunctional(space, std::vector<double>(space.d, 0.0)));
    est.converged = true;
    return est;
  }

  std::vector<std::vector<DualFunctional>> starts;
  try {
    const OrthogonalizationResult orth = left_g_orthogonalize(xs);
    est.lower_bound = product_of_norms(orth.orthogonalized);
    if (cfg.witness_seeding) {
      std::vector<DualFunctional> witness;
      for (const Vector& xo : orth.orthogonalized) witness.push_back(g_functional(xo));
      starts.push_back(std::move(witness));
    }
  } catch (const DependentFamilyError&) {
    est.lower_bound = 0.0;
  }

  for (int r = 0; r < cfg.restarts; ++r) {
    std::mt19937_64 rng(derive_seed(cfg.seed, {0x6761686cULL, static_cast<std::uint64_t>(r)}));
    std::vector<DualFunctional> fs;
    for (std::size_t j = 0; j < n; ++j) fs.push_back(random_unit_functional(space, rng));
    starts.push_back(std::move(fs));
  }

  bool have_best = false;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    AscentResult run = ascend(xs, starts[s], cfg);
    // A random start on which every slot is flat cannot move; redraw it.
    const bool random_start = !(cfg.witness_seeding && est.lower_bound > 0.0 && s == 0);
    for (int attempt = 1; random_start && run.value == 0.0 && attempt <= 16; ++attempt) {
      std::mt19937_64 rng(derive_seed(cfg.seed, {0x72657472ULL, s, static_cast<std::uint64_t>(attempt)}));
      std::vector<DualFunctional> fs;
      for (std::size_t j = 0; j < n; ++j) fs.push_back(random_unit_functional(space, rng));
      run = ascend(xs, std::move(fs), cfg);
    }
    est.iterations_per_restart.push_back(run.iterations);
    if (!have_best || run.value > est.value) {
      have_best = true;
      est.value = run.value;
      est.functionals = std::move(run.functionals);
      est.converged = run.converged;
      est.best_start = static_cast<int>(s);
    }
  }

  const double slack = 1e-8;
  if (est.value > est.upper_bound + slack ||
      (cfg.witness_seeding && est.value < est.lower_bound - slack)) {
    throw std::logic_error("Gähler estimate " + std::to_string(est.value) + " escaped its bounds [" +
                           std::to_string(est.lower_bound) + ", " + std::to_string(est.upper_bound) + "]");
  }
  return est;
}

SandwichBounds sandwich_bounds(std::span<const Vector> xs) {
  const std::size_t n = check_tuple(xs);
  SandwichBounds b;
  b.upper = static_cast<double>(factorial(n)) * product_of_norms(xs);
  try {
    b.lower = product_of_norms(left_g_orthogonalize(xs).orthogonalized);
  } catch (const DependentFamilyError&) {
    b.lower = 0.0;
  }
  return b;
}

AxiomReport check_n_norm_axioms(const NNormEvaluator& norm, const SpaceSpec& spec, std::size_t n,
                                int trials, std::uint64_t seed, const AxiomTolerances& tol) {
  if (n == 0 || n > spec.d) throw ConfigError("axiom check requires 1 <= n <= d");
  AxiomReport rep;
  auto record = [](AxiomStats& st, bool pass, double violation, std::uint64_t trial_seed) {
    const int trial = st.trials++;
    if (pass) {
      ++st.passes;
    } else if (st.first_failure_trial < 0) {
      st.first_failure_seed = static_cast<std::int64_t>(trial_seed & 0x7FFFFFFFFFFFFFFFULL);
      st.first_failure_trial = trial;
    }
    st.worst_violation = std::max(st.worst_violation, violation);
  };

  for (int t = 0; t < trials; ++t) {
    const std::uint64_t ts = derive_seed(seed, {static_cast<std::uint64_t>(t)});
    std::mt19937_64 rng(derive_seed(ts, {0x61786fULL}));
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    const std::vector<Vector> xs = random_tuple(spec, n, ts);
    const double base = norm(xs);

    // (1) zero exactly on dependent tuples.
    {
      std::vector<Vector> dep = xs;
      const std::size_t slot = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
      Vector combo = Vector::zero(spec);
      for (std::size_t i = 0; i < n; ++i)
        if (i != slot) combo = combo + coef(rng) * xs[i];
      dep[slot] = combo;
      const double vd = std::abs(norm(dep));
      const bool pass = vd <= tol.degeneracy && base > tol.degeneracy;
      record(rep.degeneracy, pass, std::max(vd, base > tol.degeneracy ? 0.0 : tol.degeneracy - base), ts);
    }
    // (2) permutation invariance.
    {
      std::vector<std::size_t> im(n);
      for (std::size_t i = 0; i < n; ++i) im[i] = i;
      std::shuffle(im.begin(), im.end(), rng);
      const Permutation sigma(im);
      const double vp = norm(sigma.apply<Vector>(xs));
      const double err = std::abs(vp - base) / std::max(1.0, std::abs(base));
      record(rep.permutation, err <= tol.permutation, err, ts);
    }
    // (3) homogeneity in the first slot.
    {
      const double alpha = 3.0 * coef(rng);
      std::vector<Vector> scaled = xs;
      scaled[0] = alpha * xs[0];
      const double expect = std::abs(alpha) * base;
      const double err = std::abs(norm(scaled) - expect) / std::max(1.0, expect);
      record(rep.homogeneity, err <= tol.homogeneity, err, ts);
    }
    // (4) triangle inequality in the first slot.
    {
      const Vector extra = random_vector(spec, derive_seed(ts, {0x747269ULL}));
      std::vector<Vector> sum = xs;
      std::vector<Vector> other = xs;
      sum[0] = xs[0] + extra;
      other[0] = extra;
      const double rhs = base + norm(other);
      const double excess = std::max(0.0, norm(sum) - rhs) / std::max(1.0, rhs);
      record(rep.triangle, excess <= tol.triangle, excess, ts);
    }
  }
  return rep;
}

}  // namespace ndual
