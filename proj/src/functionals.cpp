#include "ndual/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ndual/ortho.hpp"

namespace ndual {

namespace {

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

// Multi-index of a flat row-major position.
void unflatten(std::size_t flat, std::size_t d, std::vector<std::size_t>& idx) {
  for (std::size_t s = idx.size(); s-- > 0;) {
    idx[s] = flat % d;
    flat /= d;
  }
}

std::size_t flatten(std::span<const std::size_t> idx, std::size_t d) {
  std::size_t flat = 0;
  for (std::size_t v : idx) flat = flat * d + v;
  return flat;
}

double product_of_norms(std::span<const Vector> xs) {
  double prod = 1.0;
  for (const Vector& x : xs) prod *= lp_norm(x);
  return prod;
}

double product_of_euclidean_norms(std::span<const Vector> xs) {
  double prod = 1.0;
  for (const Vector& x : xs) prod *= std::sqrt(dot(x.coords(), x.coords()));
  return prod;
}

void require_tuple(const MultiFunctional& f, std::span<const Vector> xs) {
  if (xs.size() != f.order()) throw ShapeError("functional of order " + std::to_string(f.order()) +
                                               " applied to " + std::to_string(xs.size()) + " vectors");
  for (const Vector& x : xs)
    if (!(x.space() == f.space())) throw ShapeError("vector and functional live in different spaces");
}

// Rescales each vector to unit l^p norm; false if any vector is zero.
bool normalize_tuple(std::vector<Vector>& xs) {
  for (Vector& x : xs) {
    const double n = lp_norm(x);
    if (n == 0.0) return false;
    x = (1.0 / n) * x;
  }
  return true;
}

std::vector<Vector> random_unit_tuple(const SpaceSpec& space, std::size_t n, std::uint64_t seed) {
  return random_tuple(space, n, seed, Conditioning::unit_sphere);
}

NNormConfig denominator_config(const NNormConfig& cfg) {
  NNormConfig d;
  d.restarts = 2;
  d.max_iters = 50;
  d.conv_tol = 1e-10;
  d.seed = cfg.seed;
  d.witness_seeding = true;
  return d;
}

std::vector<std::vector<Vector>> usable_seeds(const MultiFunctional& f, std::span<const std::vector<Vector>> seeds) {
  std::vector<std::vector<Vector>> out;
  for (const auto& s : seeds) {
    if (s.size() != f.order()) continue;
    if (!std::all_of(s.begin(), s.end(), [&](const Vector& v) { return v.space() == f.space(); })) continue;
    std::vector<Vector> copy = s;
    if (normalize_tuple(copy)) out.push_back(std::move(copy));
  }
  return out;
}

}  // namespace

// MultiFunctional ----------------------------------------------------------

MultiFunctional::MultiFunctional(SpaceSpec space, std::size_t order, std::vector<double> coeffs)
    : space_(space), order_(order), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != ipow(space_.d, order_)) {
    throw ShapeError("order-" + std::to_string(order_) + " tensor over d = " + std::to_string(space_.d) +
                     " needs " + std::to_string(ipow(space_.d, order_)) + " coefficients");
  }
  for (double v : coeffs_)
    if (!std::isfinite(v)) throw ValueError("tensor coefficients must be finite");
}

MultiFunctional MultiFunctional::zero(const SpaceSpec& space, std::size_t order) {
  return MultiFunctional(space, order, std::vector<double>(ipow(space.d, order), 0.0));
}

MultiFunctional MultiFunctional::outer(const SpaceSpec& space, const std::vector<std::vector<double>>& factors) {
  std::vector<double> c{1.0};
  for (const auto& f : factors) {
    if (f.size() != space.d) throw ShapeError("outer: factor length != d");
    std::vector<double> next;
    next.reserve(c.size() * f.size());
    for (double a : c)
      for (double b : f) next.push_back(a * b);
    c = std::move(next);
  }
  return MultiFunctional(space, factors.size(), std::move(c));
}

double MultiFunctional::coeff(std::span<const std::size_t> index) const {
  if (index.size() != order_) throw ShapeError("coefficient index has wrong length");
  for (std::size_t v : index)
    if (v >= space_.d) throw ShapeError("coefficient index out of range");
  return coeffs_[flatten(index, space_.d)];
}

double MultiFunctional::frobenius() const { return std::sqrt(dot(coeffs_, coeffs_)); }

bool MultiFunctional::is_zero() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](double v) { return v == 0.0; });
}

std::vector<double> MultiFunctional::contract_except(std::span<const Vector> xs, std::size_t slot) const {
  require_tuple(*this, xs);
  if (slot >= order_) throw ShapeError("contract_except: slot out of range");
  const std::size_t d = space_.d;
  std::vector<double> t = coeffs_;
  // Trailing slots vary fastest.
  for (std::size_t s = order_; s-- > slot + 1;) {
    std::vector<double> next(t.size() / d, 0.0);
    for (std::size_t i = 0; i < next.size(); ++i) {
      double acc = 0.0;
      for (std::size_t k = 0; k < d; ++k) acc += t[i * d + k] * xs[s][k];
      next[i] = acc;
    }
    t = std::move(next);
  }
  for (std::size_t s = 0; s < slot; ++s) {
    const std::size_t rest = t.size() / d;
    std::vector<double> next(rest, 0.0);
    for (std::size_t k = 0; k < d; ++k) {
      const double w = xs[s][k];
      if (w == 0.0) continue;
      for (std::size_t r = 0; r < rest; ++r) next[r] += w * t[k * rest + r];
    }
    t = std::move(next);
  }
  return t;
}

double MultiFunctional::operator()(std::span<const Vector> xs) const {
  require_tuple(*this, xs);
  if (order_ == 0) return coeffs_.front();
  const std::vector<double> phi = contract_except(xs, order_ - 1);
  return dot(phi, xs[order_ - 1].coords());
}

double evaluate(const MultiFunctional& f, std::span<const Vector> xs) { return f(xs); }

MultiFunctional add(const MultiFunctional& f, const MultiFunctional& h) {
  if (f.order() != h.order() || !(f.space() == h.space())) throw ShapeError("add: order or space mismatch");
  std::vector<double> c(f.coeffs().begin(), f.coeffs().end());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += h.coeffs()[i];
  return MultiFunctional(f.space(), f.order(), std::move(c));
}

MultiFunctional scale(double alpha, const MultiFunctional& f) {
  std::vector<double> c(f.coeffs().begin(), f.coeffs().end());
  for (double& v : c) v *= alpha;
  return MultiFunctional(f.space(), f.order(), std::move(c));
}

MultiFunctional antisymmetrize(const MultiFunctional& f) {
  const std::size_t n = f.order();
  if (n > kMaxAntisymmetrizeOrder) throw UnsupportedSizeError("antisymmetrize supports order <= 6");
  const std::size_t d = f.space().d;
  const std::vector<Permutation> perms = all_permutations(n);
  std::vector<int> signs;
  for (const Permutation& s : perms) signs.push_back(permutation_sign(s));
  const double inv = 1.0 / static_cast<double>(factorial(n));

  // Alt(c)[m] = (1/n!) sum_sigma sgn(sigma) c[m_sigma(1), ..., m_sigma(n)].
  std::vector<double> out(f.coeffs().size(), 0.0);
  std::vector<std::size_t> m(n);
  std::vector<std::size_t> pm(n);
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    unflatten(flat, d, m);
    double acc = 0.0;
    for (std::size_t s = 0; s < perms.size(); ++s) {
      for (std::size_t k = 0; k < n; ++k) pm[k] = m[perms[s](k)];
      acc += signs[s] * f.coeffs()[flatten(pm, d)];
    }
    out[flat] = acc * inv;
  }
  return MultiFunctional(f.space(), n, std::move(out));
}

bool is_antisymmetric(const MultiFunctional& f, int trials, std::uint64_t seed, double tol) {
  const std::size_t n = f.order();
  if (n <= 1 || f.is_zero()) return true;
  const double fro = f.frobenius();
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t ts = derive_seed(seed, {0x616e7469ULL, static_cast<std::uint64_t>(t)});
    std::mt19937_64 rng(ts);
    std::vector<Vector> xs = random_tuple(f.space(), n, ts);
    const double scale_ = fro * product_of_euclidean_norms(xs);

    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    const std::size_t a = pick(rng);
    std::size_t b = pick(rng);
    if (b == a) b = (a + 1) % n;
    std::vector<Vector> swapped = xs;
    std::swap(swapped[a], swapped[b]);
    if (std::abs(f(xs) + f(swapped)) > tol * scale_) return false;

    // Dependent tuple: slot a becomes a combination of the others.
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    Vector combo = Vector::zero(f.space());
    for (std::size_t i = 0; i < n; ++i)
      if (i != a) combo = combo + coef(rng) * xs[i];
    xs[a] = combo;
    if (std::abs(f(xs)) > tol * fro * product_of_euclidean_norms(xs)) return false;
  }
  return true;
}

MultiFunctional det_functional(const SpaceSpec& space) {
  const std::size_t d = space.d;
  if (d < 1 || d > kMaxAntisymmetrizeOrder) throw RangeError("det_functional supports 1 <= d <= 6");
  std::vector<double> c(ipow(d, d), 0.0);
  for (const Permutation& s : all_permutations(d)) {
    std::vector<std::size_t> idx(s.images().begin(), s.images().end());
    c[flatten(idx, d)] = permutation_sign(s);
  }
  return MultiFunctional(space, d, std::move(c));
}

// Currying -----------------------------------------------------------------

CurriedOperator::CurriedOperator(SpaceSpec space, std::size_t order, Map map)
    : space_(space), order_(order), map_(std::move(map)) {
  if (order_ == 0) throw ShapeError("a curried operator needs order >= 1");
  if (!map_) throw ShapeError("curried operator without a map");
}

MultiFunctional CurriedOperator::operator()(const Vector& z) const {
  if (!(z.space() == space_)) throw ShapeError("operator argument lives in a different space");
  MultiFunctional out = map_(z);
  if (out.order() + 1 != order_ || !(out.space() == space_)) {
    throw ShapeError("operator returned an order-" + std::to_string(out.order()) + " functional, expected " +
                     std::to_string(order_ - 1));
  }
  return out;
}

CurriedOperator curry(const MultiFunctional& f) {
  if (f.order() == 0) throw ShapeError("cannot curry an order-0 functional");
  return CurriedOperator(f.space(), f.order(), [f](const Vector& z) {
    const std::size_t d = f.space().d;
    std::vector<double> c(f.coeffs().size() / d, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      double acc = 0.0;
      for (std::size_t k = 0; k < d; ++k) acc += f.coeffs()[i * d + k] * z[k];
      c[i] = acc;
    }
    return MultiFunctional(f.space(), f.order() - 1, std::move(c));
  });
}

MultiFunctional uncurry(const CurriedOperator& u) {
  const std::size_t d = u.space().d;
  const std::size_t n = u.order();
  std::vector<double> c(ipow(d, n), 0.0);
  const std::size_t inner = ipow(d, n - 1);
  for (std::size_t k = 0; k < d; ++k) {
    const MultiFunctional uk = u(Vector::basis(u.space(), k));
    for (std::size_t i = 0; i < inner; ++i) c[i * d + k] = uk.coeffs()[i];
  }
  return MultiFunctional(u.space(), n, std::move(c));
}

// Norm estimators ----------------------------------------------------------

std::string to_string(NormMode mode) {
  switch (mode) {
    case NormMode::n1: return "n1";
    case NormMode::nn: return "nn";
    case NormMode::op: return "op";
    case NormMode::opG: return "opG";
  }
  return "?";
}

namespace {

struct N1Run {
  std::vector<Vector> xs;
  double obj = 0.0;
  int iterations = 0;
  bool converged = false;
};

N1Run ascend_n1(const MultiFunctional& f, std::vector<Vector> xs, const NNormConfig& cfg) {
  N1Run r;
  double obj = std::abs(f(xs));
  for (int it = 1; it <= cfg.max_iters; ++it) {
    const double before = obj;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      const std::vector<double> phi = f.contract_except(xs, j);
      if (std::all_of(phi.begin(), phi.end(), [](double v) { return v == 0.0; })) continue;
      Vector cand = norming_vector(phi, f.space());
      const double val = std::abs(dot(phi, cand.coords()));
      if (val >= obj) {
        xs[j] = std::move(cand);
        obj = val;
      }
    }
    r.iterations = it;
    if (obj - before <= cfg.conv_tol * obj) {
      r.converged = true;
      break;
    }
  }
  r.xs = std::move(xs);
  r.obj = obj;
  return r;
}

// (e_{i_1}, ..., e_{i_n}) at the largest |c_{i_1..i_n}|; the maximizer at p = 1.
std::vector<Vector> largest_coefficient_vertex(const MultiFunctional& f) {
  const auto& c = f.coeffs();
  std::size_t idx = 0;
  for (std::size_t k = 1; k < c.size(); ++k)
    if (std::abs(c[k]) > std::abs(c[idx])) idx = k;
  const std::size_t d = f.space().d;
  std::vector<Vector> xs(f.order(), Vector::zero(f.space()));
  for (std::size_t j = f.order(); j-- > 0;) {
    xs[j] = Vector::basis(f.space(), idx % d);
    idx /= d;
  }
  return xs;
}

}  // namespace

FunctionalNormEstimate norm_n1(const MultiFunctional& f, const NNormConfig& cfg,
                               std::span<const std::vector<Vector>> seeds) {
  cfg.validate();
  FunctionalNormEstimate est;
  est.mode = NormMode::n1;
  const std::size_t n = f.order();
  if (n == 0) {
    est.value = std::abs(f.coeffs().front());
    est.converged = true;
    return est;
  }

  std::vector<std::vector<Vector>> starts = usable_seeds(f, seeds);
  starts.push_back(largest_coefficient_vertex(f));
  for (int r = 0; r < cfg.restarts; ++r) {
    starts.push_back(random_unit_tuple(f.space(), n, derive_seed(cfg.seed, {0x6e31ULL, static_cast<std::uint64_t>(r)})));
  }

  double best_obj = -1.0;
  for (auto& start : starts) {
    N1Run run = ascend_n1(f, std::move(start), cfg);
    ++est.restarts;
    est.iterations += run.iterations;
    if (run.obj > best_obj) {
      best_obj = run.obj;
      est.witness = std::move(run.xs);
      est.converged = run.converged;
    }
  }
  est.value = std::abs(f(est.witness)) / product_of_norms(est.witness);
  return est;
}

double nn_ratio(const MultiFunctional& f, std::span<const Vector> xs, const NNormConfig& cfg) {
  require_tuple(f, xs);
  const double prod = product_of_norms(xs);
  if (prod == 0.0) return -1.0;
  const double denom = f.space().p() == 2.0 ? gahler_n_norm_euclidean(xs)
                                             : gahler_n_norm_estimate(xs, denominator_config(cfg)).value;
  if (denom < 1e-10 * prod) return -1.0;
  return std::abs(f(xs)) / denom;
}

FunctionalNormEstimate norm_nn(const MultiFunctional& f, const NNormConfig& cfg,
                               std::span<const std::vector<Vector>> seeds) {
  cfg.validate();
  const std::size_t n = f.order();
  if (n == 0) throw ShapeError("norm_nn needs order >= 1");
  if (!is_antisymmetric(f, 32, cfg.seed)) {
    throw NotAntisymmetricError("||f||_{n,n} is finite only for antisymmetric f");
  }
  const SpaceSpec& space = f.space();
  const bool euclid = space.p() == 2.0;
  FunctionalNormEstimate est;
  est.mode = NormMode::nn;
  est.denominator_exact = euclid;
  if (f.is_zero()) {
    est.converged = true;
    if (n <= space.d)
      for (std::size_t i = 0; i < n; ++i) est.witness.push_back(Vector::basis(space, i));
    return est;
  }
  if (n > space.d) throw RankError("no independent tuple exists for n > d");

  std::vector<std::vector<Vector>> starts = usable_seeds(f, seeds);
  for (int r = 0; r < cfg.restarts; ++r) {
    std::vector<Vector> xs;
    for (int attempt = 0; attempt < 8; ++attempt) {
      xs = random_unit_tuple(space, n, derive_seed(cfg.seed, {0x6e6eULL, static_cast<std::uint64_t>(r),
                                                              static_cast<std::uint64_t>(attempt)}));
      if (nn_ratio(f, xs, cfg) >= 0.0) break;
    }
    starts.push_back(std::move(xs));
  }

  double best = -1.0;
  for (auto& start : starts) {
    std::vector<Vector> xs = std::move(start);
    double val = nn_ratio(f, xs, cfg);
    if (val < 0.0) continue;
    ++est.restarts;
    bool converged = false;
    double step = 0.25;
    int it = 1;
    for (; it <= cfg.max_iters; ++it) {
      const double before = val;
      for (std::size_t j = 0; j < n; ++j) {
        const std::vector<double> phi = f.contract_except(xs, j);
        if (std::all_of(phi.begin(), phi.end(), [](double v) { return v == 0.0; })) continue;
        std::vector<Vector> trial = xs;
        trial[j] = norming_vector(phi, space);
        const double r = nn_ratio(f, trial, cfg);
        if (r > val) {
          xs = std::move(trial);
          val = r;
        }
      }
      if (!euclid) {
        bool moved = false;
        for (std::size_t j = 0; j < n; ++j) {
          for (std::size_t k = 0; k < space.d; ++k) {
            for (double dir : {1.0, -1.0}) {
              std::vector<Vector> trial = xs;
              trial[j] = trial[j] + (dir * step) * Vector::basis(space, k);
              if (!normalize_tuple(trial)) continue;
              const double r = nn_ratio(f, trial, cfg);
              if (r > val) {
                xs = std::move(trial);
                val = r;
                moved = true;
              }
            }
          }
        }
        if (!moved) step *= 0.5;
        if (step < 1e-6 && val - before <= cfg.conv_tol * val) {
          converged = true;
          break;
        }
      } else if (val - before <= cfg.conv_tol * val) {
        converged = true;
        break;
      }
    }
    est.iterations += std::min(it, cfg.max_iters);
    if (val > best) {
      best = val;
      est.witness = xs;
      est.converged = converged;
    }
  }
  est.value = best < 0.0 ? 0.0 : nn_ratio(f, est.witness, cfg);
  return est;
}

FunctionalNormEstimate op_norm(const CurriedOperator& u, const NNormConfig& cfg,
                               std::span<const std::vector<Vector>> seeds) {
  FunctionalNormEstimate est = norm_n1(uncurry(u), cfg, seeds);
  est.mode = NormMode::op;
  return est;
}

FunctionalNormEstimate op_norm_G(const CurriedOperator& u, const NNormConfig& cfg,
                                 std::span<const std::vector<Vector>> seeds) {
  FunctionalNormEstimate est = norm_nn(uncurry(u), cfg, seeds);
  est.mode = NormMode::opG;
  return est;
}

NormPair cross_seeded_norms(const MultiFunctional& f, const NNormConfig& cfg, int max_rounds) {
  const double nfact = static_cast<double>(factorial(f.order()));
  NormPair r;
  r.upper = norm_n1(f, cfg);
  {
    const std::vector<std::vector<Vector>> s{r.upper.witness};
    r.lower = norm_nn(f, cfg, s);
  }
  for (int round = 1; round <= max_rounds; ++round) {
    r.rounds = round;
    std::vector<std::vector<Vector>> s{r.upper.witness};
    if (!r.lower.witness.empty()) {
      try {
        s.push_back(left_g_orthogonalize(r.lower.witness).orthogonalized);
      } catch (const DependentFamilyError&) {
        s.push_back(r.lower.witness);
      }
    }
    r.upper = norm_n1(f, cfg, s);
    const double eps = 1e-12 * std::max(1.0, r.upper.value);
    if (r.upper.value >= r.lower.value - eps && r.upper.value <= nfact * r.lower.value + eps) break;
    const std::vector<std::vector<Vector>> t{r.lower.witness, r.upper.witness};
    r.lower = norm_nn(f, cfg, t);
  }
  return r;
}

NormPair cross_seeded_op_norms(const CurriedOperator& u, const NNormConfig& cfg, int max_rounds) {
  NormPair r = cross_seeded_norms(uncurry(u), cfg, max_rounds);
  r.lower.mode = NormMode::opG;
  r.upper.mode = NormMode::op;
  return r;
}

}  // namespace ndual
