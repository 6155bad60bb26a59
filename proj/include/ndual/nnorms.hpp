#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "ndual/spaces.hpp"

namespace ndual {

struct NNormConfig {
  int restarts = 8;
  int max_iters = 100;
  double conv_tol = 1e-10;
  std::uint64_t seed = 0;
  bool witness_seeding = true;

  /// Throws ConfigError on restarts < 1, max_iters < 1 or conv_tol <= 0.
  void validate() const;
};

/// ( sum_{j_1 < ... < j_n} |det(x_i[j_k])|^p )^(1/p), which equals the
/// all-index-tuples formula with its 1/n! factor.
/// Throws RankError when n > d, DimensionError on mixed spaces.
double lp_n_norm(std::span<const Vector> xs);

/// sqrt(det of the Euclidean Gram matrix), computed as |prod R_ii| of a
/// Householder QR so that exactly dependent tuples give (near) zero.
/// Throws UnsupportedError outside p = 2.
double gahler_n_norm_euclidean(std::span<const Vector> xs);

struct GahlerEstimate {
  /// |det[f_j(x_i)]| at `functionals`; a lower bound on the Gähler n-norm.
  double value = 0.0;
  std::vector<DualFunctional> functionals;
  /// prod ||x_i°|| (0 for numerically dependent input).
  double lower_bound = 0.0;
  /// n! prod ||x_i||.
  double upper_bound = 0.0;
  std::vector<int> iterations_per_restart;
  bool converged = false;
  /// Index of the start that produced `value`; the witness start, when
  /// enabled, is index 0.
  int best_start = -1;
};

/// Alternating maximization of |det[f_j(x_i)]| over the dual unit balls.
///
/// With every slot but j fixed, det = f_j(v_j) where v_j = sum_i C_ij x_i
/// (C the cofactor matrix), so the slot is solved exactly by the norming
/// functional of v_j. Starts: the witness g-functionals of the left
/// g-orthogonal sequence (when enabled) followed by `restarts` random ones.
/// Throws RankError when n > d; numerically dependent input (relative rank
/// tolerance 1e-12) returns value 0 with converged = true.
GahlerEstimate gahler_n_norm_estimate(std::span<const Vector> xs, const NNormConfig& cfg = {});

/// Per-sweep objective values of a single alternating run from `start`,
/// exposed for monotonicity tests. The first entry is the starting |det|.
std::vector<double> gahler_ascent_trace(std::span<const Vector> xs,
                                        std::vector<DualFunctional> start,
                                        const NNormConfig& cfg = {});

/// |det[f_j(x_i)]|.
double functional_det(std::span<const Vector> xs, std::span<const DualFunctional> fs);

struct SandwichBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// lower = prod ||x_i°||_p (0 when dependent), upper = n! prod ||x_i||_p.
SandwichBounds sandwich_bounds(std::span<const Vector> xs);

using NNormEvaluator = std::function<double(std::span<const Vector>)>;

struct AxiomTolerances {
  double degeneracy = 1e-9;     // absolute
  double permutation = 1e-12;   // relative
  double homogeneity = 1e-10;   // relative
  double triangle = 1e-10;      // slack, relative to the right-hand side

  static AxiomTolerances uniform(double tol) { return {tol, tol, tol, tol}; }
};

struct AxiomStats {
  int trials = 0;
  int passes = 0;
  double worst_violation = 0.0;
  /// Seed of the first failing trial, if any.
  std::int64_t first_failure_seed = -1;
  /// Index of the first failing trial; its tuple is
  /// random_tuple(spec, n, derive_seed(seed, {trial})).
  int first_failure_trial = -1;

  bool ok() const noexcept { return passes == trials; }
};

struct AxiomReport {
  AxiomStats degeneracy;
  AxiomStats permutation;
  AxiomStats homogeneity;
  AxiomStats triangle;

  bool all() const noexcept {
    return degeneracy.ok() && permutation.ok() && homogeneity.ok() && triangle.ok();
  }
};

/// Randomized checks of the four n-norm axioms on `trials` seeded tuples:
/// (1) dependent tuples give ~0 and generic ones a positive value,
/// (2) permutation invariance, (3) homogeneity and (4) the triangle
/// inequality in the first slot.
AxiomReport check_n_norm_axioms(const NNormEvaluator& norm, const SpaceSpec& spec, std::size_t n,
                                int trials, std::uint64_t seed, const AxiomTolerances& tol = {});

}  // namespace ndual
