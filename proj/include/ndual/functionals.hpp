#pragma once

// Multilinear n-functionals on l^p as dense order-n coefficient tensors, the
// currying correspondence f <-> u_f, and estimators for the functional norms
//   ||f||_{n,1} = sup |f(x_1..x_n)| / (||x_1|| ... ||x_n||)
//   ||f||_{n,n} = sup |f(x_1..x_n)| / ||x_1, ..., x_n||_G
// together with their operator counterparts ||u||_op and ||u||_G.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ndual/nnorms.hpp"
#include "ndual/spaces.hpp"

namespace ndual {

inline constexpr std::size_t kMaxAntisymmetrizeOrder = 6;

/// f(x_1, ..., x_n) = sum_J coeffs[j_1 ... j_n] x_1[j_1] ... x_n[j_n].
/// Coefficients are row-major by slot: slot 1 is the slowest index. Order 0
/// is a scalar (X^(0) = R).
class MultiFunctional {
 public:
  MultiFunctional(SpaceSpec space, std::size_t order, std::vector<double> coeffs);
  static MultiFunctional zero(const SpaceSpec& space, std::size_t order);
  /// Tensor product of coefficient vectors, one per slot.
  static MultiFunctional outer(const SpaceSpec& space, const std::vector<std::vector<double>>& factors);

  const SpaceSpec& space() const noexcept { return space_; }
  std::size_t order() const noexcept { return order_; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  double coeff(std::span<const std::size_t> index) const;
  double frobenius() const;
  bool is_zero() const noexcept;

  double operator()(std::span<const Vector> xs) const;

  /// Coefficients of the linear functional y -> f(x_1, .., y at `slot`, .., x_n).
  /// xs[slot] is ignored.
  std::vector<double> contract_except(std::span<const Vector> xs, std::size_t slot) const;

  friend bool operator==(const MultiFunctional&, const MultiFunctional&) = default;

 private:
  SpaceSpec space_;
  std::size_t order_;
  std::vector<double> coeffs_;
};

/// Throws ShapeError on order or space mismatch.
double evaluate(const MultiFunctional& f, std::span<const Vector> xs);
MultiFunctional add(const MultiFunctional& f, const MultiFunctional& h);
MultiFunctional scale(double alpha, const MultiFunctional& f);

/// Alt(f) = (1/n!) sum_sigma sgn(sigma) f(x_sigma(1), ..., x_sigma(n)).
/// Throws UnsupportedSizeError when n > 6.
MultiFunctional antisymmetrize(const MultiFunctional& f);

/// Samples random tuples: f must flip sign under a random transposition and
/// vanish on a dependent tuple, both within tol * ||coeffs||_F prod ||x_i||_2.
bool is_antisymmetric(const MultiFunctional& f, int trials = 32, std::uint64_t seed = 0, double tol = 1e-9);

/// The determinant as an order-d functional on R^d: coeffs[J] = sgn(J) for
/// permutations J and 0 on repeated indices. Throws RangeError unless 1 <= d <= 6.
MultiFunctional det_functional(const SpaceSpec& space);

/// An element of B(X, X^(n-1)): z -> u(z), an order-(n-1) functional.
class CurriedOperator {
 public:
  using Map = std::function<MultiFunctional(const Vector&)>;

  /// `order` is n, the order of the uncurried functional.
  CurriedOperator(SpaceSpec space, std::size_t order, Map map);

  const SpaceSpec& space() const noexcept { return space_; }
  std::size_t order() const noexcept { return order_; }

  /// Throws ShapeError when the map returns the wrong order or space.
  MultiFunctional operator()(const Vector& z) const;

 private:
  SpaceSpec space_;
  std::size_t order_;
  Map map_;
};

/// theta: f -> u_f with u_f(z) = f(., ..., ., z). Throws ShapeError for order 0.
CurriedOperator curry(const MultiFunctional& f);

/// theta^-1: f_u(x_1, ..., x_n) = (u(x_n))(x_1, ..., x_{n-1}); the tensor is
/// assembled from u applied to the coordinate basis.
MultiFunctional uncurry(const CurriedOperator& u);

enum class NormMode { n1, nn, op, opG };
std::string to_string(NormMode mode);

struct FunctionalNormEstimate {
  /// Lower bound on the requested norm (for p != 2 modes nn/opG the
  /// denominator is itself estimated, see denominator_exact).
  double value = 0.0;
  std::vector<Vector> witness;
  NormMode mode = NormMode::n1;
  bool denominator_exact = true;
  int restarts = 0;
  int iterations = 0;
  bool converged = false;
};

/// ||f||_{n,1} by alternating maximization over l^p unit vectors: with all
/// slots but j fixed f is the linear form phi_j, maximized by the l^p vector
/// norming phi_j. `seeds` are extra starting tuples tried before the random
/// restarts.
FunctionalNormEstimate norm_n1(const MultiFunctional& f, const NNormConfig& cfg = {},
                               std::span<const std::vector<Vector>> seeds = {});

/// ||f||_{n,n}: maximizes |f(xs)| / D(xs) from seeds and random unit tuples,
/// refined slot by slot (norming step plus, for p != 2, a shrinking
/// coordinate pattern search). D is the Euclidean closed form at p = 2 and
/// the Gähler estimate otherwise. Tuples with D < 1e-10 prod ||x_i|| are
/// skipped. Throws NotAntisymmetricError for non-antisymmetric f and
/// ShapeError for order 0.
FunctionalNormEstimate norm_nn(const MultiFunctional& f, const NNormConfig& cfg = {},
                               std::span<const std::vector<Vector>> seeds = {});

/// |f(xs)| / D(xs) as used by norm_nn; nullopt-like -1 when D is degenerate.
double nn_ratio(const MultiFunctional& f, std::span<const Vector> xs, const NNormConfig& cfg = {});

/// ||u||_op, computed as norm_n1(uncurry(u)).
FunctionalNormEstimate op_norm(const CurriedOperator& u, const NNormConfig& cfg = {},
                               std::span<const std::vector<Vector>> seeds = {});
/// ||u||_G, computed as norm_nn(uncurry(u)).
FunctionalNormEstimate op_norm_G(const CurriedOperator& u, const NNormConfig& cfg = {},
                                 std::span<const std::vector<Vector>> seeds = {});

struct NormPair {
  FunctionalNormEstimate lower;  // ||f||_{n,n} or ||u||_G
  FunctionalNormEstimate upper;  // ||f||_{n,1} or ||u||_op
  int rounds = 0;
};

/// Runs both estimators with each one's witness seeding the other (the
/// ||.||_{n,n} witness is left g-orthogonalized before it seeds the
/// ||.||_{n,1} search) until neither can improve on the other.
NormPair cross_seeded_norms(const MultiFunctional& f, const NNormConfig& cfg = {}, int max_rounds = 4);
NormPair cross_seeded_op_norms(const CurriedOperator& u, const NNormConfig& cfg = {}, int max_rounds = 4);

}  // namespace ndual
