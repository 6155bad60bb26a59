#pragma once

// Finite-dimensional real l^p spaces: exponents, vectors, dual functionals,
// permutations and seeded instance generators.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "ndual/errors.hpp"

namespace ndual {

inline constexpr double kMaxExponent = 16.0;

/// An l^p exponent together with its Hölder conjugate. p = 1 pairs with
/// q = infinity, which is reported through q_is_infinite().
class PExponent {
 public:
  /// Throws RangeError unless 1 <= p <= 16.
  explicit PExponent(double p);

  double p() const noexcept { return p_; }
  /// +infinity when p == 1.
  double q() const noexcept { return q_; }
  bool q_is_infinite() const noexcept { return p_ == 1.0; }

  friend bool operator==(const PExponent&, const PExponent&) = default;

 private:
  double p_;
  double q_;
};

PExponent dual_exponent(double p);

struct SpaceSpec {
  SpaceSpec(std::size_t dim, double p);
  SpaceSpec(std::size_t dim, PExponent exp);

  std::size_t d;
  PExponent exponent;

  double p() const noexcept { return exponent.p(); }
  friend bool operator==(const SpaceSpec&, const SpaceSpec&) = default;
};

/// A point of R^d tagged with the l^p space it lives in. Entries are finite.
class Vector {
 public:
  Vector(SpaceSpec space, std::vector<double> coords);
  static Vector zero(const SpaceSpec& space);
  static Vector basis(const SpaceSpec& space, std::size_t k);

  const SpaceSpec& space() const noexcept { return space_; }
  std::size_t size() const noexcept { return coords_.size(); }
  std::span<const double> coords() const noexcept { return coords_; }
  double operator[](std::size_t k) const { return coords_[k]; }
  bool is_zero() const noexcept;

  Vector operator+(const Vector& other) const;
  Vector operator-(const Vector& other) const;
  Vector operator-() const;
  friend Vector operator*(double alpha, const Vector& v);

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  SpaceSpec space_;
  std::vector<double> coords_;
};

/// Element of X^(1): acts by the coefficient dot pairing; its norm is the
/// l^q norm of the coefficients.
class DualFunctional {
 public:
  DualFunctional(SpaceSpec space, std::vector<double> coeffs);

  const SpaceSpec& space() const noexcept { return space_; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  double operator()(const Vector& x) const;
  double norm() const;

  DualFunctional operator-() const;

 private:
  SpaceSpec space_;
  std::vector<double> coeffs_;
};

/// A bijection on {0,...,n-1}; images[i] is the image of i.
class Permutation {
 public:
  explicit Permutation(std::vector<std::size_t> images);
  static Permutation identity(std::size_t n);
  static Permutation transposition(std::size_t n, std::size_t a, std::size_t b);

  std::size_t size() const noexcept { return images_.size(); }
  std::size_t operator()(std::size_t i) const { return images_[i]; }
  std::span<const std::size_t> images() const noexcept { return images_; }

  /// (this ∘ other)(i) = this(other(i)).
  Permutation compose(const Permutation& other) const;

  /// Applies σ to a tuple: result[i] = items[σ(i)].
  template <typename T>
  std::vector<T> apply(std::span<const T> items) const {
    std::vector<T> out;
    out.reserve(items.size());
    for (std::size_t i = 0; i < images_.size(); ++i) out.push_back(items[images_[i]]);
    return out;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> images_;
};

int permutation_sign(const Permutation& sigma);

/// Every permutation of {0,...,n-1} in lexicographic order.
std::vector<Permutation> all_permutations(std::size_t n);

std::uint64_t factorial(std::size_t n);

// Norms and Hölder duality -------------------------------------------------

double lp_norm(std::span<const double> x, const PExponent& p);
double lp_norm(const Vector& x);
/// Throws DimensionError when x does not live in `space`.
double lp_norm(const Vector& x, const SpaceSpec& space);
/// l^q norm of coefficients, q = conjugate of p (max-abs for p = 1).
double dual_norm(std::span<const double> coeffs, const PExponent& p);

/// The unit functional attaining ||v||_p at v. Throws ZeroVectorError on 0.
DualFunctional norming_functional(const Vector& v);

/// Dual direction: the unit vector x (||x||_p = 1) with phi(x) = ||phi||_q.
/// For p = 1 the maximizer is the signed coordinate vector at the first
/// index of largest |phi_k|. Throws ZeroVectorError when phi = 0.
Vector norming_vector(std::span<const double> phi, const SpaceSpec& space);

double dot(std::span<const double> a, std::span<const double> b);

/// Throws DimensionError unless every vector lives in one common space.
const SpaceSpec& common_space(std::span<const Vector> xs);

// Seeded generators ---------------------------------------------------------

enum class Conditioning { generic, near_dependent, unit_sphere };

/// Mixes a base seed with stream identifiers (splitmix64).
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts);

/// Deterministic for fixed (spec, seed, conditioning).
///  generic        - i.i.d. standard normal coordinates
///  unit_sphere    - generic, rescaled to ||x||_p = 1
///  near_dependent - amplitude * (u + delta) with u a per-dimension shared
///                   Euclidean unit direction and |delta_k| <= 1e-6
Vector random_vector(const SpaceSpec& spec, std::uint64_t seed,
                     Conditioning conditioning = Conditioning::generic);

std::vector<Vector> random_tuple(const SpaceSpec& spec, std::size_t n, std::uint64_t seed,
                                 Conditioning conditioning = Conditioning::generic);

/// The shared direction used by Conditioning::near_dependent.
Vector near_dependent_base(const SpaceSpec& spec);

inline constexpr double kNearDependentScale = 1e-6;

}  // namespace ndual
