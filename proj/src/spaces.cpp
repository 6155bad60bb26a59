#include "ndual/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

namespace ndual {

namespace {

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// (sum |x_k|^r)^(1/r), scaled by the max entry so large r stays finite.
double power_norm(std::span<const double> x, double r) {
  double mx = 0.0;
  for (double v : x) mx = std::max(mx, std::abs(v));
  if (mx == 0.0) return 0.0;
  if (r == 1.0) {
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return s;
  }
  double s = 0.0;
  if (r == 2.0) {
    for (double v : x) s += (v / mx) * (v / mx);
    return mx * std::sqrt(s);
  }
  for (double v : x) s += std::pow(std::abs(v) / mx, r);
  return mx * std::pow(s, 1.0 / r);
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void require_same_space(const SpaceSpec& a, const SpaceSpec& b, const char* what) {
  if (!(a == b)) throw DimensionError(std::string(what) + ": vectors live in different spaces");
}

}  // namespace

// PExponent / SpaceSpec ----------------------------------------------------

PExponent::PExponent(double p) : p_(p), q_(0.0) {
  if (!(p >= 1.0 && p <= kMaxExponent)) {
    throw RangeError("exponent p = " + std::to_string(p) + " outside [1, 16]");
  }
  q_ = p == 1.0 ? std::numeric_limits<double>::infinity() : p / (p - 1.0);
}

PExponent dual_exponent(double p) { return PExponent(p); }

SpaceSpec::SpaceSpec(std::size_t dim, double p) : SpaceSpec(dim, PExponent(p)) {}

SpaceSpec::SpaceSpec(std::size_t dim, PExponent exp) : d(dim), exponent(exp) {
  if (dim == 0) throw DimensionError("space dimension must be at least 1");
}

// Vector -------------------------------------------------------------------

Vector::Vector(SpaceSpec space, std::vector<double> coords)
    : space_(space), coords_(std::move(coords)) {
  if (coords_.size() != space_.d) {
    throw DimensionError("vector has " + std::to_string(coords_.size()) +
                         " coordinates, space has d = " + std::to_string(space_.d));
  }
  for (double v : coords_)
    if (!std::isfinite(v)) throw ValueError("vector coordinates must be finite");
}

Vector Vector::zero(const SpaceSpec& space) { return Vector(space, std::vector<double>(space.d, 0.0)); }

Vector Vector::basis(const SpaceSpec& space, std::size_t k) {
  if (k >= space.d) throw DimensionError("basis index out of range");
  std::vector<double> c(space.d, 0.0);
  c[k] = 1.0;
  return Vector(space, std::move(c));
}

bool Vector::is_zero() const noexcept {
  return std::all_of(coords_.begin(), coords_.end(), [](double v) { return v == 0.0; });
}

Vector Vector::operator+(const Vector& other) const {
  require_same_space(space_, other.space_, "vector sum");
  std::vector<double> c(coords_);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] += other.coords_[k];
  return Vector(space_, std::move(c));
}

Vector Vector::operator-(const Vector& other) const {
  require_same_space(space_, other.space_, "vector difference");
  std::vector<double> c(coords_);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] -= other.coords_[k];
  return Vector(space_, std::move(c));
}

Vector Vector::operator-() const { return -1.0 * *this; }

Vector operator*(double alpha, const Vector& v) {
  std::vector<double> c(v.coords_);
  for (double& x : c) x *= alpha;
  return Vector(v.space_, std::move(c));
}

// DualFunctional -----------------------------------------------------------

DualFunctional::DualFunctional(SpaceSpec space, std::vector<double> coeffs)
    : space_(space), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != space_.d) throw DimensionError("functional coefficient count != d");
  for (double v : coeffs_)
    if (!std::isfinite(v)) throw ValueError("functional coefficients must be finite");
}

double DualFunctional::operator()(const Vector& x) const {
  require_same_space(space_, x.space(), "functional evaluation");
  return dot(coeffs_, x.coords());
}

double DualFunctional::norm() const { return dual_norm(coeffs_, space_.exponent); }

DualFunctional DualFunctional::operator-() const {
  std::vector<double> c(coeffs_);
  for (double& v : c) v = -v;
  return DualFunctional(space_, std::move(c));
}

// Permutations -------------------------------------------------------------

Permutation::Permutation(std::vector<std::size_t> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (std::size_t v : images_) {
    if (v >= images_.size() || seen[v]) throw ValueError("permutation images are not a bijection");
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> im(n);
  std::iota(im.begin(), im.end(), std::size_t{0});
  return Permutation(std::move(im));
}

Permutation Permutation::transposition(std::size_t n, std::size_t a, std::size_t b) {
  std::vector<std::size_t> im(n);
  std::iota(im.begin(), im.end(), std::size_t{0});
  std::swap(im.at(a), im.at(b));
  return Permutation(std::move(im));
}

Permutation Permutation::compose(const Permutation& other) const {
  if (other.size() != size()) throw ShapeError("composing permutations of different sizes");
  std::vector<std::size_t> im(size());
  for (std::size_t i = 0; i < size(); ++i) im[i] = images_[other.images_[i]];
  return Permutation(std::move(im));
}

int permutation_sign(const Permutation& sigma) {
  // An l-cycle is a product of l - 1 transpositions.
  const std::size_t n = sigma.size();
  std::vector<bool> visited(n, false);
  std::size_t transpositions = 0;
  for (std::size_t start = 0; start < n; ++start) {
    if (visited[start]) continue;
    std::size_t len = 0;
    for (std::size_t i = start; !visited[i]; i = sigma(i)) {
      visited[i] = true;
      ++len;
    }
    transpositions += len - 1;
  }
  return transpositions % 2 == 0 ? 1 : -1;
}

std::vector<Permutation> all_permutations(std::size_t n) {
  std::vector<std::size_t> im(n);
  std::iota(im.begin(), im.end(), std::size_t{0});
  std::vector<Permutation> out;
  do {
    out.emplace_back(im);
  } while (std::next_permutation(im.begin(), im.end()));
  return out;
}

std::uint64_t factorial(std::size_t n) {
  std::uint64_t f = 1;
  for (std::size_t k = 2; k <= n; ++k) f *= k;
  return f;
}

// Norms and duality --------------------------------------------------------

double lp_norm(std::span<const double> x, const PExponent& p) { return power_norm(x, p.p()); }

double lp_norm(const Vector& x) { return lp_norm(x.coords(), x.space().exponent); }

double lp_norm(const Vector& x, const SpaceSpec& space) {
  if (!(x.space() == space)) throw DimensionError("lp_norm: vector does not belong to the space");
  return lp_norm(x);
}

double dual_norm(std::span<const double> coeffs, const PExponent& p) {
  if (p.q_is_infinite()) {
    double mx = 0.0;
    for (double v : coeffs) mx = std::max(mx, std::abs(v));
    return mx;
  }
  return power_norm(coeffs, p.q());
}

DualFunctional norming_functional(const Vector& v) {
  if (v.is_zero()) throw ZeroVectorError("norming functional of the zero vector");
  const double p = v.space().p();
  std::vector<double> c(v.size());
  if (p == 1.0) {
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = sgn(v[k]);
  } else {
    // |v_k|^(p-1) sgn(v_k) / ||v||^(p-1), evaluated on the ratio |v_k|/||v||.
    const double nv = lp_norm(v);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = sgn(v[k]) * std::pow(std::abs(v[k]) / nv, p - 1.0);
  }
  return DualFunctional(v.space(), std::move(c));
}

Vector norming_vector(std::span<const double> phi, const SpaceSpec& space) {
  if (phi.size() != space.d) throw DimensionError("norming_vector: coefficient count != d");
  std::vector<double> x(space.d, 0.0);
  if (space.exponent.q_is_infinite()) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < phi.size(); ++k)
      if (std::abs(phi[k]) > std::abs(phi[best])) best = k;
    if (phi[best] == 0.0) throw ZeroVectorError("norming_vector of the zero functional");
    x[best] = sgn(phi[best]);
    return Vector(space, std::move(x));
  }
  const double q = space.exponent.q();
  const double nq = dual_norm(phi, space.exponent);
  if (nq == 0.0) throw ZeroVectorError("norming_vector of the zero functional");
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = sgn(phi[k]) * std::pow(std::abs(phi[k]) / nq, q - 1.0);
  return Vector(space, std::move(x));
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

const SpaceSpec& common_space(std::span<const Vector> xs) {
  if (xs.empty()) throw ShapeError("empty vector tuple");
  for (const Vector& x : xs) require_same_space(xs.front().space(), x.space(), "tuple");
  return xs.front().space();
}

// Generators ---------------------------------------------------------------

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts) {
  std::uint64_t state = base;
  std::uint64_t out = splitmix64(state);
  for (std::uint64_t part : parts) {
    state ^= part + 0x632BE59BD9B4E019ULL + (out << 6) + (out >> 2);
    out = splitmix64(state);
  }
  return out;
}

Vector near_dependent_base(const SpaceSpec& spec) {
  std::mt19937_64 rng(derive_seed(0x6E6561722D646570ULL, {spec.d}));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> u(spec.d);
  double s;
  do {
    for (double& v : u) v = normal(rng);
    s = std::sqrt(dot(u, u));
  } while (s == 0.0);
  for (double& v : u) v /= s;
  return Vector(spec, std::move(u));
}

Vector random_vector(const SpaceSpec& spec, std::uint64_t seed, Conditioning conditioning) {
  std::mt19937_64 rng(derive_seed(seed, {spec.d}));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> c(spec.d);
  switch (conditioning) {
    case Conditioning::generic:
      for (double& v : c) v = normal(rng);
      break;
    case Conditioning::unit_sphere: {
      double n = 0.0;
      do {
        for (double& v : c) v = normal(rng);
        n = lp_norm(c, spec.exponent);
      } while (n == 0.0);
      for (double& v : c) v /= n;
      break;
    }
    case Conditioning::near_dependent: {
      const Vector base = near_dependent_base(spec);
      std::uniform_real_distribution<double> amp(0.5, 2.0);
      std::uniform_real_distribution<double> jitter(-kNearDependentScale, kNearDependentScale);
      const double a = amp(rng);
      for (std::size_t k = 0; k < c.size(); ++k) c[k] = a * (base[k] + jitter(rng));
      break;
    }
  }
  return Vector(spec, std::move(c));
}

std::vector<Vector> random_tuple(const SpaceSpec& spec, std::size_t n, std::uint64_t seed,
                                 Conditioning conditioning) {
  std::vector<Vector> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_vector(spec, derive_seed(seed, {i}), conditioning));
  return out;
}

}  // namespace ndual
