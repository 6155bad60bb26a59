#pragma once

#include <span>
#include <vector>

#include "ndual/linalg.hpp"
#include "ndual/spaces.hpp"

namespace ndual {

/// entries(i, j) = g(y_i, y_j). Not symmetric unless p = 2.
struct GramMatrix {
  Matrix entries;
  std::vector<Vector> family;
};

GramMatrix gram_matrix(std::span<const Vector> ys);
/// Gamma(y_1, ..., y_n) = det[g(y_i, y_j)].
double gram_determinant(std::span<const Vector> ys);

/// x_Y = sum_j c_j y_j with [g(y_i, y_j)] c = [g(y_i, x)], so that
/// g(y_i, x - x_Y) = 0 for every i. An empty Y projects to 0.
/// Throws DependentFamilyError when |Gamma| < 1e-12 prod ||y_i||^2.
Vector project(const Vector& x, std::span<const Vector> ys);

/// The same projection written as the bordered determinant
///
///   x_Y = -(1/Gamma) det | 0        y_1        ...  y_n       |
///                        | g(y1,x)  g(y1,y1)   ...  g(y1,yn)  |
///                        | ...                                |
///
/// expanded by cofactors along the vector-valued first row. Kept as an
/// independent oracle for project(); |Y| <= 3, else UnsupportedSizeError.
Vector bordered_determinant_project(const Vector& x, std::span<const Vector> ys);

struct OrthogonalizationResult {
  std::vector<Vector> originals;
  std::vector<Vector> orthogonalized;
  /// coefficients[i] holds the projection coefficients of x_i onto
  /// (x_1°, ..., x_{i-1}°); coefficients[0] is empty.
  std::vector<std::vector<double>> coefficients;
  /// Gram determinant of (x_1°, ..., x_{i-1}°) for each step i >= 2.
  std::vector<double> step_gram_dets;
};

/// Left g-orthogonal sequence: x_1° = x_1 and
///   x_i° = x_i - project(x_i, (x_1°, ..., x_{i-1}°)),
/// giving g(x_i°, x_j°) = 0 whenever i < j. Projecting onto the already
/// orthogonalized predecessors matters: g is linear only in its second slot,
/// so orthogonality against x_1..x_{i-1} would not carry over to the x_k°.
/// Throws DependentFamilyError when the input has numerical rank < n
/// (complete-pivot elimination, relative tolerance 1e-10).
OrthogonalizationResult left_g_orthogonalize(std::span<const Vector> xs);

/// True when the tuple has full numerical rank at relative tolerance `tol`.
bool is_independent(std::span<const Vector> xs, double tol = 1e-10);

}  // namespace ndual
