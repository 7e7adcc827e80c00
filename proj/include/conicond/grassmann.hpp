#pragma once

#include <vector>

#include "conicond/matrix.hpp"

namespace conicond {

/// A linear subspace W of R^n, 1 <= dim < n, stored as a balanced matrix whose
/// rows are an orthonormal basis. Bases are not unique; compare spans with
/// `span_equals`, never by basis entries.
class Subspace {
 public:
  /// W = im(A^T). The basis is the balanced part of the polar decomposition.
  static Subspace from_rowspan(const Matrix& a);
  /// Takes ownership of rows that are already orthonormal (checked to 1e-10).
  static Subspace from_orthonormal_rows(Matrix basis);

  std::size_t ambient_dim() const noexcept { return basis_.cols(); }
  std::size_t dim() const noexcept { return basis_.rows(); }
  const Matrix& basis() const noexcept { return basis_; }

  /// Pi_W x
  Vector project(std::span<const double> x) const;
  /// Pi_W = basis^T basis
  Matrix projector() const;

 private:
  explicit Subspace(Matrix basis) : basis_(std::move(basis)) {}
  Matrix basis_;
};

/// Principal angles, nondecreasing, each in [0, pi/2].
struct PrincipalAngleVector {
  std::vector<double> angles;
};

struct GrassmannDistances {
  double projection = 0.0;  // d_p = sin(max angle)
  double geodesic = 0.0;    // d_g = |angles|_2
  double hausdorff = 0.0;   // d_H = max angle
};

Subspace complement(const Subspace& w);

PrincipalAngleVector principal_angles(const Subspace& w1, const Subspace& w2);

GrassmannDistances grassmann_distances(const Subspace& w1, const Subspace& w2);

bool span_equals(const Subspace& w1, const Subspace& w2, double tolerance = 1e-8);

/// Angle between a nonzero vector and W, in [0, pi/2].
double angle_point_subspace(std::span<const double> x, const Subspace& w);

/// Distances from W to the set of m-dimensional subspaces containing x.
struct PointSpaceDistances {
  double projection = 0.0;
  double geodesic = 0.0;
};

PointSpaceDistances distance_to_spaces_containing(std::span<const double> x, const Subspace& w);

}  // namespace conicond
