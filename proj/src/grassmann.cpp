#include "conicond/grassmann.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "conicond/errors.hpp"
#include "conicond/linalg.hpp"

namespace conicond {
namespace {

constexpr double kSmallAngle = 1e-4;
constexpr double kCosineOvershoot = 1e-8;

void require_same_shape(const Subspace& w1, const Subspace& w2) {
  require(w1.ambient_dim() == w2.ambient_dim() && w1.dim() == w2.dim(), ErrorKind::kDimension,
          "subspaces must share dimension and ambient dimension");
}

}  // namespace

Subspace Subspace::from_rowspan(const Matrix& a) {
  return Subspace(polar_decompose(a).balanced_part);
}

Subspace Subspace::from_orthonormal_rows(Matrix basis) {
  require(basis.rows() >= 1 && basis.rows() < basis.cols(), ErrorKind::kDimension,
          "subspace dimension must satisfy 1 <= m < n");
  require(basis.all_finite(), ErrorKind::kNumericalFailure, "basis has non-finite entries");
  require(is_balanced(basis, 1e-10), ErrorKind::kNotBalanced, "basis rows are not orthonormal");
  return Subspace(std::move(basis));
}

Vector Subspace::project(std::span<const double> x) const {
  require(x.size() == ambient_dim(), ErrorKind::kDimension, "vector has wrong ambient dimension");
  return transpose_times(basis_, basis_ * x);
}

Matrix Subspace::projector() const { return basis_.transpose() * basis_; }

Subspace complement(const Subspace& w) {
  return Subspace::from_orthonormal_rows(complete_orthonormal_basis(w.basis().transpose()).transpose());
}

PrincipalAngleVector principal_angles(const Subspace& w1, const Subspace& w2) {
  require_same_shape(w1, w2);
  const Matrix& b1 = w1.basis();
  const Matrix& b2 = w2.basis();
  const Matrix cross = b1 * b2.transpose();
  Vector cosines = singular_values(cross);  // nonincreasing -> angles nondecreasing
  PrincipalAngleVector out;
  out.angles.reserve(cosines.size());
  bool needs_sine_route = false;
  for (double c : cosines) {
    require(c <= 1.0 + kCosineOvershoot, ErrorKind::kNumericalFailure,
            "principal cosine exceeds one; bases are not orthonormal");
    const double angle = std::acos(std::clamp(c, 0.0, 1.0));
    needs_sine_route = needs_sine_route || angle < kSmallAngle;
    out.angles.push_back(angle);
  }
  if (needs_sine_route) {
    // sin(angles) are the singular values of B2 (I - B1^T B1); arccos loses
    // about half the digits near zero, arcsin does not.
    const Matrix residual = b2 - (b2 * b1.transpose()) * b1;
    Vector sines = singular_values(residual);
    std::sort(sines.begin(), sines.end());
    for (std::size_t i = 0; i < out.angles.size(); ++i) {
      if (out.angles[i] < kSmallAngle) out.angles[i] = std::asin(std::clamp(sines[i], 0.0, 1.0));
    }
    std::sort(out.angles.begin(), out.angles.end());
  }
  return out;
}

GrassmannDistances grassmann_distances(const Subspace& w1, const Subspace& w2) {
  const PrincipalAngleVector alpha = principal_angles(w1, w2);
  GrassmannDistances d;
  d.hausdorff = alpha.angles.back();
  d.projection = std::sin(d.hausdorff);
  d.geodesic = norm(alpha.angles);
  return d;
}

bool span_equals(const Subspace& w1, const Subspace& w2, double tolerance) {
  if (w1.ambient_dim() != w2.ambient_dim() || w1.dim() != w2.dim()) return false;
  return principal_angles(w1, w2).angles.back() <= tolerance;
}

double angle_point_subspace(std::span<const double> x, const Subspace& w) {
  require(x.size() == w.ambient_dim(), ErrorKind::kDimension, "vector has wrong ambient dimension");
  require(norm(x) > 0.0, ErrorKind::kZeroVector, "angle to the zero vector is undefined");
  const Vector inside = w.project(x);
  const Vector outside = sub(x, inside);
  // atan2 form of arccos(|Pi x| / |x|), accurate at both ends of [0, pi/2].
  return std::atan2(norm(outside), norm(inside));
}

PointSpaceDistances distance_to_spaces_containing(std::span<const double> x, const Subspace& w) {
  const double theta = angle_point_subspace(x, w);
  return {std::sin(theta), theta};
}

}  // namespace conicond
