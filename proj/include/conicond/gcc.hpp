#pragma once

#include <vector>

#include "conicond/condition.hpp"
#include "conicond/matrix.hpp"

namespace conicond {

/// cap(p, rho) = {x in S^{m-1} : <x, p> >= cos rho}.
struct SphericalCap {
  Vector center;
  double radius = 0.0;
  /// Indices of input points on the cap boundary.
  std::vector<std::size_t> support;
};

/// Minimal-radius cap containing every point, by exhaustive enumeration of
/// support sets of at most m points; radii above pi/2 are handled.
SphericalCap smallest_enclosing_cap(const std::vector<Vector>& points);

/// GCC condition for the nonnegative orthant: 1 / |cos rho| of the smallest
/// cap around the normalized columns of A.
ConditionValue gcc_condition(const Matrix& a);

}  // namespace conicond
