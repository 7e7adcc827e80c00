#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "conicond/cones.hpp"
#include "conicond/grassmann.hpp"
#include "conicond/matrix.hpp"

namespace conicond {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// A condition number in [1, inf]: either a point value or a certified
/// enclosing interval. `basis` names the identity or bound that produced it.
struct ConditionValue {
  enum class Kind { kExact, kInterval };

  Kind kind = Kind::kExact;
  double lower = kInfinity;
  double upper = kInfinity;
  std::string basis;

  static ConditionValue exact(double value, std::string basis);
  static ConditionValue interval(double lower, double upper, std::string basis);

  bool is_exact() const noexcept { return kind == Kind::kExact; }
  bool is_infinite() const noexcept { return lower == kInfinity; }
  /// Exact value; for an interval, its lower end.
  double value() const noexcept { return lower; }
};

struct ConditionOptions {
  double angle_threshold = kDefaultAngleThreshold;
  ConeSearchOptions search;
};

/// Grassmann condition C(W) = 1 / d_p(W, Sigma_m), through the cone angles.
ConditionValue grassmann_condition(const Cone& cone, const Subspace& w, const ConditionOptions& options = {});
/// Same, reusing an existing classification of W.
ConditionValue grassmann_condition(const FeasibilityStatus& status);

/// min |A p| over p in the dual cone with |p| = 1: the distance of a dual
/// feasible A to the primal feasible instances.
struct DualDistance {
  double value = 0.0;
  Vector minimizer;
  SearchMethod method = SearchMethod::kExact;
};

DualDistance dual_distance(const Cone& cone, const Matrix& a, const ConeSearchOptions& options = {});

/// Renegar's R(A) = |A| / d(A, Sigma_R). Exact whenever A is dual feasible,
/// rank deficient, balanced up to scale, or ill-posed; otherwise the interval
/// [C(W), kappa(A) C(W)].
ConditionValue renegar_condition(const Cone& cone, const Matrix& a, const ConditionOptions& options = {});

struct PerturbationWitness {
  enum class Property { kImageContains, kKernelContains, kFlipsToPrimal };

  Matrix delta;
  double frob_norm = 0.0;
  Property property = Property::kImageContains;
  /// The unit vector the property refers to (x, or p for the flip).
  Vector target;
  /// Norm of the caller's x before internal normalization (1 for the flip).
  double input_norm = 1.0;
  double residual = 0.0;
};

std::string_view to_string(PerturbationWitness::Property property);

/// Rank-one Delta with |Delta|_F = sin angle(x, W) and x in im((B + Delta)^T).
PerturbationWitness witness_image(const Matrix& balanced, std::span<const double> x);

/// Delta' = -B x x^T, so (B + Delta') x = 0 and |Delta'|_F = cos angle(x, W).
PerturbationWitness witness_kernel(const Matrix& balanced, std::span<const double> x);

/// Delta = -A p p^T for the minimizing p of `dual_distance`; A + Delta is
/// primal feasible.
PerturbationWitness witness_flip_dual_to_primal(const Cone& cone, const Matrix& a,
                                                const ConditionOptions& options = {});

/// (d_p, d_g) from W to the ill-posed set; d_p = sin d_g.
struct SigmaDistances {
  double projection = 0.0;
  double geodesic = 0.0;
};

SigmaDistances sigma_distances(const Cone& cone, const Subspace& w, const ConditionOptions& options = {});
SigmaDistances sigma_distances(const ConditionValue& grassmann);

/// Monte Carlo estimate of the largest r with r (B_n cap W) inside
/// Pi_W(dual C cap B_n), compared with 1 / C(W) at 10% tolerance.
struct InclusionRadius {
  double estimate = 0.0;
  double expected = 0.0;
  bool agreement = false;
};

InclusionRadius inclusion_radius_check(const Cone& cone, const Subspace& w, std::size_t samples = 200000,
                                       std::uint64_t seed = 1, const ConditionOptions& options = {});

/// sqrt(n) ln(n * condition): interior-point iteration estimate, constant 1.
double iteration_bound_estimate(double condition, std::size_t n);

}  // namespace conicond
