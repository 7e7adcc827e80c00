#include "conicond/condition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "conicond/errors.hpp"
#include "conicond/linalg.hpp"
#include "conicond/rng.hpp"

namespace conicond {
namespace {

constexpr double kBalancedTolerance = 1e-9;

void require_problem_shape(const Cone& cone, const Matrix& a) {
  require(a.rows() >= 1 && a.rows() < a.cols(), ErrorKind::kDimension, "instances need 1 <= m < n");
  require(a.cols() == cone.dim(), ErrorKind::kDimension, "matrix width does not match the cone");
  require(a.all_finite(), ErrorKind::kNumericalFailure, "matrix has non-finite entries");
}

// Renegar value from a distance to Sigma_R, mapping a zero distance to inf.
ConditionValue from_distance(double a_norm, double distance, std::string basis) {
  if (distance <= 1e-14 * a_norm) return ConditionValue::exact(kInfinity, "ill-posed: " + basis);
  return ConditionValue::exact(std::max(1.0, a_norm / distance), std::move(basis));
}

// Support function of the sampled set at u: max_i <z_i, u>.
double sampled_support(const std::vector<Vector>& z, std::span<const double> u) {
  double best = -kInfinity;
  for (const auto& zi : z) best = std::max(best, dot(zi, u));
  return best;
}

}  // namespace

ConditionValue ConditionValue::exact(double value, std::string basis) {
  return {Kind::kExact, value, value, std::move(basis)};
}

ConditionValue ConditionValue::interval(double lower, double upper, std::string basis) {
  require(lower <= upper, ErrorKind::kNumericalFailure, "condition interval with lower > upper");
  return {Kind::kInterval, lower, upper, std::move(basis)};
}

ConditionValue grassmann_condition(const FeasibilityStatus& status) {
  switch (status.tag) {
    case Feasibility::kPrimalStrict:
      return ConditionValue::exact(1.0 / std::sin(status.primal.angle), "1/sin angle(C,W)");
    case Feasibility::kDualStrict:
      return ConditionValue::exact(1.0 / std::sin(status.dual.angle), "1/sin angle(dual C,W^perp)");
    case Feasibility::kIllPosed:
      break;
  }
  return ConditionValue::exact(kInfinity, "ill-posed");
}

ConditionValue grassmann_condition(const Cone& cone, const Subspace& w, const ConditionOptions& options) {
  return grassmann_condition(classify_feasibility(cone, w, options.angle_threshold, options.search));
}

DualDistance dual_distance(const Cone& cone, const Matrix& a, const ConeSearchOptions& options) {
  const ConeQuadraticOptimum opt = minimize_image_norm(cone.dual(), a, options);
  return {opt.value, normalized(opt.argument), opt.method};
}

ConditionValue renegar_condition(const Cone& cone, const Matrix& a, const ConditionOptions& options) {
  require_problem_shape(cone, a);
  const double a_norm = spectral_norm(a);
  require(a_norm > 0.0, ErrorKind::kDimension, "condition of the zero matrix is undefined");

  if (numerical_rank(a) < a.rows()) {
    // Rank-deficient matrices are dual feasible; their distance to Sigma_R is
    // the distance to the primal feasible set.
    return from_distance(a_norm, dual_distance(cone, a, options.search).value, "|A|/min|Ap| (rank deficient)");
  }

  const Subspace w = Subspace::from_rowspan(a);
  const FeasibilityStatus status = classify_feasibility(cone, w, options.angle_threshold, options.search);
  switch (status.tag) {
    case Feasibility::kIllPosed:
      return ConditionValue::exact(kInfinity, "ill-posed");
    case Feasibility::kDualStrict:
      return from_distance(a_norm, dual_distance(cone, a, options.search).value, "|A|/min|Ap|");
    case Feasibility::kPrimalStrict:
      break;
  }
  const ConditionValue c = grassmann_condition(status);
  const double k = kappa(a);
  // R is invariant under scaling, so a scaled balanced matrix is covered too.
  if (k <= 1.0 + kBalancedTolerance) return ConditionValue::exact(c.value(), "balanced: R(A) = C(W)");
  return ConditionValue::interval(c.value(), k * c.value(), "sandwich: C(W) <= R(A) <= kappa(A) C(W)");
}

std::string_view to_string(PerturbationWitness::Property property) {
  switch (property) {
    case PerturbationWitness::Property::kImageContains: return "ImageContains";
    case PerturbationWitness::Property::kKernelContains: return "KernelContains";
    case PerturbationWitness::Property::kFlipsToPrimal: return "FlipsToPrimal";
  }
  return "?";
}

PerturbationWitness witness_image(const Matrix& balanced, std::span<const double> x) {
  require(x.size() == balanced.cols(), ErrorKind::kDimension, "x has the wrong dimension");
  require(is_balanced(balanced, kBalancedTolerance), ErrorKind::kNotBalanced, "B B^T != I");
  const double x_norm = norm(x);
  require(x_norm > 0.0, ErrorKind::kZeroVector, "x must be nonzero");
  const Vector xu = scaled(x, 1.0 / x_norm);

  const Vector coords = balanced * xu;
  const Vector inside = transpose_times(balanced, coords);
  const double cos_alpha = norm(inside);
  const double alpha = std::atan2(norm(sub(xu, inside)), cos_alpha);
  require(alpha < std::numbers::pi / 2 - 1e-8, ErrorKind::kXInComplement, "x is orthogonal to W");

  // p: normalized projection of x onto W.
  const Vector p = scaled(inside, 1.0 / cos_alpha);
  const Vector bp = balanced * p;
  const Vector direction = sub(scaled(xu, cos_alpha), p);

  PerturbationWitness out;
  out.delta = Matrix::outer(bp, direction);
  out.frob_norm = out.delta.frobenius_norm();
  out.property = PerturbationWitness::Property::kImageContains;
  out.target = xu;
  out.input_norm = x_norm;
  const Matrix perturbed = balanced + out.delta;
  const Vector in_rowspan = pseudoinverse(perturbed) * (perturbed * xu);
  out.residual = norm(sub(xu, in_rowspan));
  return out;
}

PerturbationWitness witness_kernel(const Matrix& balanced, std::span<const double> x) {
  require(x.size() == balanced.cols(), ErrorKind::kDimension, "x has the wrong dimension");
  require(is_balanced(balanced, kBalancedTolerance), ErrorKind::kNotBalanced, "B B^T != I");
  const double x_norm = norm(x);
  require(x_norm > 0.0, ErrorKind::kZeroVector, "x must be nonzero");
  const Vector xu = scaled(x, 1.0 / x_norm);

  PerturbationWitness out;
  out.delta = Matrix::outer(balanced * xu, xu) * -1.0;
  out.frob_norm = out.delta.frobenius_norm();
  out.property = PerturbationWitness::Property::kKernelContains;
  out.target = xu;
  out.input_norm = x_norm;
  out.residual = norm((balanced + out.delta) * xu);
  return out;
}

PerturbationWitness witness_flip_dual_to_primal(const Cone& cone, const Matrix& a, const ConditionOptions& options) {
  require_problem_shape(cone, a);
  if (numerical_rank(a) == a.rows()) {
    const FeasibilityStatus status =
        classify_feasibility(cone, Subspace::from_rowspan(a), options.angle_threshold, options.search);
    require(status.tag != Feasibility::kPrimalStrict, ErrorKind::kNotDualFeasible,
            "im(A^T) is strictly primal feasible; there is nothing to flip");
  }
  const DualDistance d = dual_distance(cone, a, options.search);
  const Vector ap = a * d.minimizer;

  PerturbationWitness out;
  out.delta = Matrix::outer(ap, d.minimizer) * -1.0;
  out.frob_norm = out.delta.frobenius_norm();
  out.property = PerturbationWitness::Property::kFlipsToPrimal;
  out.target = d.minimizer;
  out.residual = norm((a + out.delta) * d.minimizer);
  return out;
}

SigmaDistances sigma_distances(const ConditionValue& grassmann) {
  const double dp = grassmann.is_infinite() ? 0.0 : 1.0 / grassmann.value();
  return {dp, std::asin(std::clamp(dp, 0.0, 1.0))};
}

SigmaDistances sigma_distances(const Cone& cone, const Subspace& w, const ConditionOptions& options) {
  return sigma_distances(grassmann_condition(cone, w, options));
}

InclusionRadius inclusion_radius_check(const Cone& cone, const Subspace& w, std::size_t samples,
                                       std::uint64_t seed, const ConditionOptions& options) {
  const FeasibilityStatus status = classify_feasibility(cone, w, options.angle_threshold, options.search);
  require(status.tag == Feasibility::kPrimalStrict, ErrorKind::kNotPrimalFeasible,
          "the inclusion radius characterization needs a strictly primal feasible W");
  require(samples > 0, ErrorKind::kEmptyInput, "need at least one sample");

  const Cone dual = cone.dual();
  const Matrix& basis = w.basis();
  const std::size_t m = w.dim();

  // Coordinates in W of Pi_W x for sampled x in (dual C) cap S^{n-1}; the
  // projected set is their convex hull with the origin (scaled by [0, 1]).
  std::vector<Vector> z;
  z.reserve(samples);
  CounterRng sampler(seed, 0);
  for (std::size_t i = 0; i < samples; ++i) z.push_back(basis * dual.sample(sampler));

  // The largest centered ball inside a convex body around 0 has radius equal
  // to the minimum of its support function over unit directions.
  CounterRng directions(seed, 1);
  Vector best_u;
  double best = kInfinity;
  auto consider = [&](Vector u) {
    const double h = sampled_support(z, u);
    if (h < best) {
      best = h;
      best_u = std::move(u);
    }
  };
  if (m == 1) {
    consider({1.0});
    consider({-1.0});
  } else {
    const std::size_t grid = m == 2 ? 720 : 1500;
    for (std::size_t k = 0; k < grid; ++k) {
      if (m == 2) {
        const double phi = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(grid);
        consider({std::cos(phi), std::sin(phi)});
      } else {
        consider(directions.unit_vector(m));
      }
    }
    // Local pattern search around the best grid direction.
    double step = m == 2 ? 2.0 * std::numbers::pi / grid : 0.2;
    int failures = 0;
    for (int it = 0; it < 300 && step > 1e-6; ++it) {
      const double before = best;
      consider(normalized(add(best_u, scaled(directions.gaussian_vector(m), step))));
      if (best < before) {
        failures = 0;
      } else if (++failures >= 15) {
        step *= 0.6;
        failures = 0;
      }
    }
  }

  InclusionRadius out;
  out.estimate = std::max(best, 0.0);
  out.expected = std::sin(status.primal.angle);
  out.agreement = std::abs(out.estimate - out.expected) <= 0.1 * out.expected;
  return out;
}

double iteration_bound_estimate(double condition, std::size_t n) {
  require(n >= 2, ErrorKind::kDimension, "iteration estimate needs n >= 2");
  require(condition >= 1.0, ErrorKind::kDimension, "condition numbers are >= 1");
  if (std::isinf(condition)) return kInfinity;
  const double nd = static_cast<double>(n);
  return std::sqrt(nd) * std::log(nd * condition);
}

}  // namespace conicond
