#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "conicond/grassmann.hpp"
#include "conicond/matrix.hpp"
#include "conicond/rng.hpp"

namespace conicond {

/// Regular cone: nonnegative orthant, Lorentz (second-order) cone, cartesian
/// products, and negations. Immutable value type.
class Cone {
 public:
  enum class Kind { kOrthant, kLorentz, kProduct, kNegated };

  static Cone orthant(std::size_t n);
  /// {x : x_n >= |x_{1:n-1}|}, n >= 2.
  static Cone lorentz(std::size_t n);
  static Cone product(std::vector<Cone> factors);
  /// -C. Double negation collapses.
  static Cone negated(const Cone& inner);

  Kind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return dim_; }
  /// Product factors, or the single inner cone of a negation.
  const std::vector<Cone>& children() const noexcept { return *children_; }

  bool contains(std::span<const double> x, double tolerance = 1e-9) const;
  /// Euclidean projection onto the cone.
  Vector project(std::span<const double> x) const;
  /// {z : z^T x <= 0 for all x in C}.
  Cone dual() const;

  /// +1/-1 per coordinate when the cone is a signed orthant (products and
  /// negations of orthants); empty otherwise.
  std::optional<std::vector<int>> sign_pattern() const;

  /// Random unit vector of the cone, mixing faces of every dimension.
  Vector sample(CounterRng& rng) const;
  /// Random unit vector on an extreme ray (orthant) or the boundary (Lorentz).
  Vector sample_extreme(CounterRng& rng) const;

  /// Canonical text form, parseable by `parse_cone`.
  std::string to_string() const;

  friend bool operator==(const Cone& a, const Cone& b) { return a.to_string() == b.to_string(); }

 private:
  Cone(Kind kind, std::size_t dim, std::vector<Cone> children);

  Kind kind_;
  std::size_t dim_;
  std::shared_ptr<const std::vector<Cone>> children_;
};

/// `orthant:n`, `lorentz:n`, `product(spec,spec,...)`, `neg(spec)`; case-insensitive.
Cone parse_cone(std::string_view spec);

enum class SearchMethod { kExact, kMultiStart };

std::string_view to_string(SearchMethod method);

struct MultiStartOptions {
  int starts = 64;
  int max_iterations = 500;
  double stationarity_tolerance = 1e-12;
  std::uint64_t seed = 0x5EED;
};

struct ConeSearchOptions {
  std::size_t exact_enum_limit = 16;
  bool force_multistart = false;
  MultiStartOptions multistart;
};

/// Optimum of a quadratic form over C intersected with the unit sphere.
struct ConeQuadraticOptimum {
  double value = 0.0;
  Vector argument;
  SearchMethod method = SearchMethod::kExact;
  /// MultiStart only: spread of the best converged values (same units as value).
  double spread = 0.0;
  /// Exact only: support of the optimizer, increasing indices.
  std::vector<std::size_t> support;
};

/// max |G x|^2 over x in C, |x| = 1, for a factor G (r x n).
ConeQuadraticOptimum maximize_gram_form(const Cone& cone, const Matrix& factor, const ConeSearchOptions& options = {});

/// min |A x| over x in C, |x| = 1 (value is the norm, not its square).
ConeQuadraticOptimum minimize_image_norm(const Cone& cone, const Matrix& a, const ConeSearchOptions& options = {});

struct ConeAngleResult {
  double angle = 0.0;
  Vector witness;
  SearchMethod method = SearchMethod::kExact;
  /// Possible underestimation of cos(angle); zero for Exact.
  double certified_gap = 0.0;
};

/// angle(C, W) = min over nonzero x in C of angle(x, W).
ConeAngleResult cone_subspace_angle(const Cone& cone, const Subspace& w, const ConeSearchOptions& options = {});

enum class Feasibility { kPrimalStrict, kDualStrict, kIllPosed };

std::string_view to_string(Feasibility tag);

inline constexpr double kDefaultAngleThreshold = 1e-7;

struct FeasibilityStatus {
  Feasibility tag = Feasibility::kIllPosed;
  ConeAngleResult primal;  // angle(C, W)
  ConeAngleResult dual;    // angle(dual C, W^perp)

  double primal_angle() const { return primal.angle; }
  double dual_angle() const { return dual.angle; }
};

FeasibilityStatus classify_feasibility(const Cone& cone, const Subspace& w,
                                       double angle_threshold = kDefaultAngleThreshold,
                                       const ConeSearchOptions& options = {});

}  // namespace conicond
