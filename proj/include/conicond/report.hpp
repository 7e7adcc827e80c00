#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conicond/condition.hpp"
#include "conicond/cones.hpp"
#include "conicond/matrix.hpp"

namespace conicond {

struct ConditionReport {
  std::size_t m = 0;
  std::size_t n = 0;
  std::string cone;
  Feasibility status = Feasibility::kIllPosed;
  /// True when A is rank deficient; the angles are then not computed.
  bool rank_deficient = false;
  double kappa = kInfinity;
  ConditionValue grassmann;
  ConditionValue renegar;
  std::optional<ConditionValue> gcc;
  double primal_angle = 0.0;
  double dual_angle = 0.0;
  SearchMethod method = SearchMethod::kExact;
  double iteration_estimate = kInfinity;
  std::vector<PerturbationWitness> witnesses;
};

struct ReportOptions {
  bool witnesses = false;
  ConditionOptions condition;
};

/// Everything known about the instance (C, A). GCC is included when C is the
/// plain nonnegative orthant.
ConditionReport analyze(const Cone& cone, const Matrix& a, const ReportOptions& options = {});

/// JSON text, pretty-printed with two-space indent; infinities as "inf".
std::string report_to_json(const ConditionReport& report);
/// Human-readable summary.
std::string report_to_text(const ConditionReport& report);

}  // namespace conicond
