#include "conicond/report.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "conicond/errors.hpp"
#include "conicond/gcc.hpp"
#include "conicond/harness.hpp"
#include "conicond/linalg.hpp"

namespace conicond {
namespace {

using nlohmann::ordered_json;

ordered_json number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

ordered_json condition_json(const ConditionValue& c) {
  ordered_json j;
  j["kind"] = c.is_exact() ? "exact" : "interval";
  if (c.is_exact()) {
    j["value"] = number(c.value());
  } else {
    j["lower"] = number(c.lower);
    j["upper"] = number(c.upper);
  }
  j["basis"] = c.basis;
  return j;
}

ordered_json matrix_json(const Matrix& a) {
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto r = a.row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return rows;
}

std::string condition_text(const ConditionValue& c) {
  std::ostringstream out;
  out.precision(12);
  if (c.is_exact()) out << c.value();
  else out << "[" << c.lower << ", " << c.upper << "]";
  out << "  (" << c.basis << ")";
  return out.str();
}

}  // namespace

ConditionReport analyze(const Cone& cone, const Matrix& a, const ReportOptions& options) {
  require(a.rows() >= 1 && a.rows() < a.cols(), ErrorKind::kDimension, "instances need 1 <= m < n");
  require(a.cols() == cone.dim(), ErrorKind::kDimension, "matrix width does not match the cone");

  ConditionReport r;
  r.m = a.rows();
  r.n = a.cols();
  r.cone = cone.to_string();
  r.kappa = kappa(a);
  r.renegar = renegar_condition(cone, a, options.condition);
  r.rank_deficient = numerical_rank(a) < a.rows();

  if (r.rank_deficient) {
    r.status = instance_feasibility(cone, a, options.condition);
    r.grassmann = ConditionValue::exact(kInfinity, "rank deficient: im(A^T) has dimension < m");
  } else {
    const FeasibilityStatus status = classify_feasibility(cone, Subspace::from_rowspan(a),
                                                          options.condition.angle_threshold, options.condition.search);
    r.status = status.tag;
    r.grassmann = grassmann_condition(status);
    r.primal_angle = status.primal.angle;
    r.dual_angle = status.dual.angle;
    r.method = status.primal.method == SearchMethod::kMultiStart || status.dual.method == SearchMethod::kMultiStart
                   ? SearchMethod::kMultiStart
                   : SearchMethod::kExact;
    if (options.witnesses) {
      if (status.tag == Feasibility::kPrimalStrict) {
        r.witnesses.push_back(witness_image(polar_decompose(a).balanced_part, status.primal.witness));
      } else {
        r.witnesses.push_back(witness_flip_dual_to_primal(cone, a, options.condition));
      }
    }
  }
  if (r.rank_deficient && options.witnesses) r.witnesses.push_back(witness_flip_dual_to_primal(cone, a, options.condition));

  if (cone.kind() == Cone::Kind::kOrthant) {
    try {
      r.gcc = gcc_condition(a);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kZeroColumn) throw;
    }
  }
  r.iteration_estimate = iteration_bound_estimate(r.grassmann.value(), r.n);
  return r;
}

std::string report_to_json(const ConditionReport& r) {
  ordered_json j;
  j["m"] = r.m;
  j["n"] = r.n;
  j["cone"] = r.cone;
  j["status"] = std::string(to_string(r.status));
  j["rank_deficient"] = r.rank_deficient;
  j["kappa"] = number(r.kappa);
  j["grassmann"] = number(r.grassmann.value());
  j["renegar"] = condition_json(r.renegar);
  if (r.gcc) j["gcc"] = number(r.gcc->value());
  j["angles"] = {{"primal", r.primal_angle}, {"dual", r.dual_angle}};
  j["method"] = std::string(to_string(r.method));
  j["iteration_estimate"] = number(r.iteration_estimate);
  if (!r.witnesses.empty()) {
    ordered_json ws = ordered_json::array();
    for (const auto& w : r.witnesses) {
      ordered_json wj;
      wj["property"] = std::string(to_string(w.property));
      wj["frob_norm"] = w.frob_norm;
      wj["residual"] = w.residual;
      wj["target"] = w.target;
      wj["delta"] = matrix_json(w.delta);
      ws.push_back(std::move(wj));
    }
    j["witnesses"] = std::move(ws);
  }
  return j.dump(2) + "\n";
}

std::string report_to_text(const ConditionReport& r) {
  std::ostringstream out;
  out.precision(12);
  out << "instance         " << r.m << " x " << r.n << " over " << r.cone << "\n";
  out << "status           " << to_string(r.status) << (r.rank_deficient ? " (rank deficient)" : "") << "\n";
  out << "kappa            " << r.kappa << "\n";
  out << "grassmann        " << condition_text(r.grassmann) << "\n";
  out << "renegar          " << condition_text(r.renegar) << "\n";
  if (r.gcc) out << "gcc              " << r.gcc->value() << "\n";
  out << "angle(C,W)       " << r.primal_angle << "\n";
  out << "angle(C*,W^perp) " << r.dual_angle << "\n";
  out << "method           " << to_string(r.method) << "\n";
  out << "ipm estimate     " << r.iteration_estimate << "\n";
  for (const auto& w : r.witnesses) {
    out << "witness          " << to_string(w.property) << "  |Delta|_F = " << w.frob_norm
        << "  residual = " << w.residual << "\n";
  }
  return out.str();
}

}  // namespace conicond
