#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "conicond/errors.hpp"
#include "conicond/grassmann.hpp"
#include "conicond/harness.hpp"
#include "conicond/linalg.hpp"
#include "conicond/report.hpp"

namespace {

using namespace conicond;

enum Exit { kOk = 0, kUsage = 1, kNumerical = 2, kDimensionExit = 3, kIllPosedExit = 4 };

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse:
    case ErrorKind::kIo:
    case ErrorKind::kEmptyInput:
      return kUsage;
    case ErrorKind::kDimension:
    case ErrorKind::kRankDeficient:
    case ErrorKind::kZeroColumn:
    case ErrorKind::kZeroVector:
      return kDimensionExit;
    default:
      return kNumerical;
  }
}

int run_analyze(const std::string& cone_spec, const std::string& matrix_path, bool json, bool witness, bool strict) {
  const Cone cone = parse_cone(cone_spec);
  const Matrix a = read_matrix_file(matrix_path);
  ReportOptions options;
  options.witnesses = witness;
  const ConditionReport report = analyze(cone, a, options);
  std::cout << (json ? report_to_json(report) : report_to_text(report));
  return strict && report.status == Feasibility::kIllPosed ? kIllPosedExit : kOk;
}

int run_distance(const std::string& a_path, const std::string& b_path, bool json) {
  const Subspace w1 = Subspace::from_rowspan(read_matrix_file(a_path));
  const Subspace w2 = Subspace::from_rowspan(read_matrix_file(b_path));
  const PrincipalAngleVector angles = principal_angles(w1, w2);
  const GrassmannDistances d = grassmann_distances(w1, w2);
  if (json) {
    nlohmann::ordered_json j;
    j["angles"] = angles.angles;
    j["projection"] = d.projection;
    j["geodesic"] = d.geodesic;
    j["hausdorff"] = d.hausdorff;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout.precision(17);
    std::cout << "angles    ";
    for (double t : angles.angles) std::cout << ' ' << t;
    std::cout << "\nd_p        " << d.projection << "\nd_g        " << d.geodesic << "\nd_H        " << d.hausdorff
              << "\n";
  }
  return kOk;
}

int run_precondition(const std::string& matrix_path, const std::string& out_path) {
  const Matrix a = read_matrix_file(matrix_path);
  write_text_file(out_path, format_matrix(polar_decompose(a).balanced_part));
  return kOk;
}

int run_experiment_cmd(const ExperimentConfig& config) {
  const auto records = run_experiment(config);
  std::size_t ill = 0, violations = 0;
  for (const auto& r : records) {
    ill += r.status == Feasibility::kIllPosed;
    violations += !r.sandwich_ok;
  }
  if (config.output_path.empty()) std::cout << format_trial_records(records);
  std::cerr << records.size() << " trials, " << ill << " ill-posed, " << violations << " sandwich violations\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Condition numbers for homogeneous conic feasibility problems"};
  app.require_subcommand(1);

  std::string cone_spec, matrix_path, a_path, b_path, out_path;
  bool json = false, witness = false, strict = false;

  auto* analyze_cmd = app.add_subcommand("analyze", "Condition report for the instance A over a cone");
  analyze_cmd->add_option("--cone", cone_spec, "Cone, e.g. orthant:3, lorentz:4, product(orthant:2,lorentz:3)")
      ->required();
  analyze_cmd->add_option("--matrix", matrix_path, "Matrix file (one row per line)")->required();
  analyze_cmd->add_flag("--json", json, "Emit JSON");
  analyze_cmd->add_flag("--witness", witness, "Include perturbation witnesses");
  analyze_cmd->add_flag("--strict", strict, "Exit with 4 when the instance is ill-posed");

  auto* distance_cmd = app.add_subcommand("distance", "Grassmann distances between two row spans");
  distance_cmd->add_option("--a", a_path, "First matrix file")->required();
  distance_cmd->add_option("--b", b_path, "Second matrix file")->required();
  distance_cmd->add_flag("--json", json, "Emit JSON");

  auto* precondition_cmd = app.add_subcommand("precondition", "Write the balanced part of the polar decomposition");
  precondition_cmd->add_option("--matrix", matrix_path, "Matrix file")->required();
  precondition_cmd->add_option("--out", out_path, "Output matrix file")->required();

  ExperimentConfig config;
  auto* experiment_cmd = app.add_subcommand("experiment", "Gaussian ensemble experiment, CSV output");
  experiment_cmd->add_option("--n", config.n, "Ambient dimension")->required();
  experiment_cmd->add_option("--m", config.m, "Number of rows")->required();
  experiment_cmd->add_option("--cone", config.cone_spec, "Cone (default orthant:n)");
  experiment_cmd->add_option("--trials", config.trials, "Number of trials");
  experiment_cmd->add_option("--seed", config.seed, "Master seed");
  experiment_cmd->add_option("--out", config.output_path, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*analyze_cmd) return run_analyze(cone_spec, matrix_path, json, witness, strict);
    if (*distance_cmd) return run_distance(a_path, b_path, json);
    if (*precondition_cmd) return run_precondition(matrix_path, out_path);
    if (*experiment_cmd) return run_experiment_cmd(config);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kUsage;
}
