#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "conicond/condition.hpp"
#include "conicond/cones.hpp"
#include "conicond/grassmann.hpp"
#include "conicond/matrix.hpp"

namespace conicond {

/// min over `samples` sampled unit x in C of angle(x, W). An upper bound on
/// angle(C, W) that converges as samples grow.
double oracle_cone_angle(const Cone& cone, const Subspace& w, std::size_t samples, std::uint64_t seed);

/// Feasibility of the instance A itself: rank-deficient matrices count as
/// dual feasible, ill-posed when their kernel meets the dual cone.
Feasibility instance_feasibility(const Cone& cone, const Matrix& a, const ConditionOptions& options = {});

/// Smallest spectral norm among perturbations found (witness-guided and
/// random) that change `instance_feasibility`. Zero for ill-posed A.
double oracle_perturbation_bracket(const Cone& cone, const Matrix& a, std::size_t budget, std::uint64_t seed);

struct ExperimentConfig {
  std::size_t n = 4;
  std::size_t m = 2;
  std::string cone_spec;  // empty means orthant:n
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::string output_path;  // empty: do not write
};

struct TrialRecord {
  std::size_t trial_index = 0;
  Feasibility status = Feasibility::kIllPosed;
  double grassmann = kInfinity;
  double kappa = kInfinity;
  ConditionValue renegar;
  bool sandwich_ok = false;
};

/// C(W) <= R(A) <= kappa(A) C(W), each side with relative slack.
bool sandwich_holds(double grassmann, double kappa, const ConditionValue& renegar, double slack = 1e-9);

/// Gaussian A per trial from stream (seed, trial_index). Trials run on up to
/// CONIC_COND_THREADS threads; records are ordered by trial index.
std::vector<TrialRecord> run_experiment(const ExperimentConfig& config);

/// CSV with a header line; infinities written as "inf".
std::string format_trial_records(const std::vector<TrialRecord>& records);

/// Thread count from CONIC_COND_THREADS, else hardware concurrency; at least 1.
std::size_t worker_count();

// Matrix text format: one row per line, whitespace-separated numbers, '#'
// starts a comment, blank lines ignored.
Matrix parse_matrix(std::string_view text);
Matrix read_matrix_file(const std::filesystem::path& path);
std::string format_matrix(const Matrix& a);
void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace conicond
