#include "conicond/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "conicond/errors.hpp"
#include "conicond/linalg.hpp"
#include "conicond/rng.hpp"

namespace conicond {
namespace {

constexpr double kFlipScale = 1.0 + 1e-9;

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Runs body(i) for i in [0, count) on the worker pool.
template <typename Body>
void parallel_for(std::size_t count, Body body) {
  const std::size_t threads = std::min(worker_count(), count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      (void)t;
      for (std::size_t i = next++; i < count && !failed; i = next++) {
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

class FlipSearch {
 public:
  FlipSearch(const Cone& cone, const Matrix& a, Feasibility base) : cone_(cone), a_(a), base_(base) {}

  bool flips(const Matrix& delta) const {
    try {
      return instance_feasibility(cone_, a_ + delta) != base_;
    } catch (const Error&) {
      return false;
    }
  }

  // Candidate expected to flip at full scale.
  void offer(const Matrix& delta) {
    const double size = spectral_norm(delta) * kFlipScale;
    if (size >= best_) return;
    if (flips(delta * kFlipScale)) best_ = size;
  }

  // Random direction: grow until it flips, then bisect on the scale.
  void offer_direction(const Matrix& direction, double a_norm) {
    const Matrix unit = direction * (1.0 / spectral_norm(direction));
    double hi = a_norm / 64.0;
    while (hi < std::min(best_, 8.0 * a_norm) && !flips(unit * hi)) hi *= 2.0;
    if (hi >= best_ || hi >= 8.0 * a_norm) return;
    double lo = 0.0;
    for (int it = 0; it < 30; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (flips(unit * mid)) hi = mid; else lo = mid;
    }
    best_ = std::min(best_, hi);
  }

  double best() const { return best_; }

 private:
  const Cone& cone_;
  const Matrix& a_;
  Feasibility base_;
  double best_ = kInfinity;
};

}  // namespace

double oracle_cone_angle(const Cone& cone, const Subspace& w, std::size_t samples, std::uint64_t seed) {
  require(samples >= 1000, ErrorKind::kDimension, "the angle oracle needs at least 1000 samples");
  require(cone.dim() == w.ambient_dim(), ErrorKind::kDimension, "cone and subspace dimensions differ");
  const std::size_t chunks = std::min<std::size_t>(64, samples);
  std::vector<double> best(chunks, kInfinity);
  parallel_for(chunks, [&](std::size_t c) {
    CounterRng rng(seed, c);
    const std::size_t begin = samples * c / chunks;
    const std::size_t end = samples * (c + 1) / chunks;
    for (std::size_t i = begin; i < end; ++i) {
      const Vector x = i % 8 == 0 ? cone.sample_extreme(rng) : cone.sample(rng);
      best[c] = std::min(best[c], angle_point_subspace(x, w));
    }
  });
  return *std::min_element(best.begin(), best.end());
}

Feasibility instance_feasibility(const Cone& cone, const Matrix& a, const ConditionOptions& options) {
  require(a.cols() == cone.dim(), ErrorKind::kDimension, "matrix width does not match the cone");
  if (numerical_rank(a) < a.rows()) {
    const double d = dual_distance(cone, a, options.search).value;
    return d <= 1e-14 * std::max(1.0, spectral_norm(a)) ? Feasibility::kIllPosed : Feasibility::kDualStrict;
  }
  return classify_feasibility(cone, Subspace::from_rowspan(a), options.angle_threshold, options.search).tag;
}

double oracle_perturbation_bracket(const Cone& cone, const Matrix& a, std::size_t budget, std::uint64_t seed) {
  require(budget >= 1000, ErrorKind::kDimension, "the perturbation oracle needs a budget of at least 1000");
  const Feasibility base = instance_feasibility(cone, a);
  if (base == Feasibility::kIllPosed) return 0.0;

  const double a_norm = spectral_norm(a);
  FlipSearch search(cone, a, base);
  CounterRng rng(seed, 0);
  const std::size_t random_directions = std::max<std::size_t>(10, budget / 50);
  const std::size_t guided = budget - random_directions;

  if (base == Feasibility::kPrimalStrict) {
    // Move a point of C into the row space: B + Delta_B contains x, and
    // S (B + Delta_B) has the same row space.
    const PolarFactors polar = polar_decompose(a);
    const auto lift = [&](std::span<const double> x) {
      try {
        search.offer(polar.scale * witness_image(polar.balanced_part, x).delta);
      } catch (const Error&) {
      }
    };
    const Subspace w = Subspace::from_orthonormal_rows(polar.balanced_part);
    lift(cone_subspace_angle(cone, w).witness);
    for (std::size_t i = 1; i < guided; ++i) lift(i % 2 ? cone.sample(rng) : cone.sample_extreme(rng));
  } else {
    // Push a point of the dual cone into the kernel.
    const Cone dual = cone.dual();
    const auto push = [&](std::span<const double> p) { search.offer(Matrix::outer(a * p, p) * -1.0); };
    push(dual_distance(cone, a).minimizer);
    for (std::size_t i = 1; i < guided; ++i) push(i % 2 ? dual.sample(rng) : dual.sample_extreme(rng));
  }
  for (std::size_t i = 0; i < random_directions; ++i)
    search.offer_direction(rng.gaussian_matrix(a.rows(), a.cols()), a_norm);
  return search.best();
}

bool sandwich_holds(double grassmann, double kappa, const ConditionValue& renegar, double slack) {
  const auto le = [slack](double x, double y) {
    if (std::isinf(y)) return true;
    if (std::isinf(x)) return false;
    return x <= y + slack * std::max(1.0, std::abs(y));
  };
  return le(grassmann, renegar.lower) && le(renegar.upper, kappa * grassmann);
}

std::size_t worker_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CONIC_COND_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) n = std::min<std::size_t>(n, static_cast<std::size_t>(v));
  }
  return n;
}

std::vector<TrialRecord> run_experiment(const ExperimentConfig& config) {
  require(config.m >= 1 && config.m < config.n, ErrorKind::kDimension, "experiments need 1 <= m < n");
  require(config.trials >= 1, ErrorKind::kDimension, "experiments need at least one trial");
  const Cone cone = config.cone_spec.empty() ? Cone::orthant(config.n) : parse_cone(config.cone_spec);
  require(cone.dim() == config.n, ErrorKind::kDimension, "cone dimension does not match n");

  std::vector<TrialRecord> records(config.trials);
  parallel_for(config.trials, [&](std::size_t t) {
    CounterRng rng(config.seed, t);
    const Matrix a = rng.gaussian_matrix(config.m, config.n);
    TrialRecord& r = records[t];
    r.trial_index = t;
    r.kappa = kappa(a);
    const FeasibilityStatus status = classify_feasibility(cone, Subspace::from_rowspan(a));
    r.status = status.tag;
    r.grassmann = grassmann_condition(status).value();
    r.renegar = renegar_condition(cone, a);
    r.sandwich_ok = sandwich_holds(r.grassmann, r.kappa, r.renegar);
  });

  if (!config.output_path.empty()) write_text_file(config.output_path, format_trial_records(records));
  return records;
}

std::string format_trial_records(const std::vector<TrialRecord>& records) {
  std::ostringstream out;
  out << "trial,status,grassmann,kappa,renegar_kind,renegar_lower,renegar_upper,sandwich_ok\n";
  for (const auto& r : records) {
    out << r.trial_index << ',' << to_string(r.status) << ',' << format_double(r.grassmann) << ','
        << format_double(r.kappa) << ',' << (r.renegar.is_exact() ? "exact" : "interval") << ','
        << format_double(r.renegar.lower) << ',' << format_double(r.renegar.upper) << ','
        << (r.sandwich_ok ? "true" : "false") << '\n';
  }
  return out.str();
}

Matrix parse_matrix(std::string_view text) {
  std::vector<Vector> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    Vector row;
    std::string token;
    while (fields >> token) {
      char* end = nullptr;
      const double v = std::strtod(token.c_str(), &end);
      require(end == token.c_str() + token.size() && std::isfinite(v), ErrorKind::kParse,
              "line " + std::to_string(line_no) + ": bad number '" + token + "'");
      row.push_back(v);
    }
    if (row.empty()) continue;
    require(rows.empty() || row.size() == rows.front().size(), ErrorKind::kParse,
            "line " + std::to_string(line_no) + ": row length differs from the first row");
    rows.push_back(std::move(row));
  }
  require(!rows.empty(), ErrorKind::kParse, "matrix text has no rows");
  return Matrix::from_rows(rows);
}

Matrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::kIo, "cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_matrix(text.str());
}

std::string format_matrix(const Matrix& a) {
  std::string out;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j) out += ' ';
      out += format_double(a(i, j));
    }
    out += '\n';
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::kIo, "cannot write " + path.string());
  out << contents;
  require(static_cast<bool>(out), ErrorKind::kIo, "write failed for " + path.string());
}

}  // namespace conicond
