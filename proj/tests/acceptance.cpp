#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "conicond/condition.hpp"
#include "conicond/errors.hpp"
#include "conicond/gcc.hpp"
#include "conicond/grassmann.hpp"
#include "conicond/harness.hpp"
#include "conicond/linalg.hpp"
#include "support.hpp"

using namespace conicond;
using namespace testing_support;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool condition, const std::string& what) {
    if (!condition && ok) {
      ok = false;
      detail = what;
    }
  }
};

Subspace span_of(const Matrix& rows) { return Subspace::from_rowspan(rows); }

Outcome balanced_routes() {
  Outcome out;
  CounterRng rng(1001, 0);
  const std::pair<std::size_t, std::size_t> shapes[] = {{4, 2}, {5, 2}, {6, 3}};
  int primal = 0, dual = 0;
  for (int t = 0; t < 200; ++t) {
    const auto [n, m] = shapes[t % 3];
    const Matrix b = random_balanced(rng, m, n);
    const Cone c = Cone::orthant(n);
    const FeasibilityStatus status = classify_feasibility(c, span_of(b));
    const double g = grassmann_condition(status).value();
    if (status.tag == Feasibility::kDualStrict) {
      ++dual;
      const double direct = spectral_norm(b) / dual_distance(c, b).value;
      out.require(rel_close(g, direct, 1e-6), "dual routes disagree at trial " + std::to_string(t));
    } else {
      ++primal;
      const double upper = oracle_perturbation_bracket(c, b, 1000, t);
      const double ratio = spectral_norm(b) / upper;
      out.require(ratio >= 0.95 * g && ratio <= g * (1 + 1e-6),
                  "bracket inconsistent at trial " + std::to_string(t));
    }
  }
  out.require(primal > 0 && dual > 0, "both feasibility classes must occur");
  out.detail += " (" + std::to_string(primal) + " primal, " + std::to_string(dual) + " dual)";
  return out;
}

Outcome sandwich() {
  Outcome out;
  CounterRng rng(1002, 0);
  int violations = 0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t m = 2 + rng.below(2), n = m + 2 + rng.below(3);
    const Matrix a = random_spd(rng, m, 0.5, 4.0) * random_balanced(rng, m, n);
    const double g = grassmann_condition(Cone::orthant(n), span_of(a)).value();
    const double k = kappa(a);
    const ConditionValue r = renegar_condition(Cone::orthant(n), a);
    bool ok = sandwich_holds(g, k, r);
    if (!r.is_exact()) ok = ok && r.lower == g && r.upper == k * g;
    violations += !ok;
  }
  out.require(violations == 0, std::to_string(violations) + " violations");
  return out;
}

Outcome projection_distance() {
  Outcome out;
  CounterRng rng(1003, 0);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = t % 2 ? 6 : 7, m = t % 2 ? 2 : 3;
    const Subspace w1 = span_of(rng.gaussian_matrix(m, n)), w2 = span_of(rng.gaussian_matrix(m, n));
    const GrassmannDistances d = grassmann_distances(w1, w2);
    out.require(std::abs(d.projection - std::sin(d.hausdorff)) <= 1e-10, "d_p != sin d_H");
    out.require(d.projection <= std::sin(std::min(d.geodesic, kPi / 2)) + 1e-12, "d_p > sin d_g");
    const GrassmannDistances dc = grassmann_distances(complement(w1), complement(w2));
    out.require(std::abs(dc.projection - d.projection) <= 1e-9 && std::abs(dc.geodesic - d.geodesic) <= 1e-9,
                "complement is not an isometry");
  }
  return out;
}

Outcome witnesses() {
  Outcome out;
  CounterRng rng(1004, 0);
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = 1 + rng.below(3), n = m + 1 + rng.below(4);
    const Matrix b = random_balanced(rng, m, n);
    const Vector x = rng.gaussian_vector(n);
    const double alpha = angle_point_subspace(x, span_of(b));
    const PerturbationWitness wi = witness_image(b, x);
    const PerturbationWitness wk = witness_kernel(b, x);
    out.require(std::abs(wi.delta.frobenius_norm() - std::sin(alpha)) <= 1e-10, "image witness norm");
    out.require(std::abs(wk.delta.frobenius_norm() - std::cos(alpha)) <= 1e-10, "kernel witness norm");
    out.require(angle_point_subspace(x, span_of(b + wi.delta)) <= 1e-9, "image membership residual");
    out.require(norm((b + wk.delta) * normalized(x)) <= 1e-9, "kernel residual");
  }
  return out;
}

Outcome regression_values() {
  Outcome out;
  const auto a_eps = [](double e) { return Matrix{{2 * e, 1, 1}, {0, -1, 1}}; };
  const auto a_tilde = [](double e) { return Matrix{{1 + e, 1 + e, -1 + e}, {-1, -1, 1}}; };
  for (double e : {0.5, 0.1, 0.01})
    out.require(std::abs(gcc_condition(a_eps(e)).value() - std::sqrt(2.0)) <= 1e-9, "GCC(A_eps) != sqrt 2");

  const Matrix a = a_eps(0.5);
  std::vector<Vector> cols;
  for (std::size_t j = 0; j < 3; ++j) cols.push_back(normalized(a.col(j)));
  const SphericalCap cap = smallest_enclosing_cap(cols);
  out.require(std::abs(cap.radius - kPi / 4) <= 1e-9, "cap radius");
  out.require(std::abs(cap.center[0] - 1) <= 1e-9 && std::abs(cap.center[1]) <= 1e-9, "cap center");

  for (double e : {0.1, 0.01}) {
    const double closed = std::sqrt(1 + 2 * e * e) / (e * std::sqrt(2.0));
    const double g = grassmann_condition(Cone::orthant(3), span_of(a_eps(e))).value();
    out.require(rel_close(g, closed, 1e-6), "C(W_eps) closed form");
  }
  const double scaled = gcc_condition(a_tilde(1e-3)).value() * 1e-3 / 2;
  out.require(scaled >= 0.99 && scaled <= 1.01, "GCC(A~_eps) growth");
  const double g1 = grassmann_condition(Cone::orthant(3), span_of(a_tilde(0.1))).value();
  const double g2 = grassmann_condition(Cone::orthant(3), span_of(a_tilde(0.01))).value();
  out.require(rel_close(g1, g2, 1e-9), "C(W~_eps) depends on eps");
  return out;
}

Outcome comparison_inequalities() {
  Outcome out;
  CounterRng rng(1006, 0);
  for (int t = 0; t < 300; ++t) {
    const std::size_t m = 2 + rng.below(2), n = m + 1 + rng.below(4);
    const Matrix a = rng.gaussian_matrix(m, n);
    const double g = grassmann_condition(Cone::orthant(n), span_of(a)).value();
    const double gcc = gcc_condition(a).value();
    double min_col = kInfinity;
    for (std::size_t j = 0; j < n; ++j) min_col = std::min(min_col, norm(a.col(j)));
    out.require(min_col / spectral_norm(a) * g <= gcc * (1 + 1e-9), "lower comparison");
    out.require(gcc <= std::sqrt(static_cast<double>(n)) * kappa(a) * g * (1 + 1e-9), "upper comparison");
  }
  return out;
}

// Angle between the line W^perp and -R^2_+, by scanning the quarter circle.
double scanned_dual_angle(double theta, int points) {
  const Vector perp{-std::sin(theta), std::cos(theta)};
  double best = kPi;
  for (int k = 0; k <= points; ++k) {
    const double phi = kPi + 0.5 * kPi * k / points;
    const double c = std::abs(std::cos(phi) * perp[0] + std::sin(phi) * perp[1]);
    best = std::min(best, std::acos(std::min(1.0, c)));
  }
  return best;
}

Outcome planar_closed_form() {
  Outcome out;
  for (int k = 1; k <= 50; ++k) {
    const double theta = 0.5 * kPi * k / 51.0;
    const double closed = std::min(theta, 0.5 * kPi - theta);
    const double scanned = scanned_dual_angle(theta, 200000);
    out.require(scanned >= closed - 1e-12 && scanned - closed <= 1e-5, "scan oracle rejects the closed form");
    const double g = grassmann_condition(Cone::orthant(2), span_of(Matrix{{std::cos(theta), std::sin(theta)}})).value();
    out.require(rel_close(g, 1 / std::sin(closed), 1e-8), "C(W) off the closed form");
  }
  return out;
}

Outcome eckart_young() {
  Outcome out;
  CounterRng rng(1008, 0);
  for (int t = 0; t < 10; ++t) {
    const std::size_t m = 2 + rng.below(3), n = m + 1 + rng.below(4);
    const Matrix a = rng.gaussian_matrix(m, n);
    const double sm = rank_deficiency_distance(a);
    out.require(rel_close(sm, singular_values(a).back(), 1e-14), "distance != sigma_m");
    const Matrix e = eckart_young_truncation(a);
    out.require(rel_close(spectral_norm(e), sm, 1e-10), "truncation norm");
    out.require(numerical_rank(a - e) < m, "truncation keeps full rank");
    for (int s = 0; s < 100; ++s) {
      Matrix u = s % 2 ? rng.gaussian_matrix(m, n) : Matrix::outer(rng.unit_vector(m), rng.unit_vector(n));
      u = u * ((sm - 1e-6) / spectral_norm(u));
      out.require(numerical_rank(a - u) == m, "sub-threshold perturbation drops rank");
    }
  }
  return out;
}

Outcome sigma_and_inclusion() {
  Outcome out;
  CounterRng rng(1009, 0);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 3 + rng.below(4), m = 1 + rng.below(n - 1);
    const SigmaDistances s = sigma_distances(Cone::orthant(n), span_of(rng.gaussian_matrix(m, n)));
    out.require(std::abs(std::asin(s.projection) - s.geodesic) <= 1e-12, "arcsin round trip");
  }
  int found = 0;
  for (int t = 0; found < 20 && t < 2000; ++t) {
    const std::size_t n = 4 + rng.below(3), m = 1 + rng.below(2);
    const Subspace w = span_of(rng.gaussian_matrix(m, n));
    const FeasibilityStatus status = classify_feasibility(Cone::orthant(n), w);
    if (status.tag != Feasibility::kPrimalStrict) continue;
    ++found;
    const InclusionRadius r = inclusion_radius_check(Cone::orthant(n), w, 200000, t);
    const double expected = 1 / grassmann_condition(status).value();
    out.require(r.agreement && std::abs(r.estimate - expected) <= 0.1 * expected,
                "inclusion radius off at instance " + std::to_string(found));
  }
  out.require(found == 20, "not enough primal instances");
  return out;
}

Outcome classification_soundness() {
  Outcome out;
  CounterRng rng(1010, 0);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 3 + rng.below(6), m = 1 + rng.below(n - 1);
    try {
      const auto status = classify_feasibility(Cone::orthant(n), span_of(rng.gaussian_matrix(m, n)));
      out.require(status.tag != Feasibility::kIllPosed, "random subspace classified ill-posed");
    } catch (const Error& e) {
      out.require(false, std::string("classification error: ") + e.what());
    }
  }

  // W = R x + Wbar with x >= 0 supported on a face and Wbar inside
  // x^perp and e_i^perp for an index i off the face; W misses int C.
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 4 + rng.below(3), m = 2 + rng.below(n - 3);
    const std::size_t off = rng.below(n);
    Vector x(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
      if (j != off && (rng.uniform() < 0.6 || j == (off + 1) % n)) x[j] = 0.2 + rng.uniform();
    Vector ei(n, 0.0);
    ei[off] = 1.0;
    Matrix seed(m + 1, n);
    for (std::size_t j = 0; j < n; ++j) {
      seed(0, j) = x[j];
      seed(1, j) = ei[j];
    }
    for (std::size_t i = 2; i <= m; ++i)
      for (std::size_t j = 0; j < n; ++j) seed(i, j) = rng.gaussian();
    const Matrix q = orthonormal_rows(seed);
    Matrix wbar(m - 1, n);
    for (std::size_t i = 0; i + 1 < m; ++i)
      for (std::size_t j = 0; j < n; ++j) wbar(i, j) = q(i + 2, j);

    const auto with_first = [&](const Vector& v) {
      Matrix rows(m, n);
      for (std::size_t j = 0; j < n; ++j) rows(0, j) = v[j];
      for (std::size_t i = 1; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) rows(i, j) = wbar(i - 1, j);
      return span_of(rows);
    };
    const Subspace w = with_first(x);
    out.require(classify_feasibility(Cone::orthant(n), w).tag == Feasibility::kIllPosed,
                "constructed subspace is not ill-posed");
    double previous = kInfinity;
    for (double k : {10.0, 100.0, 1000.0}) {
      Vector xk = x;
      for (double& v : xk) v += 1 / k;
      const Subspace wk = with_first(xk);
      out.require(classify_feasibility(Cone::orthant(n), wk).tag == Feasibility::kDualStrict,
                  "approximating subspace not dual strict");
      const double d = grassmann_distances(wk, w).projection;
      out.require(d < previous, "distance does not decrease");
      previous = d;
    }
    out.require(previous <= 1e-2, "distance does not approach zero");
  }
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"balanced instances: C(W) = R(B)", balanced_routes},
      {"sandwich C(W) <= R(A) <= kappa(A) C(W)", sandwich},
      {"projection distance identities", projection_distance},
      {"perturbation witnesses", witnesses},
      {"closed-form regression values", regression_values},
      {"GCC comparison inequalities", comparison_inequalities},
      {"planar closed form", planar_closed_form},
      {"Eckart-Young", eckart_young},
      {"distance to ill-posedness and inclusion radius", sigma_and_inclusion},
      {"classification soundness and boundary approach", classification_soundness},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.ok;
    std::printf("criterion %2zu: %s  %s  [%.1fs]%s%s\n", i + 1, o.ok ? "PASS" : "FAIL", criteria[i].first.c_str(),
                secs, o.detail.empty() ? "" : "  ", o.detail.c_str());
  }
  return failures == 0 ? 0 : 1;
}
