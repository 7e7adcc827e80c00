#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "conicond/errors.hpp"
#include "conicond/gcc.hpp"
#include "conicond/grassmann.hpp"
#include "conicond/linalg.hpp"
#include "support.hpp"

using namespace conicond;
using namespace testing_support;

namespace {

double angle_between(const Vector& a, const Vector& b) {
  return std::acos(std::clamp(dot(a, b) / (norm(a) * norm(b)), -1.0, 1.0));
}

double covering_radius(const std::vector<Vector>& points, const Vector& center) {
  double r = 0.0;
  for (const auto& p : points) r = std::max(r, angle_between(p, center));
  return r;
}

// Smallest covering radius over a dense grid of centers: an upper bound on the
// true minimum, tight to the grid spacing.
double grid_cap_radius(const std::vector<Vector>& points) {
  double best = kPi;
  if (points.front().size() == 2) {
    for (int k = 0; k < 200000; ++k) {
      const double t = 2 * kPi * k / 200000;
      best = std::min(best, covering_radius(points, {std::cos(t), std::sin(t)}));
    }
  } else {
    const int rings = 400;
    for (int i = 0; i <= rings; ++i) {
      const double theta = kPi * i / rings;
      const int around = std::max(1, static_cast<int>(2 * rings * std::sin(theta)));
      for (int j = 0; j < around; ++j) {
        const double phi = 2 * kPi * j / around;
        best = std::min(best, covering_radius(points, {std::sin(theta) * std::cos(phi),
                                                       std::sin(theta) * std::sin(phi), std::cos(theta)}));
      }
    }
  }
  return best;
}

std::vector<Vector> normalized_columns(const Matrix& a) {
  std::vector<Vector> out;
  for (std::size_t j = 0; j < a.cols(); ++j) out.push_back(normalized(a.col(j)));
  return out;
}

Matrix a_eps(double eps) { return Matrix{{2 * eps, 1, 1}, {0, -1, 1}}; }
Matrix a_tilde(double eps) { return Matrix{{1 + eps, 1 + eps, -1 + eps}, {-1, -1, 1}}; }

void check_cap_invariants(const std::vector<Vector>& points, const SphericalCap& cap) {
  CHECK(std::abs(norm(cap.center) - 1.0) <= 1e-12);
  for (const auto& p : points) CHECK(angle_between(p, cap.center) <= cap.radius + 1e-9);
  REQUIRE_FALSE(cap.support.empty());
  for (std::size_t i : cap.support) CHECK(std::abs(angle_between(points[i], cap.center) - cap.radius) <= 1e-8);
}

}  // namespace

TEST_CASE("cap of identical points") {
  const std::vector<Vector> pts(4, Vector{1, 0, 0});
  const SphericalCap cap = smallest_enclosing_cap(pts);
  CHECK(cap.radius <= 1e-12);
  CHECK(norm(sub(cap.center, Vector{1, 0, 0})) <= 1e-12);
  CHECK(gcc_condition(Matrix{{1, 2, 3}, {0, 0, 0}}).value() == doctest::Approx(1.0));
}

TEST_CASE("cap of the normalized columns of A_0.5") {
  const auto pts = normalized_columns(a_eps(0.5));
  const SphericalCap cap = smallest_enclosing_cap(pts);
  CHECK(std::abs(cap.radius - kPi / 4) <= 1e-9);
  CHECK(norm(sub(cap.center, Vector{1, 0})) <= 1e-9);
  check_cap_invariants(pts, cap);
}

TEST_CASE("nearly antipodal pair") {
  const std::vector<Vector> pts{{1, 0}, normalized(Vector{-1, 0.1})};
  const SphericalCap cap = smallest_enclosing_cap(pts);
  const double grid = grid_cap_radius(pts);
  CHECK(cap.radius < kPi / 2);
  CHECK(cap.radius <= grid + 1e-12);
  CHECK(grid - cap.radius <= 1e-4);
  CHECK(cap.radius == doctest::Approx((kPi - std::atan(0.1)) / 2).epsilon(1e-12));
}

TEST_CASE("caps wider than a hemisphere") {
  std::vector<Vector> tri;
  for (int k = 0; k < 3; ++k) tri.push_back({std::cos(2 * kPi * k / 3), std::sin(2 * kPi * k / 3)});
  const SphericalCap cap = smallest_enclosing_cap(tri);
  CHECK(cap.radius == doctest::Approx(2 * kPi / 3).epsilon(1e-12));
  check_cap_invariants(tri, cap);

  const std::vector<Vector> pair{{1, 0}, {-1, 0}};
  CHECK(smallest_enclosing_cap(pair).radius == doctest::Approx(kPi / 2));
  CHECK(gcc_condition(Matrix{{1, -1, 0}, {0, 0, 1}}).is_infinite());

  // +-e1 and e2 in R^3: the hemisphere around e2.
  const std::vector<Vector> three{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}};
  const SphericalCap h = smallest_enclosing_cap(three);
  CHECK(h.radius == doctest::Approx(kPi / 2));
  CHECK(norm(sub(h.center, Vector{0, 1, 0})) <= 1e-9);

  // Points in R^1.
  CHECK(smallest_enclosing_cap({{1}, {-1}}).radius == doctest::Approx(kPi));
  CHECK(smallest_enclosing_cap({{-1}, {-1}}).radius == doctest::Approx(0.0));
}

TEST_CASE("GCC of the A_eps family") {
  for (double eps : {0.5, 0.1, 0.01}) {
    const ConditionValue g = gcc_condition(a_eps(eps));
    CHECK(g.is_exact());
    CHECK(std::abs(g.value() - std::sqrt(2.0)) <= 1e-9);
  }
  const double eps = 1e-3;
  const double g = gcc_condition(a_tilde(eps)).value();
  CHECK(g * eps / 2 >= 0.99);
  CHECK(g * eps / 2 <= 1.01);
}

TEST_CASE("input checks") {
  CHECK_THROWS_AS(smallest_enclosing_cap({}), Error);
  try {
    smallest_enclosing_cap({{1, 0}, {0.5, 0}});
    FAIL("expected NonUnitPoint");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNonUnitPoint);
  }
  try {
    gcc_condition(Matrix{{1, 0, 2}, {1, 0, 1}});
    FAIL("expected ZeroColumn");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kZeroColumn);
  }
}

TEST_CASE("random point sets agree with the grid oracle") {
  CounterRng rng(60, 0);
  for (int t = 0; t < 40; ++t) {
    const std::size_t m = t % 2 ? 2 : 3;
    const std::size_t count = 2 + rng.below(7);
    std::vector<Vector> pts;
    for (std::size_t i = 0; i < count; ++i) pts.push_back(rng.unit_vector(m));
    const SphericalCap cap = smallest_enclosing_cap(pts);
    check_cap_invariants(pts, cap);
    const double grid = grid_cap_radius(pts);
    CHECK(cap.radius <= grid + 1e-12);
    CHECK(grid - cap.radius <= (m == 2 ? 1e-4 : 1e-2));
  }
}

TEST_CASE("cap minimality, equivariance, and scaling invariance") {
  CounterRng rng(61, 0);
  for (int t = 0; t < 50; ++t) {
    const std::size_t m = 2 + rng.below(3), n = m + 1 + rng.below(5);
    const Matrix a = rng.gaussian_matrix(m, n);
    const auto pts = normalized_columns(a);
    const SphericalCap cap = smallest_enclosing_cap(pts);
    // Shrinking the radius loses a point.
    CHECK(covering_radius(pts, cap.center) > cap.radius - 1e-6);

    const Matrix q = random_orthogonal(rng, m);
    const SphericalCap rotated = smallest_enclosing_cap(normalized_columns(q * a));
    CHECK(std::abs(rotated.radius - cap.radius) <= 1e-9);
    CHECK(covering_radius(normalized_columns(q * a), q * cap.center) <= cap.radius + 1e-9);

    Matrix scaled_cols = a;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = 0.1 + 5 * rng.uniform();
      for (std::size_t i = 0; i < m; ++i) scaled_cols(i, j) *= d;
    }
    const ConditionValue g1 = gcc_condition(a), g2 = gcc_condition(scaled_cols);
    CHECK(g1.is_infinite() == g2.is_infinite());
    if (!g1.is_infinite()) CHECK(rel_close(g1.value(), g2.value(), 1e-9));
  }
}

TEST_CASE("comparison with the Grassmann condition") {
  CounterRng rng(62, 0);
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = 2 + rng.below(2), n = m + 1 + rng.below(4);
    const Matrix a = rng.gaussian_matrix(m, n);
    const double g = grassmann_condition(Cone::orthant(n), Subspace::from_rowspan(a)).value();
    const double gcc = gcc_condition(a).value();
    double min_col = kInfinity;
    for (std::size_t j = 0; j < n; ++j) min_col = std::min(min_col, norm(a.col(j)));
    CHECK(min_col / spectral_norm(a) * g <= gcc + 1e-9 * gcc);
    CHECK(gcc <= std::sqrt(static_cast<double>(n)) * kappa(a) * g * (1 + 1e-9));
  }
}
