#include "conicond/gcc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "conicond/errors.hpp"
#include "conicond/linalg.hpp"

namespace conicond {
namespace {

constexpr double kFeasibilitySlack = 1e-12;
constexpr double kAffineRankTolerance = 1e-10;

struct CapCandidate {
  Vector center;
  double cosine = -2.0;
  std::vector<std::size_t> subset;
};

bool covers(const std::vector<Vector>& points, std::span<const double> p, double cosine) {
  return std::all_of(points.begin(), points.end(),
                     [&](const Vector& a) { return dot(a, p) >= cosine - kFeasibilitySlack; });
}

void offer(std::optional<CapCandidate>& best, CapCandidate c) {
  if (!best || c.cosine > best->cosine + 1e-14 ||
      (std::abs(c.cosine - best->cosine) <= 1e-14 && c.subset < best->subset)) {
    best = std::move(c);
  }
}

// Orthonormal columns spanning the complement of span(vectors) in R^m.
Matrix complement_of_span(const std::vector<Vector>& vectors, std::size_t m) {
  Matrix cols(m, vectors.size());
  for (std::size_t j = 0; j < vectors.size(); ++j) cols.set_col(j, vectors[j]);
  const SvdFactorization f = svd_factorize(cols);
  std::size_t rank = 0;
  for (double s : f.values)
    if (s > kAffineRankTolerance * std::max(1.0, f.values.front())) ++rank;
  Matrix out(m, m - rank);
  for (std::size_t j = rank; j < m; ++j) out.set_col(j - rank, f.left.col(j));
  return out;
}

// Candidate caps whose boundary passes through `subset`, an affinely
// independent set of points.
void subset_candidates(const std::vector<Vector>& points, const std::vector<std::size_t>& subset,
                       std::optional<CapCandidate>& best) {
  const std::size_t m = points.front().size();
  const Vector& a0 = points[subset.front()];
  Vector foot = a0;
  if (subset.size() > 1) {
    Matrix diffs(m, subset.size() - 1);
    for (std::size_t j = 1; j < subset.size(); ++j) diffs.set_col(j - 1, sub(points[subset[j]], a0));
    const Vector sv = singular_values(diffs);
    if (sv.back() <= kAffineRankTolerance * std::max(1.0, sv.front())) return;  // affinely dependent
    // Foot of the perpendicular from the origin onto the affine hull.
    const Vector coeff = pseudoinverse(diffs) * a0;
    foot = sub(a0, diffs * coeff);
  }
  const double dist = norm(foot);
  if (dist > 1e-12) {
    for (double sign : {1.0, -1.0}) {
      Vector p = scaled(foot, sign / dist);
      const double cosine = sign * dist;
      if (covers(points, p, cosine)) offer(best, {std::move(p), cosine, subset});
    }
    return;
  }

  // The origin lies on the affine hull: the only equidistant centers are
  // orthogonal to the subset, at radius exactly pi/2. Such a center exists iff
  // the remaining points, projected onto that complement, fit in a closed
  // hemisphere there.
  std::vector<Vector> span_vectors;
  for (std::size_t i : subset) span_vectors.push_back(points[i]);
  const Matrix q = complement_of_span(span_vectors, m);
  if (q.cols() == 0) return;
  std::vector<Vector> projected;
  for (const auto& a : points) {
    Vector coords = transpose_times(q, a);
    if (norm(coords) > 1e-12) projected.push_back(normalized(coords));
  }
  Vector local(q.cols(), 0.0);
  if (projected.empty()) {
    local[0] = 1.0;
  } else {
    const SphericalCap sub_cap = smallest_enclosing_cap(projected);
    if (std::cos(sub_cap.radius) < -kFeasibilitySlack) return;
    local = sub_cap.center;
  }
  Vector p = normalized(q * local);
  if (covers(points, p, 0.0)) offer(best, {std::move(p), 0.0, subset});
}

bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

SphericalCap smallest_enclosing_cap(const std::vector<Vector>& points) {
  require(!points.empty(), ErrorKind::kEmptyInput, "no points");
  const std::size_t m = points.front().size();
  require(m >= 1, ErrorKind::kDimension, "points must have positive dimension");
  for (const auto& a : points) {
    require(a.size() == m, ErrorKind::kDimension, "points have different dimensions");
    require(std::abs(norm(a) - 1.0) <= 1e-9, ErrorKind::kNonUnitPoint, "points must be unit vectors");
  }

  std::optional<CapCandidate> best;
  const std::size_t max_size = std::min(m, points.size());
  for (std::size_t k = 1; k <= max_size; ++k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t j = 0; j < k; ++j) idx[j] = j;
    do {
      subset_candidates(points, idx, best);
    } while (next_combination(idx, points.size()));
  }
  require(best.has_value(), ErrorKind::kNumericalFailure, "no feasible cap found");

  SphericalCap cap;
  cap.center = best->center;
  const double c = std::clamp(best->cosine, -1.0, 1.0);
  cap.radius = std::acos(c);
  for (std::size_t i = 0; i < points.size(); ++i)
    if (dot(points[i], cap.center) <= c + 1e-10) cap.support.push_back(i);
  return cap;
}

ConditionValue gcc_condition(const Matrix& a) {
  require(a.rows() >= 1 && a.cols() >= 1, ErrorKind::kDimension, "empty matrix");
  std::vector<Vector> points;
  points.reserve(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    const Vector col = a.col(j);
    require(norm(col) > 0.0, ErrorKind::kZeroColumn, "column " + std::to_string(j) + " is zero");
    points.push_back(normalized(col));
  }
  const SphericalCap cap = smallest_enclosing_cap(points);
  if (std::abs(cap.radius - std::numbers::pi / 2) <= 1e-9) return ConditionValue::exact(kInfinity, "cap radius pi/2");
  return ConditionValue::exact(1.0 / std::abs(std::cos(cap.radius)), "1/|cos rho| of the smallest enclosing cap");
}

}  // namespace conicond
