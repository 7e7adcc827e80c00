#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "conicond/linalg.hpp"
#include "conicond/matrix.hpp"
#include "conicond/rng.hpp"

namespace testing_support {

using conicond::CounterRng;
using conicond::Matrix;
using conicond::Vector;

inline constexpr double kPi = std::numbers::pi;

inline bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// Classical Gram-Schmidt on the rows, twice for stability. Independent of the
// library's SVD-based orthonormalization.
inline Matrix orthonormal_rows(const Matrix& a) {
  Matrix q = a;
  for (std::size_t i = 0; i < q.rows(); ++i) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < i; ++k) {
        double d = 0.0;
        for (std::size_t j = 0; j < q.cols(); ++j) d += q(i, j) * q(k, j);
        for (std::size_t j = 0; j < q.cols(); ++j) q(i, j) -= d * q(k, j);
      }
    }
    double s = 0.0;
    for (std::size_t j = 0; j < q.cols(); ++j) s += q(i, j) * q(i, j);
    s = std::sqrt(s);
    for (std::size_t j = 0; j < q.cols(); ++j) q(i, j) /= s;
  }
  return q;
}

inline Matrix random_balanced(CounterRng& rng, std::size_t m, std::size_t n) {
  return orthonormal_rows(rng.gaussian_matrix(m, n));
}

inline Matrix random_orthogonal(CounterRng& rng, std::size_t n) {
  return orthonormal_rows(rng.gaussian_matrix(n, n));
}

// Symmetric positive definite with eigenvalues drawn from [lo, hi].
inline Matrix random_spd(CounterRng& rng, std::size_t m, double lo, double hi) {
  const Matrix q = random_orthogonal(rng, m);
  Matrix d(m, m);
  for (std::size_t i = 0; i < m; ++i) d(i, i) = lo + (hi - lo) * rng.uniform();
  return q.transpose() * d * q;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  double out = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out = std::max(out, std::abs(a(i, j) - b(i, j)));
  return out;
}

// Spectral norm by power iteration on A^T A; independent of the Jacobi SVD.
inline double power_norm(const Matrix& a, int iterations = 2000) {
  Vector v(a.cols(), 1.0);
  for (std::size_t j = 0; j < v.size(); ++j) v[j] += 0.01 * static_cast<double>(j);
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Vector w = conicond::transpose_times(a, a * v);
    const double s = conicond::norm(w);
    if (s == 0.0) return 0.0;
    lambda = s / conicond::norm(v);
    v = conicond::scaled(w, 1.0 / s);
  }
  return std::sqrt(lambda);
}

}  // namespace testing_support
