#include "conicond/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "conicond/errors.hpp"

namespace conicond {
namespace {

void require_finite(const Matrix& a) {
  require(a.rows() > 0 && a.cols() > 0, ErrorKind::kDimension, "matrix must be non-empty");
  require(a.all_finite(), ErrorKind::kNumericalFailure, "matrix has non-finite entries");
}

// Rotate column pairs of `cols` until they are mutually orthogonal. `v`
// accumulates the rotations so that original * v = rotated.
void hestenes_sweeps(std::vector<Vector>& cols, Matrix& v, const SvdOptions& options) {
  const std::size_t q = cols.size();
  for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < q; ++i) {
      for (std::size_t j = i + 1; j < q; ++j) {
        const double alpha = dot(cols[i], cols[i]);
        const double beta = dot(cols[j], cols[j]);
        const double gamma = dot(cols[i], cols[j]);
        const double scale = std::sqrt(alpha) * std::sqrt(beta);
        if (scale == 0.0 || std::abs(gamma) <= options.orthogonality_tolerance * scale) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        for (std::size_t k = 0; k < cols[i].size(); ++k) {
          const double xi = cols[i][k];
          const double xj = cols[j][k];
          cols[i][k] = c * xi - s * xj;
          cols[j][k] = s * xi + c * xj;
        }
        for (std::size_t k = 0; k < v.rows(); ++k) {
          const double vi = v(k, i);
          const double vj = v(k, j);
          v(k, i) = c * vi - s * vj;
          v(k, j) = s * vi + c * vj;
        }
      }
    }
    if (!rotated) return;
  }
  fail(ErrorKind::kNumericalFailure, "Jacobi SVD did not converge within the sweep budget");
}

}  // namespace

Matrix complete_orthonormal_basis(const Matrix& q) {
  const std::size_t p = q.rows();
  const std::size_t k = q.cols();
  require(k <= p, ErrorKind::kDimension, "more basis vectors than the ambient dimension");
  std::vector<Vector> basis;
  basis.reserve(p);
  for (std::size_t j = 0; j < k; ++j) basis.push_back(q.col(j));

  // residual[i] = e_i minus its projection onto the current basis.
  std::vector<Vector> residual(p, Vector(p, 0.0));
  for (std::size_t i = 0; i < p; ++i) {
    residual[i][i] = 1.0;
    for (const auto& b : basis) {
      const double c = b[i];
      for (std::size_t r = 0; r < p; ++r) residual[i][r] -= c * b[r];
    }
  }

  Matrix out(p, p - k);
  for (std::size_t t = 0; t < p - k; ++t) {
    std::size_t best = 0;
    double best_norm = -1.0;
    for (std::size_t i = 0; i < p; ++i) {
      const double ni = norm(residual[i]);
      if (ni > best_norm) {
        best_norm = ni;
        best = i;
      }
    }
    Vector candidate = residual[best];
    // Second Gram-Schmidt pass against everything accepted so far.
    for (const auto& b : basis) {
      const double c = dot(b, candidate);
      for (std::size_t r = 0; r < p; ++r) candidate[r] -= c * b[r];
    }
    const double nc = norm(candidate);
    require(nc > 1e-8, ErrorKind::kNumericalFailure, "basis completion lost orthogonality");
    candidate = scaled(candidate, 1.0 / nc);
    for (auto& res : residual) {
      const double c = dot(candidate, res);
      for (std::size_t r = 0; r < p; ++r) res[r] -= c * candidate[r];
    }
    out.set_col(t, candidate);
    basis.push_back(std::move(candidate));
  }
  return out;
}

SvdFactorization svd_factorize(const Matrix& a, const SvdOptions& options) {
  require_finite(a);
  const bool tall = a.rows() >= a.cols();
  const Matrix work = tall ? a : a.transpose();
  const std::size_t p = work.rows();
  const std::size_t q = work.cols();

  std::vector<Vector> cols(q);
  for (std::size_t j = 0; j < q; ++j) cols[j] = work.col(j);
  Matrix v = Matrix::identity(q);
  hestenes_sweeps(cols, v, options);

  Vector sigma(q);
  for (std::size_t j = 0; j < q; ++j) sigma[j] = norm(cols[j]);
  std::vector<std::size_t> order(q);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  const double sigma_max = q ? sigma[order[0]] : 0.0;
  SvdFactorization out;
  out.values.resize(q);
  Matrix v_sorted(q, q);
  std::vector<Vector> u_kept;
  for (std::size_t t = 0; t < q; ++t) {
    const std::size_t j = order[t];
    out.values[t] = sigma[j];
    for (std::size_t r = 0; r < q; ++r) v_sorted(r, t) = v(r, j);
    if (sigma[j] > 1e-13 * sigma_max && sigma[j] > 0.0) u_kept.push_back(scaled(cols[j], 1.0 / sigma[j]));
  }

  Matrix u_full(p, p);
  for (std::size_t t = 0; t < u_kept.size(); ++t) u_full.set_col(t, u_kept[t]);
  Matrix kept(p, u_kept.size());
  for (std::size_t t = 0; t < u_kept.size(); ++t) kept.set_col(t, u_kept[t]);
  const Matrix rest = complete_orthonormal_basis(kept);
  for (std::size_t t = 0; t < rest.cols(); ++t) u_full.set_col(u_kept.size() + t, rest.col(t));

  if (tall) {
    out.left = std::move(u_full);
    out.right = std::move(v_sorted);
  } else {
    out.left = std::move(v_sorted);
    out.right = std::move(u_full);
  }
  return out;
}

Vector singular_values(const Matrix& a) { return svd_factorize(a).values; }

SymmetricEigen symmetric_eigen(const Matrix& s) {
  require(s.rows() == s.cols(), ErrorKind::kDimension, "eigen-decomposition needs a square matrix");
  require_finite(s);
  const std::size_t n = s.rows();
  Matrix a = s;
  Matrix v = Matrix::identity(n);
  constexpr int kMaxSweeps = 100;
  const double total = std::max(a.frobenius_norm(), std::numeric_limits<double>::min());
  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (std::sqrt(off) <= 1e-16 * total) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(1.0, theta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double sn = c * t;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    require(std::sqrt(off) <= 1e-12 * total, ErrorKind::kNumericalFailure, "Jacobi eigensolver did not converge");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });
  SymmetricEigen out{Vector(n), Matrix(n, n)};
  for (std::size_t t = 0; t < n; ++t) {
    out.values[t] = a(order[t], order[t]);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, t) = v(r, order[t]);
  }
  return out;
}

MatrixNorms matrix_norms(const Matrix& a) {
  require_finite(a);
  return {spectral_norm(a), a.frobenius_norm()};
}

double spectral_norm(const Matrix& a) {
  const Vector s = singular_values(a);
  return s.empty() ? 0.0 : s.front();
}

double kappa(const Matrix& a, double rank_tolerance) {
  require(a.rows() > 0 && a.rows() <= a.cols(), ErrorKind::kDimension, "kappa needs 1 <= m <= n");
  const Vector s = singular_values(a);
  const double smin = s.back();
  if (smin <= rank_tolerance * s.front()) return std::numeric_limits<double>::infinity();
  return s.front() / smin;
}

PolarFactors polar_decompose(const Matrix& a, double rank_tolerance) {
  require(a.rows() > 0 && a.rows() < a.cols(), ErrorKind::kDimension, "polar decomposition needs 1 <= m < n");
  const std::size_t m = a.rows();
  const SvdFactorization f = svd_factorize(a);
  require(f.values.back() > rank_tolerance * f.values.front(), ErrorKind::kRankDeficient,
          "matrix does not have full row rank");
  PolarFactors out{Matrix(m, m), Matrix(m, a.cols())};
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < m; ++k) s += f.left(i, k) * f.values[k] * f.left(j, k);
      out.scale(i, j) = s;
    }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < m; ++k) s += f.left(i, k) * f.right(j, k);
      out.balanced_part(i, j) = s;
    }
  return out;
}

Matrix pseudoinverse(const Matrix& a, double rank_tolerance) {
  const SvdFactorization f = svd_factorize(a);
  Matrix out(a.cols(), a.rows());
  const double cutoff = rank_tolerance * f.values.front();
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    if (f.values[k] <= cutoff || f.values[k] == 0.0) continue;
    const double inv = 1.0 / f.values[k];
    for (std::size_t i = 0; i < a.cols(); ++i)
      for (std::size_t j = 0; j < a.rows(); ++j) out(i, j) += f.right(i, k) * inv * f.left(j, k);
  }
  return out;
}

double rank_deficiency_distance(const Matrix& a) {
  require(a.rows() > 0 && a.rows() <= a.cols(), ErrorKind::kDimension, "needs 1 <= m <= n");
  return singular_values(a).back();
}

Matrix eckart_young_truncation(const Matrix& a) {
  require(a.rows() > 0 && a.rows() <= a.cols(), ErrorKind::kDimension, "needs 1 <= m <= n");
  const SvdFactorization f = svd_factorize(a);
  const std::size_t last = a.rows() - 1;
  return f.values[last] * Matrix::outer(f.left.col(last), f.right.col(last));
}

std::size_t numerical_rank(const Matrix& a, double rank_tolerance) {
  const Vector s = singular_values(a);
  if (s.front() == 0.0) return 0;
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [&](double v) { return v > rank_tolerance * s.front(); }));
}

bool is_balanced(const Matrix& a, double tolerance) {
  const Matrix gram = a * a.transpose();
  return (gram - Matrix::identity(a.rows())).frobenius_norm() <= tolerance;
}

}  // namespace conicond
