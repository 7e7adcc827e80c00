#pragma once

#include "conicond/matrix.hpp"

namespace conicond {

inline constexpr double kDefaultRankTolerance = 1e-9;

struct SvdOptions {
  /// A column pair counts as orthogonal once |c_i.c_j| <= tolerance * |c_i| |c_j|.
  double orthogonality_tolerance = 1e-14;
  int max_sweeps = 60;
};

/// A = left * diag(values) * right^T with full orthogonal factors.
struct SvdFactorization {
  Matrix left;    // m x m
  Vector values;  // min(m, n), nonincreasing
  Matrix right;   // n x n
};

/// One-sided (Hestenes) Jacobi SVD.
SvdFactorization svd_factorize(const Matrix& a, const SvdOptions& options = {});

/// Singular values only, nonincreasing.
Vector singular_values(const Matrix& a);

/// Eigen-decomposition of a symmetric matrix: values nonincreasing, vectors as columns.
struct SymmetricEigen {
  Vector values;
  Matrix vectors;
};

SymmetricEigen symmetric_eigen(const Matrix& s);

struct MatrixNorms {
  double spectral = 0.0;
  double frobenius = 0.0;
};

MatrixNorms matrix_norms(const Matrix& a);
double spectral_norm(const Matrix& a);

/// kappa(A) = |A| |A^+| for m <= n; infinity once sigma_m <= tol * sigma_1.
double kappa(const Matrix& a, double rank_tolerance = kDefaultRankTolerance);

/// A = scale * balanced_part with scale = sqrt(A A^T) and balanced_part * balanced_part^T = I.
struct PolarFactors {
  Matrix scale;
  Matrix balanced_part;
};

PolarFactors polar_decompose(const Matrix& a, double rank_tolerance = kDefaultRankTolerance);

Matrix pseudoinverse(const Matrix& a, double rank_tolerance = kDefaultRankTolerance);

/// Spectral distance to the rank-deficient matrices, i.e. sigma_m (Eckart-Young).
double rank_deficiency_distance(const Matrix& a);

/// The rank-one matrix of norm sigma_m whose subtraction drops the rank of A.
Matrix eckart_young_truncation(const Matrix& a);

std::size_t numerical_rank(const Matrix& a, double rank_tolerance = kDefaultRankTolerance);

/// |A A^T - I|_F <= tolerance.
bool is_balanced(const Matrix& a, double tolerance = 1e-9);

/// Orthonormal columns spanning the orthogonal complement of the (orthonormal)
/// columns of q. Returns a p x (p - k) matrix.
Matrix complete_orthonormal_basis(const Matrix& q);

}  // namespace conicond
