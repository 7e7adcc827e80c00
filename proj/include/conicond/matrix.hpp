#pragma once

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <vector>

namespace conicond {

using Vector = std::vector<double>;

/// Dense real matrix, row-major. Entries are required to be finite.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<Vector>& rows);
  static Matrix diagonal(std::span<const double> d, std::size_t rows, std::size_t cols);
  /// x * y^T
  static Matrix outer(std::span<const double> x, std::span<const double> y);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  Vector col(std::size_t j) const;
  void set_col(std::size_t j, std::span<const double> v);

  std::span<const double> data() const noexcept { return data_; }

  Matrix transpose() const;
  /// Columns listed in `indices`, in that order.
  Matrix select_cols(std::span<const std::size_t> indices) const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

  bool all_finite() const;
  double frobenius_norm() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);

std::ostream& operator<<(std::ostream& os, const Matrix& a);

// Vector helpers.
double dot(std::span<const double> x, std::span<const double> y);
double norm(std::span<const double> x);
Vector normalized(std::span<const double> x);
Vector add(std::span<const double> x, std::span<const double> y);
Vector sub(std::span<const double> x, std::span<const double> y);
Vector scaled(std::span<const double> x, double s);
/// A^T * y
Vector transpose_times(const Matrix& a, std::span<const double> y);

}  // namespace conicond
