// Copyright 2026 The ozo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace ozo {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) noexcept {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * cols_ + j];
  }

  std::span<double> row(std::size_t i) noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }

  Vector col(std::size_t j) const;
  void set_col(std::size_t j, std::span<const double> v);

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  Matrix transpose() const;
  Matrix& operator*=(double s) noexcept;

  /// True when every entry is finite.
  bool all_finite() const noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);

/// Aᵀ·x without forming the transpose.
Vector transpose_times(const Matrix& a, std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b);
double norm2_squared(std::span<const double> v);
double norm2(std::span<const double> v);
double max_abs(std::span<const double> v);
double max_abs(const Matrix& m);
/// Largest absolute entry of (a − b).
double max_abs_diff(const Matrix& a, const Matrix& b);

bool is_power_of_two(std::size_t n) noexcept;

struct QrResult {
  Matrix q;
  Matrix r;
};

/// Householder QR of a square matrix, normalized so that diag(R) > 0.
/// Throws ErrorCode::kDegenerateInput when |R_ii| < 1e-12·‖Z‖_max.
QrResult qr_positive_diagonal(const Matrix& z);

/// In-place unnormalized Sylvester–Hadamard transform. Size must be 2^m.
void fwht_inplace(std::span<double> v);
Vector fwht(std::span<const double> v);

/// Sylvester–Hadamard matrix of order n (entries ±1), n a power of two.
Matrix hadamard(std::size_t n);

struct SymEigResult {
  Vector values;   // descending
  Matrix vectors;  // column i pairs with values[i]
};

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix.
SymEigResult sym_eig(const Matrix& m);

}  // namespace ozo
