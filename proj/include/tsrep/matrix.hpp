// Copyright 2026 The tsrep Authors.
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
#include <vector>

namespace tsrep {

/// Dense row-major fp64 matrix. Value type: copyable, immutable-after-
/// construction by convention in shared contexts.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double* row(std::size_t i) { return data_.data() + i * cols_; }
  const double* row(std::size_t i) const { return data_.data() + i * cols_; }

  bool same_shape(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_;
  }
  bool all_finite() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Shape-checked arithmetic. Dimension mismatches throw std::invalid_argument.
Matrix matmul(const Matrix& a, const Matrix& b);
// a * b^T and a^T * b; used heavily by the reverse-mode pass.
Matrix matmul_nt(const Matrix& a, const Matrix& b);
Matrix matmul_tn(const Matrix& a, const Matrix& b);
Matrix add(const Matrix& a, const Matrix& b);
Matrix sub(const Matrix& a, const Matrix& b);
Matrix hadamard(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, double c);
Matrix transpose(const Matrix& a);
void add_in_place(Matrix& a, const Matrix& b);
void axpy_in_place(Matrix& y, double a, const Matrix& x);

double sum(const Matrix& a);
double sumsq(const Matrix& a);
double frobenius_norm(const Matrix& a);
double dot(const Matrix& a, const Matrix& b);

/// Largest absolute eigenvalue of a square matrix, computed by normalized
/// repeated squaring of the matrix (rho(A) = lim ||A^m||_F^(1/m)). Converges
/// for any real matrix, including complex spectra. Throws on non-square
/// input or failure to converge within the iteration cap.
double spectral_radius(const Matrix& a, double tol = 1e-10);

/// Solves A x = b for symmetric positive definite A via Cholesky.
/// b and the result are column vectors stored as n x 1 matrices.
Matrix cholesky_solve(const Matrix& a, const Matrix& b);
/// Inverse of a symmetric positive definite matrix via Cholesky.
Matrix cholesky_inverse(const Matrix& a);

struct SymmetricEigen {
  std::vector<double> values;  // descending
  Matrix vectors;              // column j pairs with values[j]; orthonormal
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
SymmetricEigen eigen_symmetric(const Matrix& a);

}  // namespace tsrep
