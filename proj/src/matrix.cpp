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

#include "tsrep/matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "tsrep/kernels.hpp"

namespace tsrep {

namespace {

[[noreturn]] void shape_error(const char* op, const Matrix& a,
                              const Matrix& b) {
  throw std::invalid_argument(std::string(op) + ": shape mismatch (" +
                              std::to_string(a.rows()) + "x" +
                              std::to_string(a.cols()) + " vs " +
                              std::to_string(b.rows()) + "x" +
                              std::to_string(b.cols()) + ")");
}

}  // namespace

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_)
      throw std::invalid_argument("Matrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

bool Matrix::all_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) shape_error("matmul", a, b);
  const auto& k = kernels::active();
  Matrix c(a.rows(), b.cols());
  // c[i,:] += a[i,k] * b[k,:] keeps the inner loop contiguous.
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* ci = c.row(i);
    const double* ai = a.row(i);
    for (std::size_t p = 0; p < a.cols(); ++p)
      k.axpy(ci, ai[p], b.row(p), b.cols());
  }
  return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) shape_error("matmul_nt", a, b);
  const auto& k = kernels::active();
  Matrix c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j)
      c(i, j) = k.dot(a.row(i), b.row(j), a.cols());
  return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) shape_error("matmul_tn", a, b);
  const auto& k = kernels::active();
  Matrix c(a.cols(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* ai = a.row(i);
    const double* bi = b.row(i);
    for (std::size_t p = 0; p < a.cols(); ++p)
      k.axpy(c.row(p), ai[p], bi, b.cols());
  }
  return c;
}

Matrix add(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) shape_error("add", a, b);
  Matrix c(a.rows(), a.cols());
  kernels::active().add(c.data(), a.data(), b.data(), a.size());
  return c;
}

Matrix sub(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) shape_error("sub", a, b);
  Matrix c(a.rows(), a.cols());
  kernels::active().sub(c.data(), a.data(), b.data(), a.size());
  return c;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) shape_error("hadamard", a, b);
  Matrix c(a.rows(), a.cols());
  kernels::active().mul(c.data(), a.data(), b.data(), a.size());
  return c;
}

Matrix scale(const Matrix& a, double c) {
  Matrix out(a.rows(), a.cols());
  kernels::active().scale(out.data(), a.data(), c, a.size());
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

void add_in_place(Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) shape_error("add_in_place", a, b);
  kernels::active().add(a.data(), a.data(), b.data(), a.size());
}

void axpy_in_place(Matrix& y, double a, const Matrix& x) {
  if (!y.same_shape(x)) shape_error("axpy_in_place", y, x);
  kernels::active().axpy(y.data(), a, x.data(), x.size());
}

double sum(const Matrix& a) { return kernels::active().sum(a.data(), a.size()); }

double sumsq(const Matrix& a) {
  return kernels::active().sumsq(a.data(), a.size());
}

double frobenius_norm(const Matrix& a) { return std::sqrt(sumsq(a)); }

double dot(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) shape_error("dot", a, b);
  return kernels::active().dot(a.data(), b.data(), a.size());
}

double spectral_radius(const Matrix& a, double tol) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("spectral_radius: matrix must be square");
  if (tol <= 0.0) throw std::invalid_argument("spectral_radius: tol <= 0");
  if (a.rows() == 0) return 0.0;

  // Normalized repeated squaring: after k squarings B ~ A^(2^k) up to the
  // accumulated scale exp(log_scale), so log rho ~ (log_scale +
  // log||B||_F) / 2^k. The exponent doubling drives the correction term to
  // zero geometrically.
  Matrix b = a;
  double norm = frobenius_norm(b);
  if (norm == 0.0) return 0.0;
  b = scale(b, 1.0 / norm);
  double log_scale = std::log(norm);
  double inv_power = 1.0;  // 2^-k
  double prev = log_scale;

  constexpr int kMaxSquarings = 128;
  for (int it = 0; it < kMaxSquarings; ++it) {
    b = matmul(b, b);
    norm = frobenius_norm(b);
    inv_power *= 0.5;
    if (norm == 0.0) return 0.0;  // nilpotent up to roundoff
    log_scale = 2.0 * log_scale + std::log(norm);
    b = scale(b, 1.0 / norm);
    const double estimate = log_scale * inv_power;
    if (std::abs(estimate - prev) < tol * 0.5 && it > 2)
      return std::exp(estimate);
    prev = estimate;
  }
  throw std::runtime_error("spectral_radius: no convergence");
}

namespace {

// Lower Cholesky factor; throws if the matrix is not positive definite.
Matrix cholesky_factor(const Matrix& a) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("cholesky: matrix must be square");
  const std::size_t n = a.rows();
  Matrix l(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a(i, j);
      for (std::size_t p = 0; p < j; ++p) s -= l(i, p) * l(j, p);
      if (i == j) {
        if (s <= 0.0)
          throw std::runtime_error("cholesky: matrix not positive definite");
        l(i, i) = std::sqrt(s);
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
  return l;
}

}  // namespace

Matrix cholesky_solve(const Matrix& a, const Matrix& b) {
  if (b.cols() != 1 || b.rows() != a.rows())
    throw std::invalid_argument("cholesky_solve: b must be n x 1");
  const Matrix l = cholesky_factor(a);
  const std::size_t n = a.rows();
  Matrix y(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b(i, 0);
    for (std::size_t p = 0; p < i; ++p) s -= l(i, p) * y(p, 0);
    y(i, 0) = s / l(i, i);
  }
  Matrix x(n, 1);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y(ii, 0);
    for (std::size_t p = ii + 1; p < n; ++p) s -= l(p, ii) * x(p, 0);
    x(ii, 0) = s / l(ii, ii);
  }
  return x;
}

Matrix cholesky_inverse(const Matrix& a) {
  const std::size_t n = a.rows();
  Matrix inv(n, n);
  Matrix e(n, 1);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) e(i, 0) = (i == j) ? 1.0 : 0.0;
    const Matrix col = cholesky_solve(a, e);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col(i, 0);
  }
  // Symmetrize away the roundoff skew.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (inv(i, j) + inv(j, i));
      inv(i, j) = v;
      inv(j, i) = v;
    }
  return inv;
}

SymmetricEigen eigen_symmetric(const Matrix& a) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("eigen_symmetric: matrix must be square");
  const std::size_t n = a.rows();
  Matrix m = a;
  Matrix v = Matrix::identity(n);

  constexpr int kMaxSweeps = 64;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += m(i, j) * m(i, j);
    if (off < 1e-26 * (1.0 + sumsq(m))) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (apq == 0.0) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          const double mp = m(i, p), mq = m(i, q);
          m(i, p) = c * mp - s * mq;
          m(i, q) = s * mp + c * mq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double mp = m(p, i), mq = m(q, i);
          m(p, i) = c * mp - s * mq;
          m(q, i) = s * mp + c * mq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
  }

  SymmetricEigen out;
  out.values.resize(n);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = m(i, i);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (diag[order[j]] > diag[order[i]]) std::swap(order[i], order[j]);
  out.vectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = diag[order[j]];
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

}  // namespace tsrep
