//
// Copyright 2026 The dpfix Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "dpfix/linalg.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "dpfix/errors.h"

namespace dpfix {

namespace {

void CheckSameSize(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    ThrowStructural("vector size mismatch: " + std::to_string(a.size()) +
                    " vs " + std::to_string(b.size()));
  }
}

}  // namespace

double Dot(std::span<const double> a, std::span<const double> b) {
  CheckSameSize(a, b);
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

double Norm(std::span<const double> v) { return std::sqrt(Dot(v, v)); }

double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  CheckSameSize(a, b);
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    s += d * d;
  }
  return s;
}

void Axpy(double alpha, std::span<const double> x, std::span<double> y) {
  CheckSameSize(x, y);
  for (std::size_t j = 0; j < x.size(); ++j) y[j] += alpha * x[j];
}

Vec Add(std::span<const double> a, std::span<const double> b) {
  CheckSameSize(a, b);
  Vec out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] + b[j];
  return out;
}

Vec Subtract(std::span<const double> a, std::span<const double> b) {
  CheckSameSize(a, b);
  Vec out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] - b[j];
  return out;
}

Vec Scale(double alpha, std::span<const double> v) {
  Vec out(v.begin(), v.end());
  for (double& x : out) x *= alpha;
  return out;
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, Vec row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (data_.size() != rows * cols) {
    ThrowStructural("matrix data has " + std::to_string(data_.size()) +
                    " entries, expected " + std::to_string(rows * cols));
  }
}

DenseMatrix DenseMatrix::Identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::StackedIdentity(std::size_t n, std::size_t p,
                                         double sign) {
  DenseMatrix m(n * p, p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) m(i * p + j, j) = sign;
  }
  return m;
}

Vec DenseMatrix::Multiply(std::span<const double> x) const {
  if (x.size() != cols_) {
    ThrowStructural("matrix-vector product: expected length " +
                    std::to_string(cols_) + ", got " +
                    std::to_string(x.size()));
  }
  Vec y(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    const double* a = data_.data() + r * cols_;
    double s = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) s += a[c] * x[c];
    y[r] = s;
  }
  return y;
}

Vec DenseMatrix::MultiplyTransposed(std::span<const double> y) const {
  if (y.size() != rows_) {
    ThrowStructural("transposed product: expected length " +
                    std::to_string(rows_) + ", got " +
                    std::to_string(y.size()));
  }
  Vec x(cols_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    const double* a = data_.data() + r * cols_;
    for (std::size_t c = 0; c < cols_; ++c) x[c] += a[c] * y[r];
  }
  return x;
}

DenseMatrix DenseMatrix::Transposed() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

DenseMatrix DenseMatrix::Gram() const {
  DenseMatrix g(cols_, cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    const double* a = data_.data() + r * cols_;
    for (std::size_t i = 0; i < cols_; ++i) {
      for (std::size_t j = i; j < cols_; ++j) g(i, j) += a[i] * a[j];
    }
  }
  for (std::size_t i = 0; i < cols_; ++i) {
    for (std::size_t j = 0; j < i; ++j) g(i, j) = g(j, i);
  }
  return g;
}

DenseMatrix MatMul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) ThrowStructural("matmul: inner dimension mismatch");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Vec Solve(const DenseMatrix& a, std::span<const double> b) {
  const std::size_t n = a.rows();
  if (a.cols() != n) ThrowModel("Solve: matrix is not square");
  if (b.size() != n) ThrowStructural("Solve: right-hand side size mismatch");
  DenseMatrix m = a;
  Vec x(b.begin(), b.end());
  double scale = 0.0;
  for (double v : m.data()) scale = std::max(scale, std::abs(v));
  const double tiny = scale * 1e-14 * static_cast<double>(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(m(r, col)) > std::abs(m(pivot, col))) pivot = r;
    }
    if (std::abs(m(pivot, col)) <= tiny) ThrowModel("Solve: singular matrix");
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m(col, c), m(pivot, c));
      std::swap(x[col], x[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = m(r, col) / m(col, col);
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) m(r, c) -= f * m(col, c);
      x[r] -= f * x[col];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= m(i, c) * x[c];
    x[i] = s / m(i, i);
  }
  return x;
}

Vec SymmetricEigenvalues(const DenseMatrix& s) {
  const std::size_t n = s.rows();
  if (s.cols() != n) ThrowStructural("eigenvalues: matrix is not square");
  DenseMatrix a = s;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    }
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
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
      }
    }
  }
  Vec eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

SingularValueBounds ExtremeSingularValues(const DenseMatrix& a) {
  const Vec eig = SymmetricEigenvalues(a.Gram());
  SingularValueBounds out;
  out.smallest = std::sqrt(std::max(0.0, eig.front()));
  out.largest = std::sqrt(std::max(0.0, eig.back()));
  // A wide matrix has a non-trivial kernel, so A^T A is singular.
  if (a.rows() < a.cols()) out.smallest = 0.0;
  return out;
}

}  // namespace dpfix
