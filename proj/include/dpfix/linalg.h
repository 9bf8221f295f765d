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

// Small dense linear algebra over flat row-major storage. Problem sizes are
// desk scale (dimension <= a few hundred), so everything is O(p^3) and
// allocation-friendly rather than blocked or vectorized.

#ifndef DPFIX_LINALG_H_
#define DPFIX_LINALG_H_

#include <cstddef>
#include <span>
#include <vector>

namespace dpfix {

using Vec = std::vector<double>;

double Dot(std::span<const double> a, std::span<const double> b);
double Norm(std::span<const double> v);
double SquaredDistance(std::span<const double> a, std::span<const double> b);

// y += alpha * x
void Axpy(double alpha, std::span<const double> x, std::span<double> y);

Vec Add(std::span<const double> a, std::span<const double> b);
Vec Subtract(std::span<const double> a, std::span<const double> b);
Vec Scale(double alpha, std::span<const double> v);

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, Vec row_major);

  static DenseMatrix Identity(std::size_t n);
  // n copies of the p x p identity stacked vertically, scaled by `sign`.
  static DenseMatrix StackedIdentity(std::size_t n, std::size_t p,
                                     double sign = 1.0);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  const Vec& data() const { return data_; }

  Vec Multiply(std::span<const double> x) const;
  Vec MultiplyTransposed(std::span<const double> y) const;
  DenseMatrix Transposed() const;
  DenseMatrix Gram() const;  // A^T A

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Vec data_;
};

DenseMatrix MatMul(const DenseMatrix& a, const DenseMatrix& b);

// Solves A x = b by Gaussian elimination with partial pivoting. A must be
// square; a (numerically) singular pivot raises a model error.
Vec Solve(const DenseMatrix& a, std::span<const double> b);

// Eigenvalues of a symmetric matrix (cyclic Jacobi), ascending.
Vec SymmetricEigenvalues(const DenseMatrix& s);

struct SingularValueBounds {
  double smallest = 0.0;  // omega_A
  double largest = 0.0;   // spectral norm ||A||_2
};

// Extreme singular values from the eigenvalues of A^T A.
SingularValueBounds ExtremeSingularValues(const DenseMatrix& a);

}  // namespace dpfix

#endif  // DPFIX_LINALG_H_
