// core/src/matrix.cpp

// Copyright 2026  Tristou Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "tristou/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace tristou {

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

Vector matvec(const Matrix& m, std::span<const double> x) {
  assert(static_cast<size_t>(m.cols()) == x.size());
  Vector y(m.rows(), 0.0);
  for (int r = 0; r < m.rows(); ++r) y[r] = dot(m.row(r), x);
  return y;
}

void matvec_transpose_add(const Matrix& m, std::span<const double> x, std::span<double> y) {
  assert(static_cast<size_t>(m.rows()) == x.size());
  assert(static_cast<size_t>(m.cols()) == y.size());
  for (int r = 0; r < m.rows(); ++r) axpy(x[r], m.row(r), y);
}

void outer_add(std::span<const double> a, std::span<const double> b, Matrix& m) {
  assert(static_cast<size_t>(m.rows()) == a.size());
  assert(static_cast<size_t>(m.cols()) == b.size());
  for (size_t r = 0; r < a.size(); ++r) axpy(a[r], b, m.row(static_cast<int>(r)));
}

Vector row_mean(const Matrix& m) {
  if (m.rows() < 1) throw std::invalid_argument("row_mean: empty matrix");
  Vector mean(m.cols(), 0.0);
  for (int r = 0; r < m.rows(); ++r) axpy(1.0, m.row(r), mean);
  for (double& v : mean) v /= m.rows();
  return mean;
}

Matrix cholesky(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("cholesky: matrix not square");
  const int n = a.rows();
  Matrix l(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      if (i == j) {
        if (s <= 0.0 || !std::isfinite(s))
          throw std::runtime_error("cholesky: matrix not positive definite");
        l(i, i) = std::sqrt(s);
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
  return l;
}

double log_determinant(const Matrix& a) {
  const Matrix l = cholesky(a);
  double sum = 0.0;
  for (int i = 0; i < l.rows(); ++i) sum += std::log(l(i, i));
  return 2.0 * sum;
}

}  // namespace tristou
