// core/src/baselines.cpp

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

#include "tristou/baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace tristou {

namespace {
constexpr double kVarianceFloor = 1e-6;
constexpr double kCovRegularizer = 1e-6;

double regularized_log_det(Matrix cov) {
  for (int i = 0; i < cov.rows(); ++i) cov(i, i) += kCovRegularizer;
  try {
    return log_determinant(cov);
  } catch (const std::runtime_error&) {
    throw std::runtime_error("bic_distance: covariance not positive definite after regularization");
  }
}
}  // namespace

GaussianStats gaussian_stats(const Matrix& frames, CovarianceMode mode) {
  const int t_count = frames.rows();
  const int dim = frames.cols();
  if (t_count < 2) throw std::invalid_argument("gaussian_stats: need at least 2 frames");

  GaussianStats stats;
  stats.count = t_count;
  stats.mean = row_mean(frames);
  stats.diag_var.assign(dim, 0.0);
  for (int t = 0; t < t_count; ++t) {
    const auto row = frames.row(t);
    for (int c = 0; c < dim; ++c) {
      const double d = row[c] - stats.mean[c];
      stats.diag_var[c] += d * d;
    }
  }
  for (double& v : stats.diag_var) v = std::max(v / t_count, kVarianceFloor);

  if (mode == CovarianceMode::full) {
    Matrix cov(dim, dim);
    Vector centered(dim);
    for (int t = 0; t < t_count; ++t) {
      const auto row = frames.row(t);
      for (int c = 0; c < dim; ++c) centered[c] = row[c] - stats.mean[c];
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j <= i; ++j) cov(i, j) += centered[i] * centered[j];
    }
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j <= i; ++j) {
        cov(i, j) /= t_count;
        cov(j, i) = cov(i, j);
      }
    stats.full_cov = std::move(cov);
  }
  return stats;
}

GaussianStats gaussian_stats(const FeatureSequence& x, CovarianceMode mode) {
  return gaussian_stats(x.frames, mode);
}

double gaussian_divergence(const GaussianStats& a, const GaussianStats& b) {
  if (a.mean.size() != b.mean.size())
    throw std::invalid_argument("gaussian_divergence: dimension mismatch");
  double div = 0.0;
  for (size_t i = 0; i < a.mean.size(); ++i) {
    const double d = a.mean[i] - b.mean[i];
    div += d * d / (std::sqrt(a.diag_var[i]) * std::sqrt(b.diag_var[i]));
  }
  return div;
}

double bic_distance(const Matrix& x, const Matrix& y, double lambda) {
  if (x.cols() != y.cols()) throw std::invalid_argument("bic_distance: dimension mismatch");
  const int dim = x.cols();
  if (x.rows() < dim + 1 || y.rows() < dim + 1)
    throw std::invalid_argument("bic_distance: need at least F+1 frames per side (F=" +
                                std::to_string(dim) + ")");

  const GaussianStats sx = gaussian_stats(x, CovarianceMode::full);
  const GaussianStats sy = gaussian_stats(y, CovarianceMode::full);
  const double nx = static_cast<double>(sx.count);
  const double ny = static_cast<double>(sy.count);
  const double n = nx + ny;

  // Joint stats from pooled moments; every term is symmetric in (x, y), so
  // bic_distance(x, y) == bic_distance(y, x) exactly.
  Vector joint_mean(dim);
  for (int i = 0; i < dim; ++i) joint_mean[i] = (nx * sx.mean[i] + ny * sy.mean[i]) / n;
  Matrix joint_cov(dim, dim);
  const Matrix& cx = *sx.full_cov;
  const Matrix& cy = *sy.full_cov;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double m2 = nx * (cx(i, j) + sx.mean[i] * sx.mean[j]) +
                        ny * (cy(i, j) + sy.mean[i] * sy.mean[j]);
      joint_cov(i, j) = m2 / n - joint_mean[i] * joint_mean[j];
      joint_cov(j, i) = joint_cov(i, j);
    }
  }

  const double data_term = n / 2.0 * regularized_log_det(joint_cov) -
                           nx / 2.0 * regularized_log_det(cx) -
                           ny / 2.0 * regularized_log_det(cy);
  const double penalty = 0.5 * (dim + dim * (dim + 1) / 2.0) * std::log(n);
  return data_term - lambda * penalty;
}

double bic_distance(const FeatureSequence& x, const FeatureSequence& y, double lambda) {
  return bic_distance(x.frames, y.frames, lambda);
}

}  // namespace tristou
