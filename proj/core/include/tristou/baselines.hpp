// core/include/tristou/baselines.hpp

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

#ifndef TRISTOU_BASELINES_HPP
#define TRISTOU_BASELINES_HPP

#include <optional>

#include "tristou/corpus.hpp"
#include "tristou/matrix.hpp"

namespace tristou {

// Classical sequence-comparison baselines: Gaussian divergence on diagonal
// covariances and the Bayesian Information Criterion on full covariances.

enum class CovarianceMode { diagonal, full };

struct GaussianStats {
  long long count = 0;   // frames
  Vector mean;           // F
  Vector diag_var;       // F, floored at 1e-6
  std::optional<Matrix> full_cov;  // F x F, populated in full mode
};

// Sample mean and (co)variance with 1/T normalization; requires T >= 2.
GaussianStats gaussian_stats(const FeatureSequence& x, CovarianceMode mode);
GaussianStats gaussian_stats(const Matrix& frames, CovarianceMode mode);

// Sum over dimensions of (mu_a - mu_b)^2 / (sigma_a * sigma_b), with sigma
// the diagonal standard deviations. Symmetric, >= 0, zero iff means equal.
double gaussian_divergence(const GaussianStats& a, const GaussianStats& b);

// Delta-BIC between modeling x and y jointly versus separately, with full
// covariances regularized by +1e-6 I before the log-determinants:
//   (n_x+n_y)/2 log|S_xy| - n_x/2 log|S_x| - n_y/2 log|S_y| - lambda * P,
//   P = (F + F(F+1)/2)/2 * log(n_x+n_y).
// Larger values favor the two-speaker hypothesis. Requires both sequences to
// have at least F+1 frames; exactly symmetric in its arguments.
double bic_distance(const FeatureSequence& x, const FeatureSequence& y, double lambda);
double bic_distance(const Matrix& x, const Matrix& y, double lambda);

}  // namespace tristou

#endif  // TRISTOU_BASELINES_HPP
