// tests/oracles.hpp

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

// Independent reference implementations used as test oracles. Everything in
// here is deliberately written as plain loops, separate from the library's
// code paths it is checking.

#ifndef TRISTOU_TESTS_ORACLES_HPP
#define TRISTOU_TESTS_ORACLES_HPP

#include <functional>
#include <string>
#include <vector>

#include "tristou/matrix.hpp"
#include "tristou/network.hpp"

namespace tristou::oracles {

// Step-by-step scalar LSTM recurrence; outputs in original time order.
Matrix scalar_lstm_forward(const LstmParams& p, const Matrix& x, bool reversed);

// Central finite differences of `loss` over every parameter element,
// compared against the analytic gradient. Relative error uses
// |a - fd| / max(|a|, |fd|, 1e-6).
struct GradCheck {
  double max_rel_err = 0.0;
  std::string worst_tensor;
};
GradCheck finite_difference_check(const TristouNetParams& params, const Gradients& analytic,
                                  const std::function<double(const TristouNetParams&)>& loss,
                                  double step);

// Equal error rate by brute force: direct counting of both error rates on a
// dense threshold grid (all distinct scores plus midpoints and sentinels),
// then the same sign-change interpolation the definition calls for.
double brute_force_eer(const std::vector<double>& scores, const std::vector<bool>& same);

// Two-pass mean and population variance per column.
void two_pass_moments(const Matrix& frames, Vector& mean, Vector& variance);

}  // namespace tristou::oracles

#endif  // TRISTOU_TESTS_ORACLES_HPP
