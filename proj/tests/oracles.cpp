// tests/oracles.cpp

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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tristou::oracles {

Matrix scalar_lstm_forward(const LstmParams& p, const Matrix& x, bool reversed) {
  const int t_count = x.rows();
  const int units = static_cast<int>(p.b_input.size());
  const int input_dim = x.cols();

  std::vector<double> h(units, 0.0), c(units, 0.0);
  Matrix outputs(t_count, units);
  for (int s = 0; s < t_count; ++s) {
    const int t = reversed ? t_count - 1 - s : s;
    std::vector<double> h_new(units), c_new(units);
    for (int u = 0; u < units; ++u) {
      double zi = p.b_input[u], zf = p.b_forget[u], zg = p.b_cell[u], zo = p.b_output[u];
      for (int k = 0; k < input_dim; ++k) {
        zi += p.w_input(u, k) * x(t, k);
        zf += p.w_forget(u, k) * x(t, k);
        zg += p.w_cell(u, k) * x(t, k);
        zo += p.w_output(u, k) * x(t, k);
      }
      for (int k = 0; k < units; ++k) {
        zi += p.u_input(u, k) * h[k];
        zf += p.u_forget(u, k) * h[k];
        zg += p.u_cell(u, k) * h[k];
        zo += p.u_output(u, k) * h[k];
      }
      const double gi = 1.0 / (1.0 + std::exp(-zi));
      const double gf = 1.0 / (1.0 + std::exp(-zf));
      const double gg = std::tanh(zg);
      const double go = 1.0 / (1.0 + std::exp(-zo));
      c_new[u] = gf * c[u] + gi * gg;
      h_new[u] = go * std::tanh(c_new[u]);
    }
    h = h_new;
    c = c_new;
    for (int u = 0; u < units; ++u) outputs(t, u) = h[u];
  }
  return outputs;
}

GradCheck finite_difference_check(const TristouNetParams& params, const Gradients& analytic,
                                  const std::function<double(const TristouNetParams&)>& loss,
                                  double step) {
  TristouNetParams work = params;
  Gradients analytic_copy = analytic;
  auto work_refs = tensor_refs(work);
  auto grad_refs = tensor_refs(analytic_copy);

  GradCheck result;
  for (size_t t = 0; t < work_refs.size(); ++t) {
    for (size_t i = 0; i < work_refs[t].size; ++i) {
      const double saved = work_refs[t].data[i];
      work_refs[t].data[i] = saved + step;
      const double plus = loss(work);
      work_refs[t].data[i] = saved - step;
      const double minus = loss(work);
      work_refs[t].data[i] = saved;
      const double fd = (plus - minus) / (2.0 * step);
      const double a = grad_refs[t].data[i];
      const double rel = std::abs(a - fd) / std::max({std::abs(a), std::abs(fd), 1e-6});
      if (rel > result.max_rel_err) {
        result.max_rel_err = rel;
        result.worst_tensor = work_refs[t].name;
      }
    }
  }
  return result;
}

double brute_force_eer(const std::vector<double>& scores, const std::vector<bool>& same) {
  if (scores.size() != same.size() || scores.empty())
    throw std::invalid_argument("brute_force_eer: bad input");
  long long num_same = 0, num_diff = 0;
  for (const bool s : same) (s ? num_same : num_diff)++;
  if (num_same == 0 || num_diff == 0) throw std::invalid_argument("brute_force_eer: need both labels");

  std::vector<double> grid = scores;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  std::vector<double> dense;
  dense.push_back(grid.front() - 1.0);
  for (size_t i = 0; i < grid.size(); ++i) {
    dense.push_back(grid[i]);
    if (i + 1 < grid.size()) dense.push_back(0.5 * (grid[i] + grid[i + 1]));
  }
  dense.push_back(grid.back() + 1.0);

  double prev_fpr = 0.0, prev_fnr = 1.0, prev_diff = 1.0;
  for (const double t : dense) {
    long long fp = 0, fn = 0;
    for (size_t i = 0; i < scores.size(); ++i) {
      if (same[i]) {
        if (scores[i] > t) ++fn;
      } else {
        if (scores[i] <= t) ++fp;
      }
    }
    const double fpr = static_cast<double>(fp) / num_diff;
    const double fnr = static_cast<double>(fn) / num_same;
    const double diff = fnr - fpr;
    if (diff <= 0.0) {
      if (diff == 0.0) return fpr;
      const double w = prev_diff / (prev_diff - diff);
      return prev_fpr + w * (fpr - prev_fpr);
    }
    prev_fpr = fpr;
    prev_fnr = fnr;
    prev_diff = diff;
  }
  (void)prev_fnr;
  throw std::runtime_error("brute_force_eer: no crossing");
}

void two_pass_moments(const Matrix& frames, Vector& mean, Vector& variance) {
  const int t_count = frames.rows();
  const int dim = frames.cols();
  mean.assign(dim, 0.0);
  variance.assign(dim, 0.0);
  for (int t = 0; t < t_count; ++t)
    for (int c = 0; c < dim; ++c) mean[c] += frames(t, c);
  for (int c = 0; c < dim; ++c) mean[c] /= t_count;
  for (int t = 0; t < t_count; ++t)
    for (int c = 0; c < dim; ++c) {
      const double d = frames(t, c) - mean[c];
      variance[c] += d * d;
    }
  for (int c = 0; c < dim; ++c) variance[c] /= t_count;
}

}  // namespace tristou::oracles
