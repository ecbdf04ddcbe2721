// core/src/features.cpp

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

#include "tristou/features.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace tristou {

namespace {

constexpr double kEnergyFloor = 1e-10;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 Cooley-Tukey, decimation in time.
void fft_inplace(std::vector<std::complex<double>>& x) {
  const size_t n = x.size();
  if (n <= 1) return;
  size_t j = 0;
  for (size_t i = 0; i < n; ++i) {
    if (j > i) std::swap(x[i], x[j]);
    size_t m = n >> 1;
    while (m >= 1 && j >= m) {
      j -= m;
      m >>= 1;
    }
    j += m;
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double angle = -2.0 * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> w_len(std::cos(angle), std::sin(angle));
    for (size_t start = 0; start < n; start += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = x[start + k];
        const std::complex<double> t = w * x[start + k + len / 2];
        x[start + k] = u + t;
        x[start + k + len / 2] = u - t;
        w *= w_len;
      }
    }
  }
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

}  // namespace

void FeatureConfig::validate(int sample_rate) const {
  if (!(frame_step > 0.0 && frame_duration > frame_step))
    throw std::invalid_argument("features: need frame_duration > frame_step > 0");
  if (num_mfcc < 1) throw std::invalid_argument("features: num_mfcc must be >= 1");
  if (num_mel_filters <= num_mfcc)
    throw std::invalid_argument("features: need more mel filters than cepstra");
  if (!is_power_of_two(fft_size))
    throw std::invalid_argument("features: fft_size must be a power of two");
  if (delta_window < 1) throw std::invalid_argument("features: delta_window must be >= 1");
  const int frame_samples = static_cast<int>(std::lround(frame_duration * sample_rate));
  if (fft_size < frame_samples)
    throw std::invalid_argument("features: fft_size smaller than frame length");
}

Frames frame_signal(const AudioSignal& signal, const FeatureConfig& cfg) {
  if (signal.sample_rate <= 0) throw std::invalid_argument("frame_signal: bad sample rate");
  cfg.validate(signal.sample_rate);
  const int frame_len = static_cast<int>(std::lround(cfg.frame_duration * signal.sample_rate));
  const int step = static_cast<int>(std::lround(cfg.frame_step * signal.sample_rate));
  const long long n = static_cast<long long>(signal.samples.size());
  if (n < frame_len)
    throw std::runtime_error("frame_signal: signal shorter than one frame (" +
                             std::to_string(n) + " < " + std::to_string(frame_len) +
                             " samples)");
  const int num_frames = static_cast<int>((n - frame_len) / step) + 1;

  Vector window(frame_len);
  for (int i = 0; i < frame_len; ++i)
    window[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / (frame_len - 1));

  Frames out;
  out.sample_rate = signal.sample_rate;
  out.windowed = Matrix(num_frames, frame_len);
  out.log_energy.resize(num_frames);
  for (int t = 0; t < num_frames; ++t) {
    const double* src = signal.samples.data() + static_cast<size_t>(t) * step;
    auto dst = out.windowed.row(t);
    double energy = 0.0;
    for (int i = 0; i < frame_len; ++i) {
      energy += src[i] * src[i];
      dst[i] = src[i] * window[i];
    }
    out.log_energy[t] = std::log(std::max(energy, kEnergyFloor));
  }
  return out;
}

Matrix mel_filterbank(int sample_rate, const FeatureConfig& cfg) {
  const int num_bins = cfg.fft_size / 2 + 1;
  const double nyquist = sample_rate / 2.0;
  const int m = cfg.num_mel_filters;

  std::vector<double> edges(m + 2);
  const double mel_max = hz_to_mel(nyquist);
  for (int i = 0; i < m + 2; ++i) edges[i] = mel_to_hz(mel_max * i / (m + 1));

  Matrix filters(m, num_bins);
  for (int fi = 0; fi < m; ++fi) {
    const double left = edges[fi], center = edges[fi + 1], right = edges[fi + 2];
    for (int k = 0; k < num_bins; ++k) {
      const double freq = static_cast<double>(k) * sample_rate / cfg.fft_size;
      if (freq >= left && freq <= center && center > left)
        filters(fi, k) = (freq - left) / (center - left);
      else if (freq > center && freq <= right && right > center)
        filters(fi, k) = (right - freq) / (right - center);
    }
  }
  return filters;
}

Vector mel_filter_centers(int sample_rate, const FeatureConfig& cfg) {
  const double mel_max = hz_to_mel(sample_rate / 2.0);
  Vector centers(cfg.num_mel_filters);
  for (int fi = 0; fi < cfg.num_mel_filters; ++fi)
    centers[fi] = mel_to_hz(mel_max * (fi + 1) / (cfg.num_mel_filters + 1));
  return centers;
}

Matrix mfcc_static(const Frames& frames, const FeatureConfig& cfg) {
  const int num_bins = cfg.fft_size / 2 + 1;
  const Matrix filters = mel_filterbank(frames.sample_rate, cfg);
  const int t_count = frames.windowed.rows();
  const int m = cfg.num_mel_filters;

  // DCT-II basis for coefficients 1..num_mfcc over m log mel energies.
  Matrix dct(cfg.num_mfcc, m);
  const double scale = std::sqrt(2.0 / m);
  for (int j = 1; j <= cfg.num_mfcc; ++j)
    for (int mi = 0; mi < m; ++mi)
      dct(j - 1, mi) = scale * std::cos(std::numbers::pi * j * (mi + 0.5) / m);

  Matrix out(t_count, cfg.num_mfcc + 1);
  std::vector<std::complex<double>> buffer(cfg.fft_size);
  Vector power(num_bins);
  Vector log_mel(m);
  for (int t = 0; t < t_count; ++t) {
    const auto frame = frames.windowed.row(t);
    std::fill(buffer.begin(), buffer.end(), std::complex<double>(0.0, 0.0));
    for (size_t i = 0; i < frame.size(); ++i) buffer[i] = frame[i];
    fft_inplace(buffer);
    for (int k = 0; k < num_bins; ++k) power[k] = std::norm(buffer[k]);
    for (int mi = 0; mi < m; ++mi)
      log_mel[mi] = std::log(std::max(dot(filters.row(mi), power), kEnergyFloor));
    for (int j = 0; j < cfg.num_mfcc; ++j) out(t, j) = dot(dct.row(j), log_mel);
    out(t, cfg.num_mfcc) = frames.log_energy[t];
  }
  return out;
}

Matrix delta(const Matrix& x, int delta_window) {
  if (x.rows() < 1) throw std::invalid_argument("delta: empty input");
  if (delta_window < 1) throw std::invalid_argument("delta: window must be >= 1");
  double denom = 0.0;
  for (int theta = 1; theta <= delta_window; ++theta) denom += 2.0 * theta * theta;

  Matrix out(x.rows(), x.cols());
  for (int t = 0; t < x.rows(); ++t) {
    for (int theta = 1; theta <= delta_window; ++theta) {
      const int ahead = std::min(t + theta, x.rows() - 1);
      const int behind = std::max(t - theta, 0);
      for (int c = 0; c < x.cols(); ++c)
        out(t, c) += theta * (x(ahead, c) - x(behind, c));
    }
    for (int c = 0; c < x.cols(); ++c) out(t, c) /= denom;
  }
  return out;
}

FeatureSequence stack_features(const AudioSignal& signal, const FeatureConfig& cfg) {
  const Frames frames = frame_signal(signal, cfg);
  const Matrix static_features = mfcc_static(frames, cfg);
  const int t_count = static_features.rows();
  const int n = cfg.num_mfcc;

  Matrix mfcc(t_count, n);
  Matrix energy(t_count, 1);
  for (int t = 0; t < t_count; ++t) {
    for (int c = 0; c < n; ++c) mfcc(t, c) = static_features(t, c);
    energy(t, 0) = static_features(t, n);
  }

  std::vector<const Matrix*> blocks;
  Matrix d_mfcc, dd_mfcc, d_energy, dd_energy;
  blocks.push_back(&mfcc);
  if (cfg.include_derivatives) {
    d_mfcc = delta(mfcc, cfg.delta_window);
    dd_mfcc = delta(d_mfcc, cfg.delta_window);
    blocks.push_back(&d_mfcc);
    blocks.push_back(&dd_mfcc);
  }
  if (cfg.include_static_energy) blocks.push_back(&energy);
  if (cfg.include_energy_derivatives) {
    d_energy = delta(energy, cfg.delta_window);
    dd_energy = delta(d_energy, cfg.delta_window);
    blocks.push_back(&d_energy);
    blocks.push_back(&dd_energy);
  }

  FeatureSequence out;
  out.frames = Matrix(t_count, cfg.stacked_dim());
  out.frame_step = cfg.frame_step;
  out.frame_duration = cfg.frame_duration;
  int col = 0;
  for (const Matrix* block : blocks) {
    for (int c = 0; c < block->cols(); ++c, ++col)
      for (int t = 0; t < t_count; ++t) out.frames(t, col) = (*block)(t, c);
  }
  return out;
}

}  // namespace tristou
