// core/include/tristou/features.hpp

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

#ifndef TRISTOU_FEATURES_HPP
#define TRISTOU_FEATURES_HPP

#include "tristou/audio.hpp"
#include "tristou/corpus.hpp"
#include "tristou/matrix.hpp"

namespace tristou {

// MFCC feature stack configuration. The default stack is
// [11 MFCC, 11 delta, 11 delta-delta, delta-energy, delta-delta-energy],
// 35 columns; static energy itself is excluded. baseline() keeps the
// derivative-free set [11 MFCC, energy], 12 columns.
struct FeatureConfig {
  double frame_duration = 0.032;  // seconds
  double frame_step = 0.020;
  int num_mfcc = 11;
  int num_mel_filters = 40;
  int fft_size = 512;
  bool include_derivatives = true;
  bool include_energy_derivatives = true;
  bool include_static_energy = false;
  int delta_window = 2;  // frames

  static FeatureConfig baseline() {
    FeatureConfig cfg;
    cfg.include_derivatives = false;
    cfg.include_energy_derivatives = false;
    cfg.include_static_energy = true;
    return cfg;
  }

  int stacked_dim() const {
    return num_mfcc * (include_derivatives ? 3 : 1) + (include_static_energy ? 1 : 0) +
           (include_energy_derivatives ? 2 : 0);
  }

  void validate(int sample_rate) const;
};

// Frames of one signal: Hamming-windowed samples plus the log-energy of each
// raw (unwindowed) frame, floored at log(1e-10).
struct Frames {
  Matrix windowed;         // T x frame_samples
  Vector log_energy;       // T
  int sample_rate = 0;
};

// Slices the signal into frames of frame_duration every frame_step and
// applies a Hamming window. T = floor((len - frame_len) / step) + 1 computed
// in samples. Throws if the signal is shorter than one frame.
Frames frame_signal(const AudioSignal& signal, const FeatureConfig& cfg);

// Triangular mel filterbank, num_mel_filters x (fft_size/2 + 1), spanning
// 0 Hz to Nyquist with edges equally spaced on the HTK mel scale.
Matrix mel_filterbank(int sample_rate, const FeatureConfig& cfg);

// Center frequencies (Hz) of the filters above; exposed for analysis.
Vector mel_filter_centers(int sample_rate, const FeatureConfig& cfg);

// Static cepstra: per frame, power spectrum -> mel filterbank -> log ->
// DCT-II, keeping coefficients 1..num_mfcc (c0 excluded). Output is
// T x (num_mfcc + 1) with the frame log-energy in the last column.
Matrix mfcc_static(const Frames& frames, const FeatureConfig& cfg);

// Regression deltas d_t = sum_theta theta * (x_{t+theta} - x_{t-theta}) /
// (2 * sum_theta theta^2), edges repeat-padded so T is preserved.
Matrix delta(const Matrix& x, int delta_window);

// Full per-file stack per the config; F = stacked_dim().
FeatureSequence stack_features(const AudioSignal& signal, const FeatureConfig& cfg);

}  // namespace tristou

#endif  // TRISTOU_FEATURES_HPP
