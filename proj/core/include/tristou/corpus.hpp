// core/include/tristou/corpus.hpp

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

#ifndef TRISTOU_CORPUS_HPP
#define TRISTOU_CORPUS_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tristou/annotation.hpp"
#include "tristou/matrix.hpp"
#include "tristou/rng.hpp"

namespace tristou {

// A sequence of acoustic feature frames. Frame i spans
// [origin + i * frame_step, origin + i * frame_step + frame_duration]
// in its source file.
struct FeatureSequence {
  Matrix frames;  // T x F
  double frame_step = 0.02;
  double frame_duration = 0.032;
  double origin = 0.0;

  int num_frames() const { return frames.rows(); }
  int dim() const { return frames.cols(); }
  // Extent covered by the frame grid, in seconds.
  double duration() const { return frames.rows() * frame_step; }

  // Contiguous frame crop [first, first + count); origin is advanced.
  FeatureSequence crop(int first, int count) const;
};

struct CorpusFile {
  FeatureSequence features;
  Annotation annotation;
};

struct Corpus {
  std::map<std::string, CorpusFile> files;
  std::set<std::string> speakers;

  // Checks speaker/extent consistency; throws on violation.
  void validate() const;
  std::vector<std::string> sorted_speakers() const { return {speakers.begin(), speakers.end()}; }
};

// Synthetic corpus: each speaker is an AR(1) Gaussian process in feature
// space around a per-speaker mean. Bypasses audio entirely while exercising
// every downstream component with controllable class separation.
struct SynthConfig {
  int num_speakers = 20;
  int feature_dim = 35;
  double mean_scale = 3.0;
  double ar_coefficient = 0.5;  // in [0, 1)
  double noise_scale = 1.0;     // > 0
  int turns_per_file = 10;
  double turn_duration_min = 2.0;  // seconds
  double turn_duration_max = 6.0;
  int num_files = 0;  // 0 means one file per speaker
  double frame_step = 0.02;
  double frame_duration = 0.032;
  uint64_t seed = 42;

  void validate() const;
};

// Deterministic function of the config: same seed gives bit-identical
// corpora. Speaker means are drawn once from an isotropic Gaussian scaled by
// mean_scale; each turn's frames follow
//   x_t = mu_s + ar_coefficient * (x_{t-1} - mu_s) + eps_t,
// eps_t Gaussian with std noise_scale, x_{-1} = mu_s. Turns are laid out
// back to back on the frame grid and cycle through a shuffled speaker
// rotation, so adjacent turns always belong to different speakers.
Corpus generate_synthetic_corpus(const SynthConfig& cfg);

// Randomly crops `count` fixed-duration sequences for one speaker, each crop
// lying entirely inside one annotated segment of that speaker, uniform over
// all valid (segment, offset) choices. Within one call the crops are distinct
// when enough distinct offsets exist; across calls sampling is with
// replacement. Throws if the speaker has no segment of at least `duration`.
std::vector<FeatureSequence> sample_fixed_sequences(const Corpus& corpus,
                                                    const std::string& speaker, double duration,
                                                    int count, Rng& rng);

// Raw feature blob I/O: little-endian float32, row-major T x F, with a JSON
// sidecar carrying {uri, T, F, frame_step, frame_duration}. `base` is the
// path without extension; writes/reads base + ".f32" and base + ".json".
void save_feature_blob(const FeatureSequence& features, const std::string& uri,
                       const std::string& base);
FeatureSequence load_feature_blob(const std::string& base, std::string* uri_out = nullptr);

// Corpus directory layout: manifest.json, annotations.txt, one blob+sidecar
// pair per uri.
void save_corpus(const Corpus& corpus, const std::string& dir, uint64_t seed,
                 const std::string& config_hash);
Corpus load_corpus(const std::string& dir);

}  // namespace tristou

#endif  // TRISTOU_CORPUS_HPP
