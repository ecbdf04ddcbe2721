// core/include/tristou/training.hpp

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

#ifndef TRISTOU_TRAINING_HPP
#define TRISTOU_TRAINING_HPP

#include <functional>
#include <string>
#include <vector>

#include "tristou/corpus.hpp"
#include "tristou/matrix.hpp"
#include "tristou/network.hpp"
#include "tristou/rng.hpp"

namespace tristou {

// Indices of an (anchor, positive, negative) choice in an epoch pool.
// speaker(anchor) == speaker(positive) != speaker(negative), anchor != positive.
struct Triplet {
  int anchor = 0;
  int positive = 0;
  int negative = 0;
};

struct TrainConfig {
  double margin = 0.2;
  double learning_rate = 1e-3;
  int epochs = 50;
  int sequences_per_speaker = 40;  // n sequences sampled per speaker per epoch
  int batch_size = 32;
  double duration = 2.0;  // seconds per training sequence
  uint64_t seed = 42;
  int lstm_units = 16;
  int hidden_units = 16;
  int embedding_dim = 16;
  double rmsprop_rho = 0.9;
  double rmsprop_epsilon = 1e-8;
  int workers = 1;

  void validate() const;
};

// Per-parameter running mean-square accumulators for RMSProp.
struct OptimizerState {
  TristouNetParams mean_square;
  double rho = 0.9;
  double epsilon = 1e-8;
  long long steps = 0;

  static OptimizerState create(const Dims& dims, double rho, double epsilon);
};

struct EpochStats {
  int epoch = 0;
  double total_loss = 0.0;  // summed hinge terms over the epoch's triplets
  long long num_triplets = 0;
  long long active_triplets = 0;  // triplets with positive hinge at compute time
  long long skipped_pairs = 0;    // anchor-positive pairs with no violating negative
  double wall_time_s = 0.0;
};

// n sequences for each speaker; speaker s occupies indices
// [s * per_speaker, (s + 1) * per_speaker).
struct EpochPool {
  std::vector<std::string> speakers;  // sorted
  int per_speaker = 0;
  std::vector<FeatureSequence> sequences;

  int num_speakers() const { return static_cast<int>(speakers.size()); }
  int speaker_of(int index) const { return index / per_speaker; }
  int size() const { return static_cast<int>(sequences.size()); }
};

EpochPool make_epoch_pool(const Corpus& corpus, double duration, int per_speaker, Rng& rng);

// Squared-distance difference |e_a - e_p|^2 - |e_a - e_n|^2.
double triplet_delta(const Vector& anchor, const Vector& positive, const Vector& negative);

// Hinged sum over deltas: sum max(0, delta + margin).
double triplet_loss(const std::vector<double>& deltas, double margin);

struct TripletGrad {
  bool active = false;  // hinge engaged (delta + margin > 0)
  Vector anchor, positive, negative;
};

// Subgradient of max(0, delta + margin) with respect to the three embeddings;
// zero vectors when the hinge is inactive.
TripletGrad triplet_loss_grad(const Vector& anchor, const Vector& positive,
                              const Vector& negative, double margin);

struct SampledTriplets {
  std::vector<Triplet> triplets;
  long long skipped_pairs = 0;
};

// Hard-negative sampling: embeds the whole pool once with the given
// parameters, enumerates every within-speaker anchor-positive pair, and for
// each pair draws negatives uniformly without replacement until one violates
// the margin (delta + margin > 0). Pairs with no violating negative are
// skipped and counted; emitted + skipped always equals N * n * (n-1) / 2.
SampledTriplets sample_epoch_triplets(const EpochPool& pool, const TristouNetParams& params,
                                      const TrainConfig& cfg, Rng& rng);

// s <- rho * s + (1 - rho) * g^2; theta <- theta - lr * g / (sqrt(s) + eps).
// Throws on non-finite gradients.
void rmsprop_update(TristouNetParams& params, const Gradients& grads, OptimizerState& state,
                    double learning_rate);

// acc += scale * other, over every parameter tensor.
void accumulate(TristouNetParams& acc, const TristouNetParams& other, double scale);

// One pass over the given triplets: shuffled, processed in batches; per batch
// the mean hinge loss is backpropagated through all three roles (a sequence
// appearing in several roles accumulates all contributions) followed by one
// RMSProp step. Returns summed-loss statistics for the epoch.
EpochStats train_epoch(TristouNetParams& params, const std::vector<Triplet>& triplets,
                       const EpochPool& pool, const TrainConfig& cfg, OptimizerState& state,
                       Rng& rng);

struct FitResult {
  TristouNetParams params;
  std::vector<EpochStats> history;
};

using EpochObserver = std::function<void(const EpochStats&, const TristouNetParams&)>;

// Full training loop: per epoch, resample the pool and the hard-negative
// triplets, then run train_epoch. Deterministic given cfg.seed, independent
// of cfg.workers.
FitResult fit(const Corpus& corpus, const TrainConfig& cfg, const EpochObserver& observer = {});

// Continues from existing parameters; epoch numbering starts at start_epoch
// and the optimizer accumulators start fresh.
FitResult fit_resume(const Corpus& corpus, const TrainConfig& cfg, TristouNetParams params,
                     int start_epoch, const EpochObserver& observer = {});

}  // namespace tristou

#endif  // TRISTOU_TRAINING_HPP
