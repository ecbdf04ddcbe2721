// core/src/training.cpp

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

#include "tristou/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "tristou/parallel.hpp"

namespace tristou {

void TrainConfig::validate() const {
  if (!(margin >= 0.0)) throw std::invalid_argument("train: margin must be >= 0");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("train: learning_rate must be > 0");
  if (epochs < 0) throw std::invalid_argument("train: epochs must be >= 0");
  if (sequences_per_speaker < 2)
    throw std::invalid_argument("train: sequences_per_speaker must be >= 2");
  if (batch_size < 1) throw std::invalid_argument("train: batch_size must be >= 1");
  if (!(duration > 0.0)) throw std::invalid_argument("train: duration must be > 0");
  if (!(rmsprop_rho > 0.0 && rmsprop_rho < 1.0))
    throw std::invalid_argument("train: rmsprop_rho must be in (0, 1)");
  if (!(rmsprop_epsilon > 0.0)) throw std::invalid_argument("train: rmsprop_epsilon must be > 0");
  if (workers < 1) throw std::invalid_argument("train: workers must be >= 1");
}

OptimizerState OptimizerState::create(const Dims& dims, double rho, double epsilon) {
  OptimizerState state;
  state.mean_square = zeros(dims);
  state.rho = rho;
  state.epsilon = epsilon;
  return state;
}

EpochPool make_epoch_pool(const Corpus& corpus, double duration, int per_speaker, Rng& rng) {
  if (per_speaker < 2) throw std::invalid_argument("epoch pool: need >= 2 sequences per speaker");
  EpochPool pool;
  pool.speakers = corpus.sorted_speakers();
  if (pool.num_speakers() < 2) throw std::invalid_argument("epoch pool: need >= 2 speakers");
  pool.per_speaker = per_speaker;
  pool.sequences.reserve(static_cast<size_t>(pool.num_speakers()) * per_speaker);
  for (const auto& speaker : pool.speakers) {
    auto crops = sample_fixed_sequences(corpus, speaker, duration, per_speaker, rng);
    for (auto& crop : crops) pool.sequences.push_back(std::move(crop));
  }
  return pool;
}

double triplet_delta(const Vector& anchor, const Vector& positive, const Vector& negative) {
  return squared_distance(anchor, positive) - squared_distance(anchor, negative);
}

double triplet_loss(const std::vector<double>& deltas, double margin) {
  if (!(margin >= 0.0)) throw std::invalid_argument("triplet_loss: margin must be >= 0");
  double loss = 0.0;
  for (const double d : deltas) loss += std::max(0.0, d + margin);
  return loss;
}

TripletGrad triplet_loss_grad(const Vector& anchor, const Vector& positive,
                              const Vector& negative, double margin) {
  TripletGrad grad;
  const size_t d = anchor.size();
  grad.anchor.assign(d, 0.0);
  grad.positive.assign(d, 0.0);
  grad.negative.assign(d, 0.0);
  if (triplet_delta(anchor, positive, negative) + margin <= 0.0) return grad;
  grad.active = true;
  for (size_t i = 0; i < d; ++i) {
    grad.anchor[i] = 2.0 * (negative[i] - positive[i]);
    grad.positive[i] = 2.0 * (positive[i] - anchor[i]);
    grad.negative[i] = 2.0 * (anchor[i] - negative[i]);
  }
  return grad;
}

SampledTriplets sample_epoch_triplets(const EpochPool& pool, const TristouNetParams& params,
                                      const TrainConfig& cfg, Rng& rng) {
  if (pool.num_speakers() < 2)
    throw std::invalid_argument("sample_epoch_triplets: need >= 2 speakers");
  if (pool.per_speaker < 2)
    throw std::invalid_argument("sample_epoch_triplets: need >= 2 sequences per speaker");
  if (pool.size() != pool.num_speakers() * pool.per_speaker)
    throw std::invalid_argument("sample_epoch_triplets: ragged pool");

  // Embed the whole pool once with the sampling-time parameters.
  std::vector<Vector> embeddings(pool.size());
  parallel_for(pool.size(), cfg.workers,
               [&](int i) { embeddings[i] = embed(params, pool.sequences[i]); });

  SampledTriplets result;
  const int n = pool.per_speaker;
  std::vector<int> negatives;
  std::vector<int> scratch;
  for (int s = 0; s < pool.num_speakers(); ++s) {
    const int base = s * n;
    negatives.clear();
    for (int i = 0; i < pool.size(); ++i)
      if (pool.speaker_of(i) != s) negatives.push_back(i);

    for (int a = 0; a < n; ++a) {
      for (int p = a + 1; p < n; ++p) {
        const Vector& e_a = embeddings[base + a];
        const double delta_ap = squared_distance(e_a, embeddings[base + p]);
        scratch = negatives;
        bool found = false;
        // Uniform draws without replacement via incremental Fisher-Yates.
        for (size_t k = 0; k < scratch.size(); ++k) {
          const size_t j = k + static_cast<size_t>(rng.uniform_index(scratch.size() - k));
          std::swap(scratch[k], scratch[j]);
          const int candidate = scratch[k];
          const double delta = delta_ap - squared_distance(e_a, embeddings[candidate]);
          if (delta + cfg.margin > 0.0) {
            result.triplets.push_back({base + a, base + p, candidate});
            found = true;
            break;
          }
        }
        if (!found) ++result.skipped_pairs;
      }
    }
  }
  return result;
}

void accumulate(TristouNetParams& acc, const TristouNetParams& other, double scale) {
  auto acc_refs = tensor_refs(acc);
  auto other_refs = tensor_refs(const_cast<TristouNetParams&>(other));
  for (size_t t = 0; t < acc_refs.size(); ++t) {
    if (acc_refs[t].size != other_refs[t].size)
      throw std::invalid_argument("accumulate: shape mismatch at " + acc_refs[t].name);
    for (size_t i = 0; i < acc_refs[t].size; ++i)
      acc_refs[t].data[i] += scale * other_refs[t].data[i];
  }
}

void rmsprop_update(TristouNetParams& params, const Gradients& grads, OptimizerState& state,
                    double learning_rate) {
  auto param_refs = tensor_refs(params);
  auto grad_refs = tensor_refs(const_cast<Gradients&>(grads));
  auto state_refs = tensor_refs(state.mean_square);
  for (size_t t = 0; t < param_refs.size(); ++t) {
    if (param_refs[t].size != grad_refs[t].size || param_refs[t].size != state_refs[t].size)
      throw std::invalid_argument("rmsprop_update: shape mismatch at " + param_refs[t].name);
    for (size_t i = 0; i < param_refs[t].size; ++i) {
      const double g = grad_refs[t].data[i];
      if (!std::isfinite(g))
        throw std::runtime_error("rmsprop_update: non-finite gradient in " + param_refs[t].name);
      double& s = state_refs[t].data[i];
      s = state.rho * s + (1.0 - state.rho) * g * g;
      param_refs[t].data[i] -= learning_rate * g / (std::sqrt(s) + state.epsilon);
    }
  }
  ++state.steps;
}

EpochStats train_epoch(TristouNetParams& params, const std::vector<Triplet>& triplets,
                       const EpochPool& pool, const TrainConfig& cfg, OptimizerState& state,
                       Rng& rng) {
  EpochStats stats;
  stats.num_triplets = static_cast<long long>(triplets.size());
  if (triplets.empty()) return stats;

  for (const Triplet& t : triplets) {
    if (t.anchor < 0 || t.anchor >= pool.size() || t.positive < 0 || t.positive >= pool.size() ||
        t.negative < 0 || t.negative >= pool.size())
      throw std::out_of_range("train_epoch: triplet index outside pool");
  }

  std::vector<Triplet> order = triplets;
  rng.shuffle(order);

  struct SequenceSlot {
    int pool_index = 0;
    Vector embedding;
    ForwardCache cache;
    Vector grad_output;
    bool touched = false;
  };

  std::vector<SequenceSlot> slots;
  std::unordered_map<int, int> slot_of;
  std::vector<Gradients> slot_grads;

  const size_t num_batches = (order.size() + cfg.batch_size - 1) / cfg.batch_size;
  for (size_t b = 0; b < num_batches; ++b) {
    const size_t begin = b * cfg.batch_size;
    const size_t end = std::min(order.size(), begin + cfg.batch_size);
    const double batch_count = static_cast<double>(end - begin);

    slots.clear();
    slot_of.clear();
    auto slot_for = [&](int pool_index) {
      auto [it, inserted] = slot_of.try_emplace(pool_index, static_cast<int>(slots.size()));
      if (inserted) {
        slots.emplace_back();
        slots.back().pool_index = pool_index;
      }
      return it->second;
    };
    for (size_t k = begin; k < end; ++k) {
      slot_for(order[k].anchor);
      slot_for(order[k].positive);
      slot_for(order[k].negative);
    }

    // Embeddings are recomputed with the current parameters once per batch.
    parallel_for(static_cast<int>(slots.size()), cfg.workers, [&](int i) {
      slots[i].embedding = embed(params, pool.sequences[slots[i].pool_index], &slots[i].cache);
      slots[i].grad_output.assign(slots[i].embedding.size(), 0.0);
    });

    for (size_t k = begin; k < end; ++k) {
      const Triplet& t = order[k];
      SequenceSlot& a = slots[static_cast<size_t>(slot_of.at(t.anchor))];
      SequenceSlot& p = slots[static_cast<size_t>(slot_of.at(t.positive))];
      SequenceSlot& n = slots[static_cast<size_t>(slot_of.at(t.negative))];
      const TripletGrad g =
          triplet_loss_grad(a.embedding, p.embedding, n.embedding, cfg.margin);
      const double delta = triplet_delta(a.embedding, p.embedding, n.embedding);
      stats.total_loss += std::max(0.0, delta + cfg.margin);
      if (!g.active) continue;
      ++stats.active_triplets;
      axpy(1.0, g.anchor, a.grad_output);
      axpy(1.0, g.positive, p.grad_output);
      axpy(1.0, g.negative, n.grad_output);
      a.touched = p.touched = n.touched = true;
    }

    // Mean hinge loss over the batch; backward is linear in grad_output, so
    // one pass per sequence carries all of its role contributions.
    slot_grads.assign(slots.size(), Gradients{});
    parallel_for(static_cast<int>(slots.size()), cfg.workers, [&](int i) {
      if (!slots[i].touched) return;
      Vector scaled = slots[i].grad_output;
      for (double& v : scaled) v /= batch_count;
      slot_grads[static_cast<size_t>(i)] = embed_backward(params, slots[i].cache, scaled);
    });

    Gradients total = zeros(params.dims);
    for (size_t i = 0; i < slots.size(); ++i)
      if (slots[i].touched) accumulate(total, slot_grads[i], 1.0);
    rmsprop_update(params, total, state, cfg.learning_rate);
  }
  return stats;
}

FitResult fit_resume(const Corpus& corpus, const TrainConfig& cfg, TristouNetParams params,
                     int start_epoch, const EpochObserver& observer) {
  cfg.validate();
  if (corpus.speakers.size() < 2) throw std::invalid_argument("fit: corpus needs >= 2 speakers");

  FitResult result;
  OptimizerState state = OptimizerState::create(params.dims, cfg.rmsprop_rho, cfg.rmsprop_epsilon);
  for (int e = 0; e < cfg.epochs; ++e) {
    const int epoch = start_epoch + e;
    const auto t0 = std::chrono::steady_clock::now();
    // Per-epoch derived seed: resumed runs see the same stream for a given
    // absolute epoch index.
    Rng epoch_rng(derive_seed(cfg.seed, static_cast<uint64_t>(epoch) + 1));
    EpochPool pool = make_epoch_pool(corpus, cfg.duration, cfg.sequences_per_speaker, epoch_rng);
    SampledTriplets sampled = sample_epoch_triplets(pool, params, cfg, epoch_rng);
    EpochStats stats = train_epoch(params, sampled.triplets, pool, cfg, state, epoch_rng);
    stats.epoch = epoch;
    stats.skipped_pairs = sampled.skipped_pairs;
    stats.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (observer) observer(stats, params);
    result.history.push_back(stats);
  }
  result.params = std::move(params);
  return result;
}

FitResult fit(const Corpus& corpus, const TrainConfig& cfg, const EpochObserver& observer) {
  cfg.validate();
  if (corpus.files.empty()) throw std::invalid_argument("fit: empty corpus");
  const Dims dims{corpus.files.begin()->second.features.dim(), cfg.lstm_units, cfg.hidden_units,
                  cfg.embedding_dim};
  Rng init_rng(derive_seed(cfg.seed, 0));
  return fit_resume(corpus, cfg, init_params(dims, init_rng), 0, observer);
}

}  // namespace tristou
