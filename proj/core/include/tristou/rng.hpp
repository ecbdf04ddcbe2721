// core/include/tristou/rng.hpp

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

#ifndef TRISTOU_RNG_HPP
#define TRISTOU_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace tristou {

// Seeded generator with fully pinned output. The distribution transforms are
// implemented here rather than taken from <random> because the standard leaves
// std::uniform_int_distribution and std::normal_distribution
// implementation-defined; reproducibility contracts require one fixed stream.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random mantissa bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Unbiased uniform draw from {0, 1, ..., n-1}; n must be positive.
  uint64_t uniform_index(uint64_t n);

  // Standard normal via Box-Muller; generates values in pairs.
  double normal();

  // In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(uniform_index(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

// Stable derived seed for independent sub-streams (per speaker, per epoch...).
uint64_t derive_seed(uint64_t base, uint64_t key);

}  // namespace tristou

#endif  // TRISTOU_RNG_HPP
