// core/include/tristou/audio.hpp

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

#ifndef TRISTOU_AUDIO_HPP
#define TRISTOU_AUDIO_HPP

#include <string>
#include <vector>

namespace tristou {

// Mono audio with samples in [-1, 1].
struct AudioSignal {
  std::vector<double> samples;
  int sample_rate = 0;

  double duration() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

inline constexpr int kExpectedSampleRate = 16000;

// Reads a RIFF/WAVE file. Accepts PCM 16-bit mono at 16 kHz only and rejects
// anything else with a descriptive error; there is no silent resampling or
// downmixing. Samples are scaled by 1/32768.
AudioSignal load_wav(const std::string& path);

// Writes PCM 16-bit mono; values are clamped to [-1, 1] before quantization.
void save_wav(const AudioSignal& signal, const std::string& path);

}  // namespace tristou

#endif  // TRISTOU_AUDIO_HPP
