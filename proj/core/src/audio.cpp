// core/src/audio.cpp

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

#include "tristou/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace tristou {

namespace {

uint32_t read_u32le(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | static_cast<uint32_t>(p[1]) << 8 |
         static_cast<uint32_t>(p[2]) << 16 | static_cast<uint32_t>(p[3]) << 24;
}

uint16_t read_u16le(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | p[1] << 8);
}

void put_u32le(std::string& out, uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8 & 0xff));
  out.push_back(static_cast<char>(v >> 16 & 0xff));
  out.push_back(static_cast<char>(v >> 24 & 0xff));
}

void put_u16le(std::string& out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8 & 0xff));
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error("load_wav: " + path + ": " + what);
}

}  // namespace

AudioSignal load_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open file");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 12) fail(path, "truncated RIFF header");
  if (std::memcmp(bytes.data(), "RIFF", 4) != 0 || std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    fail(path, "not a RIFF/WAVE file");

  bool have_fmt = false;
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  const unsigned char* data = nullptr;
  size_t data_size = 0;

  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
    const uint32_t chunk_size = read_u32le(bytes.data() + pos + 4);
    pos += 8;
    if (pos + chunk_size > bytes.size()) fail(path, "truncated chunk");
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (chunk_size < 16) fail(path, "fmt chunk too small");
      const unsigned char* f = bytes.data() + pos;
      format = read_u16le(f);
      channels = read_u16le(f + 2);
      rate = read_u32le(f + 4);
      bits = read_u16le(f + 14);
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data = bytes.data() + pos;
      data_size = chunk_size;
    }
    pos += chunk_size + (chunk_size & 1);  // chunks are word-aligned
  }

  if (!have_fmt) fail(path, "missing fmt chunk");
  if (data == nullptr) fail(path, "missing data chunk");
  if (format != 1)
    fail(path, "encoding=" + std::to_string(format) + " unsupported (PCM required)");
  if (channels != 1)
    fail(path, "channels=" + std::to_string(channels) + " unsupported (mono required)");
  if (bits != 16)
    fail(path, "bits=" + std::to_string(bits) + " unsupported (16-bit required)");
  if (rate != kExpectedSampleRate)
    fail(path, "sample_rate=" + std::to_string(rate) + " unsupported (expected " +
                   std::to_string(kExpectedSampleRate) + ", no resampling)");
  if (data_size % 2 != 0) fail(path, "odd data chunk size");

  AudioSignal out;
  out.sample_rate = static_cast<int>(rate);
  out.samples.resize(data_size / 2);
  for (size_t i = 0; i < out.samples.size(); ++i) {
    const int16_t s = static_cast<int16_t>(read_u16le(data + 2 * i));
    out.samples[i] = s / 32768.0;
  }
  return out;
}

void save_wav(const AudioSignal& signal, const std::string& path) {
  if (signal.sample_rate <= 0) throw std::invalid_argument("save_wav: invalid sample rate");
  const uint32_t data_size = static_cast<uint32_t>(signal.samples.size() * 2);
  std::string out;
  out.reserve(44 + data_size);
  out += "RIFF";
  put_u32le(out, 36 + data_size);
  out += "WAVEfmt ";
  put_u32le(out, 16);
  put_u16le(out, 1);  // PCM
  put_u16le(out, 1);  // mono
  put_u32le(out, static_cast<uint32_t>(signal.sample_rate));
  put_u32le(out, static_cast<uint32_t>(signal.sample_rate) * 2);
  put_u16le(out, 2);
  put_u16le(out, 16);
  out += "data";
  put_u32le(out, data_size);
  for (double v : signal.samples) {
    const double clamped = std::clamp(v, -1.0, 1.0);
    const int q = static_cast<int>(std::lrint(clamped * 32767.0));
    put_u16le(out, static_cast<uint16_t>(static_cast<int16_t>(q)));
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("save_wav: cannot open " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw std::runtime_error("save_wav: write failed for " + path);
}

}  // namespace tristou
