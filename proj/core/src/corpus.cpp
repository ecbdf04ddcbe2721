// core/src/corpus.cpp

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

#include "tristou/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace tristou {

namespace {
constexpr double kTimeEps = 1e-9;

std::string zero_pad(int value, int width) {
  std::string s = std::to_string(value);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

int digits(int n) {
  int d = 1;
  while (n >= 10) {
    n /= 10;
    ++d;
  }
  return d;
}
}  // namespace

FeatureSequence FeatureSequence::crop(int first, int count) const {
  if (first < 0 || count < 1 || first + count > frames.rows())
    throw std::out_of_range("FeatureSequence::crop: range outside sequence");
  FeatureSequence out;
  out.frames = Matrix(count, frames.cols());
  for (int r = 0; r < count; ++r)
    std::copy(frames.row(first + r).begin(), frames.row(first + r).end(),
              out.frames.row(r).begin());
  out.frame_step = frame_step;
  out.frame_duration = frame_duration;
  out.origin = origin + first * frame_step;
  return out;
}

void Corpus::validate() const {
  for (const auto& [uri, file] : files) {
    if (file.annotation.uri != uri)
      throw std::runtime_error("corpus: annotation uri '" + file.annotation.uri +
                               "' does not match file key '" + uri + "'");
    const double extent_end = file.features.origin + file.features.duration();
    for (const auto& entry : file.annotation.entries) {
      if (!speakers.contains(entry.speaker))
        throw std::runtime_error("corpus: speaker '" + entry.speaker +
                                 "' of file " + uri + " missing from speaker set");
      if (entry.segment.start < file.features.origin - kTimeEps ||
          entry.segment.end > extent_end + kTimeEps)
        throw std::runtime_error("corpus: segment of file " + uri +
                                 " outside feature extent");
    }
  }
}

void SynthConfig::validate() const {
  if (num_speakers < 1) throw std::invalid_argument("synth: num_speakers must be >= 1");
  if (feature_dim < 1) throw std::invalid_argument("synth: feature_dim must be >= 1");
  if (!(noise_scale > 0.0)) throw std::invalid_argument("synth: noise_scale must be > 0");
  if (!(ar_coefficient >= 0.0 && ar_coefficient < 1.0))
    throw std::invalid_argument("synth: ar_coefficient must be in [0, 1)");
  if (!(turn_duration_min < turn_duration_max))
    throw std::invalid_argument("synth: turn duration range must satisfy min < max");
  if (!(turn_duration_min > 0.0))
    throw std::invalid_argument("synth: turn durations must be positive");
  if (turns_per_file < 1) throw std::invalid_argument("synth: turns_per_file must be >= 1");
  if (num_files < 0) throw std::invalid_argument("synth: num_files must be >= 0");
  if (!(frame_step > 0.0) || !(frame_duration > 0.0))
    throw std::invalid_argument("synth: frame grid must be positive");
}

Corpus generate_synthetic_corpus(const SynthConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const int n_speakers = cfg.num_speakers;
  const int n_files = cfg.num_files > 0 ? cfg.num_files : n_speakers;
  const int name_width = std::max(2, digits(n_speakers - 1));
  const int file_width = std::max(3, digits(n_files - 1));

  std::vector<std::string> speaker_names(n_speakers);
  for (int s = 0; s < n_speakers; ++s) speaker_names[s] = "spk" + zero_pad(s, name_width);

  // One mean vector per speaker, drawn once.
  std::vector<Vector> means(n_speakers, Vector(cfg.feature_dim));
  for (int s = 0; s < n_speakers; ++s)
    for (int f = 0; f < cfg.feature_dim; ++f) means[s][f] = cfg.mean_scale * rng.normal();

  // Fixed shuffled rotation; cycling it keeps adjacent turns on different
  // speakers whenever there are at least two.
  std::vector<int> rotation(n_speakers);
  for (int s = 0; s < n_speakers; ++s) rotation[s] = s;
  rng.shuffle(rotation);

  Corpus corpus;
  long long turn_counter = 0;
  for (int fi = 0; fi < n_files; ++fi) {
    const std::string uri = "synth" + zero_pad(fi, file_width);

    std::vector<int> turn_speakers(cfg.turns_per_file);
    std::vector<int> turn_frames(cfg.turns_per_file);
    int total_frames = 0;
    for (int t = 0; t < cfg.turns_per_file; ++t) {
      turn_speakers[t] = rotation[static_cast<size_t>(turn_counter++ % n_speakers)];
      const double dur = rng.uniform(cfg.turn_duration_min, cfg.turn_duration_max);
      turn_frames[t] = std::max(1, static_cast<int>(std::llround(dur / cfg.frame_step)));
      total_frames += turn_frames[t];
    }

    CorpusFile file;
    file.features.frames = Matrix(total_frames, cfg.feature_dim);
    file.features.frame_step = cfg.frame_step;
    file.features.frame_duration = cfg.frame_duration;
    file.annotation.uri = uri;

    int frame = 0;
    for (int t = 0; t < cfg.turns_per_file; ++t) {
      const Vector& mu = means[turn_speakers[t]];
      Vector prev = mu;  // AR(1) restarts at the speaker mean on each turn
      const int first_frame = frame;
      for (int k = 0; k < turn_frames[t]; ++k, ++frame) {
        auto row = file.features.frames.row(frame);
        for (int f = 0; f < cfg.feature_dim; ++f) {
          row[f] = mu[f] + cfg.ar_coefficient * (prev[f] - mu[f]) +
                   cfg.noise_scale * rng.normal();
        }
        std::copy(row.begin(), row.end(), prev.begin());
      }
      AnnotationEntry entry;
      entry.segment.start = first_frame * cfg.frame_step;
      entry.segment.end = frame * cfg.frame_step;
      entry.speaker = speaker_names[turn_speakers[t]];
      file.annotation.entries.push_back(std::move(entry));
    }
    file.annotation.normalize();
    for (const auto& e : file.annotation.entries) corpus.speakers.insert(e.speaker);
    corpus.files.emplace(uri, std::move(file));
  }
  corpus.validate();
  return corpus;
}

std::vector<FeatureSequence> sample_fixed_sequences(const Corpus& corpus,
                                                    const std::string& speaker, double duration,
                                                    int count, Rng& rng) {
  if (corpus.files.empty()) throw std::invalid_argument("sample_fixed_sequences: empty corpus");
  if (count < 1) throw std::invalid_argument("sample_fixed_sequences: count must be >= 1");

  struct Slot {
    const CorpusFile* file;
    int first_offset;
    long long cumulative;  // flat index of this slot's first offset
  };
  std::vector<Slot> slots;
  long long total = 0;

  for (const auto& [uri, file] : corpus.files) {
    const double step = file.features.frame_step;
    const int t_req = static_cast<int>(std::llround(duration / step));
    if (t_req < 1)
      throw std::invalid_argument("sample_fixed_sequences: duration shorter than one frame");
    for (const auto& entry : file.annotation.entries) {
      if (entry.speaker != speaker) continue;
      const double rel_start = (entry.segment.start - file.features.origin) / step;
      const double rel_end = (entry.segment.end - file.features.origin) / step;
      int first = static_cast<int>(std::ceil(rel_start - kTimeEps));
      int last = static_cast<int>(std::floor(rel_end + kTimeEps)) - t_req;
      first = std::max(first, 0);
      last = std::min(last, file.features.num_frames() - t_req);
      if (last < first) continue;
      slots.push_back({&file, first, total});
      total += last - first + 1;
    }
  }

  if (total == 0)
    throw std::runtime_error("sample_fixed_sequences: speaker '" + speaker +
                             "' has no annotated segment of at least " +
                             std::to_string(duration) + " s");

  // Uniform over all valid (segment, offset) choices; distinct within this
  // call when enough offsets exist, with replacement otherwise.
  std::vector<long long> picks;
  picks.reserve(count);
  if (total >= count) {
    std::vector<long long> indices(static_cast<size_t>(total));
    for (long long i = 0; i < total; ++i) indices[static_cast<size_t>(i)] = i;
    for (int k = 0; k < count; ++k) {
      const long long j =
          k + static_cast<long long>(rng.uniform_index(static_cast<uint64_t>(total - k)));
      std::swap(indices[static_cast<size_t>(k)], indices[static_cast<size_t>(j)]);
      picks.push_back(indices[static_cast<size_t>(k)]);
    }
  } else {
    for (int k = 0; k < count; ++k)
      picks.push_back(static_cast<long long>(rng.uniform_index(static_cast<uint64_t>(total))));
  }

  std::vector<FeatureSequence> out;
  out.reserve(count);
  for (const long long flat : picks) {
    size_t lo = 0, hi = slots.size();
    while (hi - lo > 1) {
      const size_t mid = (lo + hi) / 2;
      if (slots[mid].cumulative <= flat)
        lo = mid;
      else
        hi = mid;
    }
    const Slot& slot = slots[lo];
    const double step = slot.file->features.frame_step;
    const int t_req = static_cast<int>(std::llround(duration / step));
    const int offset = slot.first_offset + static_cast<int>(flat - slot.cumulative);
    out.push_back(slot.file->features.crop(offset, t_req));
  }
  return out;
}

void save_feature_blob(const FeatureSequence& features, const std::string& uri,
                       const std::string& base) {
  {
    std::ofstream blob(base + ".f32", std::ios::binary);
    if (!blob) throw std::runtime_error("save_feature_blob: cannot open " + base + ".f32");
    std::vector<float> row(features.dim());
    for (int r = 0; r < features.num_frames(); ++r) {
      const auto src = features.frames.row(r);
      for (int c = 0; c < features.dim(); ++c) row[c] = static_cast<float>(src[c]);
      blob.write(reinterpret_cast<const char*>(row.data()),
                 static_cast<std::streamsize>(row.size() * sizeof(float)));
    }
    if (!blob) throw std::runtime_error("save_feature_blob: write failed for " + base);
  }
  json sidecar = {{"uri", uri},
                  {"T", features.num_frames()},
                  {"F", features.dim()},
                  {"frame_step", features.frame_step},
                  {"frame_duration", features.frame_duration}};
  std::ofstream meta(base + ".json");
  if (!meta) throw std::runtime_error("save_feature_blob: cannot open " + base + ".json");
  meta << sidecar.dump(2) << '\n';
}

FeatureSequence load_feature_blob(const std::string& base, std::string* uri_out) {
  std::ifstream meta(base + ".json");
  if (!meta) throw std::runtime_error("load_feature_blob: cannot open " + base + ".json");
  json sidecar;
  try {
    meta >> sidecar;
  } catch (const json::exception& e) {
    throw std::runtime_error("load_feature_blob: bad sidecar " + base + ".json: " + e.what());
  }
  const int t = sidecar.at("T").get<int>();
  const int f = sidecar.at("F").get<int>();
  if (t < 1 || f < 1) throw std::runtime_error("load_feature_blob: bad dimensions in sidecar");

  FeatureSequence out;
  out.frames = Matrix(t, f);
  out.frame_step = sidecar.at("frame_step").get<double>();
  out.frame_duration = sidecar.at("frame_duration").get<double>();
  if (uri_out) *uri_out = sidecar.at("uri").get<std::string>();

  std::ifstream blob(base + ".f32", std::ios::binary);
  if (!blob) throw std::runtime_error("load_feature_blob: cannot open " + base + ".f32");
  std::vector<float> row(f);
  for (int r = 0; r < t; ++r) {
    blob.read(reinterpret_cast<char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(float)));
    if (!blob)
      throw std::runtime_error("load_feature_blob: " + base + ".f32 truncated (expected " +
                               std::to_string(t) + "x" + std::to_string(f) + ")");
    auto dst = out.frames.row(r);
    for (int c = 0; c < f; ++c) dst[c] = row[c];
  }
  return out;
}

void save_corpus(const Corpus& corpus, const std::string& dir, uint64_t seed,
                 const std::string& config_hash) {
  fs::create_directories(dir);
  std::vector<Annotation> annotations;
  json file_list = json::array();
  for (const auto& [uri, file] : corpus.files) {
    save_feature_blob(file.features, uri, (fs::path(dir) / uri).string());
    annotations.push_back(file.annotation);
    file_list.push_back(uri);
  }
  save_annotations(annotations, (fs::path(dir) / "annotations.txt").string());

  const Corpus& c = corpus;
  json manifest = {{"format_version", 1},
                   {"seed", seed},
                   {"config_hash", config_hash},
                   {"files", file_list},
                   {"speakers", c.sorted_speakers()}};
  if (!corpus.files.empty()) {
    const FeatureSequence& f = corpus.files.begin()->second.features;
    manifest["feature_dim"] = f.dim();
    manifest["frame_step"] = f.frame_step;
    manifest["frame_duration"] = f.frame_duration;
  }
  std::ofstream out(fs::path(dir) / "manifest.json");
  if (!out) throw std::runtime_error("save_corpus: cannot write manifest in " + dir);
  out << manifest.dump(2) << '\n';
}

Corpus load_corpus(const std::string& dir) {
  std::ifstream in(fs::path(dir) / "manifest.json");
  if (!in) throw std::runtime_error("load_corpus: no manifest.json in " + dir);
  json manifest;
  try {
    in >> manifest;
  } catch (const json::exception& e) {
    throw std::runtime_error("load_corpus: bad manifest in " + dir + ": " + e.what());
  }

  auto annotations = load_annotations((fs::path(dir) / "annotations.txt").string());
  std::map<std::string, Annotation> by_uri;
  for (auto& a : annotations) by_uri.emplace(a.uri, std::move(a));

  Corpus corpus;
  for (const auto& uri_json : manifest.at("files")) {
    const std::string uri = uri_json.get<std::string>();
    CorpusFile file;
    std::string blob_uri;
    file.features = load_feature_blob((fs::path(dir) / uri).string(), &blob_uri);
    if (blob_uri != uri)
      throw std::runtime_error("load_corpus: sidecar uri '" + blob_uri +
                               "' does not match manifest entry '" + uri + "'");
    const auto it = by_uri.find(uri);
    if (it == by_uri.end())
      throw std::runtime_error("load_corpus: no annotation entries for uri " + uri);
    file.annotation = it->second;
    for (const auto& e : file.annotation.entries) corpus.speakers.insert(e.speaker);
    corpus.files.emplace(uri, std::move(file));
  }
  corpus.validate();
  return corpus;
}

}  // namespace tristou
