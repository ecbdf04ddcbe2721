// core/src/annotation.cpp

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

#include "tristou/annotation.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tristou {

double intersection_duration(const Segment& a, const Segment& b) {
  const double lo = std::max(a.start, b.start);
  const double hi = std::min(a.end, b.end);
  return std::max(0.0, hi - lo);
}

void Annotation::normalize() {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const AnnotationEntry& a, const AnnotationEntry& b) {
                     return a.segment.start < b.segment.start;
                   });
  for (size_t i = 0; i < entries.size(); ++i) {
    const Segment& s = entries[i].segment;
    if (!(s.start >= 0.0 && s.start < s.end))
      throw std::runtime_error("annotation " + uri + ": invalid segment [" +
                               std::to_string(s.start) + ", " + std::to_string(s.end) + ")");
    if (i > 0 && entries[i - 1].segment.end > s.start + 1e-12)
      throw std::runtime_error("annotation " + uri + ": overlapping segments at t=" +
                               std::to_string(s.start));
  }
}

std::vector<std::string> Annotation::speakers() const {
  std::set<std::string> s;
  for (const auto& e : entries) s.insert(e.speaker);
  return {s.begin(), s.end()};
}

Segment Annotation::extent() const {
  if (entries.empty()) throw std::runtime_error("annotation " + uri + ": empty");
  return {entries.front().segment.start, entries.back().segment.end};
}

namespace {

double parse_seconds(const std::string& token, const std::string& path, int line_number) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw std::runtime_error(path + ":" + std::to_string(line_number) +
                             ": malformed time field '" + token + "'");
  return v;
}

std::string format_seconds(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return {buf, ptr};
}

std::vector<Annotation> parse_annotation_stream(std::istream& in, const std::string& path) {
  std::map<std::string, Annotation> by_uri;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string uri, start, end, speaker, extra;
    if (!(fields >> uri)) continue;  // blank line
    if (!(fields >> start >> end >> speaker) || (fields >> extra))
      throw std::runtime_error(path + ":" + std::to_string(line_number) +
                               ": expected `uri start end speaker`");
    AnnotationEntry entry;
    entry.segment.start = parse_seconds(start, path, line_number);
    entry.segment.end = parse_seconds(end, path, line_number);
    if (!(entry.segment.start >= 0.0 && entry.segment.start < entry.segment.end))
      throw std::runtime_error(path + ":" + std::to_string(line_number) +
                               ": invalid segment (need 0 <= start < end)");
    entry.speaker = speaker;
    auto& ann = by_uri[uri];
    ann.uri = uri;
    ann.entries.push_back(std::move(entry));
  }
  std::vector<Annotation> out;
  out.reserve(by_uri.size());
  for (auto& [uri, ann] : by_uri) {
    ann.normalize();
    out.push_back(std::move(ann));
  }
  return out;
}

}  // namespace

std::vector<Annotation> load_annotations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_annotation: cannot open " + path);
  return parse_annotation_stream(in, path);
}

Annotation load_annotation(const std::string& path) {
  auto all = load_annotations(path);
  if (all.empty()) throw std::runtime_error("load_annotation: " + path + ": no records");
  if (all.size() > 1)
    throw std::runtime_error("load_annotation: " + path + ": contains " +
                             std::to_string(all.size()) + " uris, expected one");
  return std::move(all.front());
}

void save_annotations(const std::vector<Annotation>& annotations, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_annotation: cannot open " + path);
  for (const auto& ann : annotations) {
    for (const auto& e : ann.entries) {
      out << ann.uri << ' ' << format_seconds(e.segment.start) << ' '
          << format_seconds(e.segment.end) << ' ' << e.speaker << '\n';
    }
  }
  if (!out) throw std::runtime_error("save_annotation: write failed for " + path);
}

void save_annotation(const Annotation& annotation, const std::string& path) {
  save_annotations({annotation}, path);
}

}  // namespace tristou
