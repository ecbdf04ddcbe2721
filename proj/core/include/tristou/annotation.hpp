// core/include/tristou/annotation.hpp

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

#ifndef TRISTOU_ANNOTATION_HPP
#define TRISTOU_ANNOTATION_HPP

#include <string>
#include <vector>

namespace tristou {

// Time interval in seconds; 0 <= start < end.
struct Segment {
  double start = 0.0;
  double end = 0.0;

  double duration() const { return end - start; }
  bool operator==(const Segment&) const = default;
};

// Length of the intersection of two segments, in seconds (0 if disjoint).
double intersection_duration(const Segment& a, const Segment& b);

struct AnnotationEntry {
  Segment segment;
  std::string speaker;
  bool operator==(const AnnotationEntry&) const = default;
};

// Labeled speech turns of one file. Entries are kept sorted by start time and
// may not overlap (touching boundaries are fine); overlapping references are
// rejected at load and at validate().
struct Annotation {
  std::string uri;
  std::vector<AnnotationEntry> entries;

  // Sorts entries and throws std::runtime_error on invalid or overlapping
  // segments.
  void normalize();

  std::vector<std::string> speakers() const;  // distinct, sorted
  Segment extent() const;                     // [first start, last end]
  bool operator==(const Annotation&) const = default;
};

// Text format: one `uri start end speaker` record per line, whitespace
// separated, '#' comment lines and blank lines ignored.

// Loads an annotation file that refers to a single uri.
Annotation load_annotation(const std::string& path);

// Loads an annotation file that may mix several uris; one Annotation per uri,
// sorted by uri.
std::vector<Annotation> load_annotations(const std::string& path);

void save_annotation(const Annotation& annotation, const std::string& path);
void save_annotations(const std::vector<Annotation>& annotations, const std::string& path);

}  // namespace tristou

#endif  // TRISTOU_ANNOTATION_HPP
