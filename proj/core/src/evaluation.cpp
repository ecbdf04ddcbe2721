// core/src/evaluation.cpp

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

#include "tristou/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tristou {

namespace {
constexpr double kTimeEps = 1e-9;
}

DetCurve det_curve(const TrialSet& trials) {
  if (trials.scores.size() != trials.same.size())
    throw std::invalid_argument("det_curve: scores and labels differ in length");
  long long num_same = 0, num_diff = 0;
  for (const bool s : trials.same) (s ? num_same : num_diff)++;
  if (num_same == 0 || num_diff == 0)
    throw std::invalid_argument("det_curve: need at least one trial of each label");

  std::vector<std::pair<double, bool>> sorted(trials.size());
  for (size_t i = 0; i < trials.size(); ++i) sorted[i] = {trials.scores[i], trials.same[i]};
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  const double inf = std::numeric_limits<double>::infinity();
  DetCurve curve;
  curve.thresholds.push_back(-inf);
  curve.fpr.push_back(0.0);
  curve.fnr.push_back(1.0);

  long long same_leq = 0, diff_leq = 0;
  size_t i = 0;
  while (i < sorted.size()) {
    const double threshold = sorted[i].first;
    while (i < sorted.size() && sorted[i].first == threshold) {
      (sorted[i].second ? same_leq : diff_leq)++;
      ++i;
    }
    curve.thresholds.push_back(threshold);
    curve.fpr.push_back(static_cast<double>(diff_leq) / num_diff);
    curve.fnr.push_back(1.0 - static_cast<double>(same_leq) / num_same);
  }

  curve.thresholds.push_back(inf);
  curve.fpr.push_back(1.0);
  curve.fnr.push_back(0.0);
  return curve;
}

double eer(const DetCurve& curve) {
  const size_t n = curve.thresholds.size();
  if (n < 2 || curve.fpr.size() != n || curve.fnr.size() != n)
    throw std::invalid_argument("eer: malformed curve");
  // FNR - FPR falls monotonically from +1 to -1 along the sweep; find the
  // first sign change and interpolate linearly across it.
  for (size_t i = 0; i < n; ++i) {
    const double diff = curve.fnr[i] - curve.fpr[i];
    if (diff > 0.0) continue;
    if (diff == 0.0 || i == 0) return curve.fpr[i];
    const double prev = curve.fnr[i - 1] - curve.fpr[i - 1];
    const double w = prev / (prev - diff);
    return curve.fpr[i - 1] + w * (curve.fpr[i] - curve.fpr[i - 1]);
  }
  throw std::runtime_error("eer: no FNR/FPR crossing found");
}

DistanceCurve scd_distance_curve(const FeatureSequence& features, const SequenceScorer& scorer,
                                 double window, double step, int workers) {
  if (!(window > 0.0) || !(step > 0.0))
    throw std::invalid_argument("scd_distance_curve: window and step must be positive");
  DistanceCurve curve;
  const double duration = features.duration();
  if (duration < 2.0 * window - kTimeEps) return curve;  // too short: empty, not an error

  const int count = static_cast<int>(std::floor((duration - 2.0 * window) / step + kTimeEps)) + 1;
  curve.times.resize(count);
  curve.values.resize(count);
  const double frame_step = features.frame_step;
  parallel_for(count, workers, [&](int k) {
    const double center = window + k * step;
    const int left = static_cast<int>(std::llround((center - window) / frame_step));
    const int mid = static_cast<int>(std::llround(center / frame_step));
    const int right = std::min(static_cast<int>(std::llround((center + window) / frame_step)),
                               features.num_frames());
    curve.times[static_cast<size_t>(k)] = center;
    curve.values[static_cast<size_t>(k)] =
        scorer(features.crop(left, mid - left), features.crop(mid, right - mid));
  });
  return curve;
}

std::vector<double> detect_peaks(const DistanceCurve& curve, double context, double threshold) {
  if (curve.times.size() != curve.values.size())
    throw std::invalid_argument("detect_peaks: malformed curve");
  std::vector<double> changes;
  const int n = static_cast<int>(curve.times.size());
  for (int i = 0; i < n; ++i) {
    const double v = curve.values[static_cast<size_t>(i)];
    if (v < threshold) continue;
    bool is_peak = true;
    // Strictly greater than every other value within +/- context; equal
    // values lose to the earlier time.
    for (int j = i - 1; j >= 0 && curve.times[i] - curve.times[j] <= context + kTimeEps; --j) {
      if (curve.values[static_cast<size_t>(j)] >= v) {
        is_peak = false;
        break;
      }
    }
    for (int j = i + 1; is_peak && j < n && curve.times[j] - curve.times[i] <= context + kTimeEps;
         ++j) {
      if (curve.values[static_cast<size_t>(j)] > v) is_peak = false;
    }
    if (is_peak) changes.push_back(curve.times[static_cast<size_t>(i)]);
  }
  return changes;
}

std::vector<Segment> changes_to_segments(const std::vector<double>& changes,
                                         const Segment& extent) {
  std::vector<Segment> segments;
  double start = extent.start;
  double prev = extent.start;
  for (const double c : changes) {
    if (c < prev - kTimeEps || c <= extent.start + kTimeEps || c >= extent.end - kTimeEps)
      throw std::invalid_argument("changes_to_segments: changes must be sorted and strictly "
                                  "inside the extent");
    segments.push_back({start, c});
    start = c;
    prev = c;
  }
  segments.push_back({start, extent.end});
  return segments;
}

CoverageTerms coverage_terms(const std::vector<Segment>& reference,
                             const std::vector<Segment>& hypothesis) {
  CoverageTerms terms;
  for (const Segment& r : reference) {
    double best = 0.0;
    for (const Segment& h : hypothesis) best = std::max(best, intersection_duration(r, h));
    terms.numerator += best;
    terms.denominator += r.duration();
  }
  return terms;
}

double coverage(const Annotation& reference, const std::vector<Segment>& hypothesis) {
  if (reference.entries.empty()) throw std::invalid_argument("coverage: empty reference");
  std::vector<Segment> ref_segments;
  ref_segments.reserve(reference.entries.size());
  for (const auto& e : reference.entries) ref_segments.push_back(e.segment);
  const CoverageTerms terms = coverage_terms(ref_segments, hypothesis);
  return terms.denominator > 0.0 ? terms.numerator / terms.denominator : 0.0;
}

double purity(const Annotation& reference, const std::vector<Segment>& hypothesis) {
  if (hypothesis.empty()) throw std::invalid_argument("purity: empty hypothesis");
  if (reference.entries.empty()) throw std::invalid_argument("purity: empty reference");
  std::vector<Segment> ref_segments;
  ref_segments.reserve(reference.entries.size());
  for (const auto& e : reference.entries) ref_segments.push_back(e.segment);
  const CoverageTerms terms = coverage_terms(hypothesis, ref_segments);
  return terms.denominator > 0.0 ? terms.numerator / terms.denominator : 0.0;
}

std::vector<PurityCoveragePoint> purity_coverage_curve(const Annotation& reference,
                                                       const DistanceCurve& curve,
                                                       const std::vector<double>& thresholds,
                                                       double context) {
  const Segment extent = reference.extent();
  std::vector<PurityCoveragePoint> points;
  points.reserve(thresholds.size());
  for (const double threshold : thresholds) {
    const auto changes = detect_peaks(curve, context, threshold);
    const auto segments = changes_to_segments(changes, extent);
    PurityCoveragePoint point;
    point.threshold = threshold;
    point.purity = purity(reference, segments);
    point.coverage = coverage(reference, segments);
    point.num_changes = static_cast<int>(changes.size());
    points.push_back(point);
  }
  return points;
}

}  // namespace tristou
