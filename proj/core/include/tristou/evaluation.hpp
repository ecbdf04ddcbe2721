// core/include/tristou/evaluation.hpp

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

#ifndef TRISTOU_EVALUATION_HPP
#define TRISTOU_EVALUATION_HPP

#include <functional>
#include <string>
#include <vector>

#include "tristou/annotation.hpp"
#include "tristou/corpus.hpp"
#include "tristou/matrix.hpp"
#include "tristou/parallel.hpp"

namespace tristou {

// Scored same/different speaker trials. Scores follow the distance
// convention throughout: smaller means more likely the same speaker.
struct TrialSet {
  std::vector<double> scores;
  std::vector<bool> same;  // parallel to scores

  size_t size() const { return scores.size(); }
};

// Error-rate sweep. Trials with score <= threshold are accepted as "same",
// so along ascending thresholds FPR is non-decreasing and FNR non-increasing.
struct DetCurve {
  std::vector<double> thresholds;  // ascending, with -inf / +inf sentinels
  std::vector<double> fpr;         // fraction of "different" trials accepted
  std::vector<double> fnr;         // fraction of "same" trials rejected
};

// Distance between adjacent sliding windows, every `step` seconds.
struct DistanceCurve {
  std::vector<double> times;  // window centers, strictly increasing
  std::vector<double> values;
};

struct PurityCoveragePoint {
  double threshold = 0.0;
  double purity = 0.0;
  double coverage = 0.0;
  int num_changes = 0;
};

// Scores every unordered pair of items, labeling each trial from speaker
// identity. Items are grouped per speaker; the scorer must be pure.
template <typename Item, typename Scorer>
TrialSet build_trials(const std::vector<std::vector<Item>>& by_speaker, Scorer&& scorer,
                      int workers = 1) {
  std::vector<const Item*> items;
  std::vector<int> speaker_of;
  for (size_t s = 0; s < by_speaker.size(); ++s)
    for (const Item& item : by_speaker[s]) {
      items.push_back(&item);
      speaker_of.push_back(static_cast<int>(s));
    }
  const size_t n = items.size();

  TrialSet trials;
  trials.scores.resize(n * (n - 1) / 2);
  trials.same.resize(trials.scores.size());
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(trials.scores.size());
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));

  parallel_for(static_cast<int>(pairs.size()), workers, [&](int k) {
    const auto [i, j] = pairs[static_cast<size_t>(k)];
    trials.scores[static_cast<size_t>(k)] = scorer(*items[i], *items[j]);
    trials.same[static_cast<size_t>(k)] = speaker_of[i] == speaker_of[j];
  });
  return trials;
}

// Threshold sweep over all distinct scores plus -inf/+inf sentinels;
// FPR(t) = fraction of "different" trials with score <= t,
// FNR(t) = fraction of "same" trials with score > t.
DetCurve det_curve(const TrialSet& trials);

// Equal error rate: linear interpolation between the adjacent sweep points
// where FNR - FPR changes sign. Result in [0, 1].
double eer(const DetCurve& curve);

using SequenceScorer =
    std::function<double(const FeatureSequence&, const FeatureSequence&)>;

// Scores the distance between the left window [t - window, t] and the right
// window [t, t + window] for every center t on the step grid. Files shorter
// than 2 * window produce an empty curve.
DistanceCurve scd_distance_curve(const FeatureSequence& features, const SequenceScorer& scorer,
                                 double window = 2.0, double step = 0.1, int workers = 1);

// A time is a change iff its value is >= threshold and strictly greater than
// every other curve value within +/- context, ties broken toward the earlier
// time. Surviving peaks are therefore pairwise more than `context` apart.
std::vector<double> detect_peaks(const DistanceCurve& curve, double context, double threshold);

// Consecutive boundaries [extent.start, changes..., extent.end] define the
// hypothesis segments.
std::vector<Segment> changes_to_segments(const std::vector<double>& changes,
                                         const Segment& extent);

// Numerator / denominator of the coverage fraction: sum over reference
// segments of the best single-hypothesis overlap, and total reference
// duration. Exposed so multi-file scores can be aggregated.
struct CoverageTerms {
  double numerator = 0.0;
  double denominator = 0.0;
};
CoverageTerms coverage_terms(const std::vector<Segment>& reference,
                             const std::vector<Segment>& hypothesis);

// coverage(R, H) = sum_r max_h |r n h| / sum_r |r|, in continuous time.
double coverage(const Annotation& reference, const std::vector<Segment>& hypothesis);

// Dual metric: purity(R, H) = coverage(H, R) exactly.
double purity(const Annotation& reference, const std::vector<Segment>& hypothesis);

// One purity/coverage point per threshold, via detect_peaks over the curve
// and segmentation of the reference extent.
std::vector<PurityCoveragePoint> purity_coverage_curve(const Annotation& reference,
                                                       const DistanceCurve& curve,
                                                       const std::vector<double>& thresholds,
                                                       double context = 1.0);

}  // namespace tristou

#endif  // TRISTOU_EVALUATION_HPP
