#pragma once

#include <array>
#include <optional>
#include <vector>

#include "mrcst/types.hpp"

namespace mrcst {

// Convex weights over the three reconstruction channels.
struct FusionWeights {
  std::array<double, 3> alpha = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};

  double sum() const { return alpha[0] + alpha[1] + alpha[2]; }
};

// Weighted sum of the per-channel scores; the fused label is
// predict_label of the result.
double fuse(const std::array<double, 3>& scores, const FusionWeights& w);

// One tuning subject: true label plus its three channel scores.
struct TuningPoint {
  int label = 0;
  std::array<double, 3> scores = {0.0, 0.0, 0.0};
};

// Enumerates every weight triple on the simplex lattice with the given
// step (plus the uniform triple, which is also the tie-break anchor) and
// returns the one with the highest tuning accuracy. Ties prefer the
// triple closest to (1/3,1/3,1/3), then the lexicographically smallest.
// An empty tuning set yields the uniform triple.
FusionWeights grid_search_weights(const std::vector<TuningPoint>& points,
                                  double step = 0.1);

// Mean of one subject's per-sample scores; the subject's label is
// predict_label of the mean, so an exact 0 reads as healthy.
double subject_score(const std::vector<double>& sample_scores);

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  void add(int true_label, int predicted);
  std::size_t total() const { return tp + fp + tn + fn; }
};

// Ratios in [0,1]. Sensitivity needs a positive subject and specificity
// a negative one; they are absent (not 0) when their class is missing.
struct Metrics {
  double accuracy = 0.0;
  std::optional<double> sensitivity;
  std::optional<double> specificity;
};

Metrics compute_metrics(const ConfusionCounts& c);

}  // namespace mrcst
