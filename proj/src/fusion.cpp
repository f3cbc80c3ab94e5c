#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mrcst/classifiers.hpp"
#include "mrcst/fusion.hpp"

namespace mrcst {

double fuse(const std::array<double, 3>& scores, const FusionWeights& w) {
  return w.alpha[0] * scores[0] + w.alpha[1] * scores[1] +
         w.alpha[2] * scores[2];
}

namespace {

// Squared distance to the uniform triple, with the three terms summed in
// sorted order so permuted triples compare as exactly equal.
double centroid_distance_sq(const std::array<double, 3>& alpha) {
  std::array<double, 3> terms;
  for (std::size_t c = 0; c < 3; ++c) {
    const double d = alpha[c] - 1.0 / 3.0;
    terms[c] = d * d;
  }
  std::sort(terms.begin(), terms.end());
  return terms[0] + terms[1] + terms[2];
}

std::size_t tuning_hits(const std::vector<TuningPoint>& points,
                        const FusionWeights& w) {
  std::size_t hits = 0;
  for (const TuningPoint& p : points) {
    hits += static_cast<std::size_t>(predict_label(fuse(p.scores, w)) ==
                                     p.label);
  }
  return hits;
}

}  // namespace

FusionWeights grid_search_weights(const std::vector<TuningPoint>& points,
                                  double step) {
  if (!(step > 0.0 && step <= 1.0)) {
    throw std::invalid_argument("grid_search_weights: step must be in (0,1]");
  }
  const long n = std::lround(1.0 / step);
  if (std::fabs(static_cast<double>(n) * step - 1.0) > 1e-9) {
    throw std::invalid_argument("grid_search_weights: step must divide 1");
  }

  FusionWeights best;  // the uniform triple doubles as the empty-set answer
  if (points.empty()) return best;

  std::size_t best_hits = tuning_hits(points, best);
  double best_dist = centroid_distance_sq(best.alpha);
  // lattice triples in lexicographic order, so on full ties the first
  // (smallest) candidate sticks
  for (long i = 0; i <= n; ++i) {
    for (long j = 0; j + i <= n; ++j) {
      FusionWeights w;
      w.alpha = {static_cast<double>(i) / static_cast<double>(n),
                 static_cast<double>(j) / static_cast<double>(n),
                 static_cast<double>(n - i - j) / static_cast<double>(n)};
      const std::size_t hits = tuning_hits(points, w);
      const double dist = centroid_distance_sq(w.alpha);
      if (hits > best_hits || (hits == best_hits && dist < best_dist)) {
        best = w;
        best_hits = hits;
        best_dist = dist;
      }
    }
  }
  return best;
}

double subject_score(const std::vector<double>& sample_scores) {
  if (sample_scores.empty()) {
    throw std::invalid_argument("subject_score: no sample scores");
  }
  double sum = 0.0;
  for (double s : sample_scores) sum += s;
  return sum / static_cast<double>(sample_scores.size());
}

void ConfusionCounts::add(int true_label, int predicted) {
  if (true_label == 1) {
    predicted == 1 ? ++tp : ++fn;
  } else {
    predicted == 1 ? ++fp : ++tn;
  }
}

Metrics compute_metrics(const ConfusionCounts& c) {
  const std::size_t total = c.total();
  if (total == 0) {
    throw std::invalid_argument("compute_metrics: no decided units");
  }
  Metrics m;
  m.accuracy =
      static_cast<double>(c.tp + c.tn) / static_cast<double>(total);
  if (c.tp + c.fn > 0) {
    m.sensitivity =
        static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  }
  if (c.fp + c.tn > 0) {
    m.specificity =
        static_cast<double>(c.tn) / static_cast<double>(c.fp + c.tn);
  }
  return m;
}

}  // namespace mrcst
