#include "mrcst/clustering.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "mrcst/rng.hpp"

namespace mrcst {

double distance(const FeatureRow& a, const FeatureRow& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("distance: vector lengths differ");
  }
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sq += d * d;
  }
  return std::sqrt(sq);
}

namespace {

double squared_distance(const FeatureRow& a, const FeatureRow& b) {
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sq += d * d;
  }
  return sq;
}

std::vector<FeatureRow> seed_centers(const std::vector<FeatureRow>& rows,
                                     std::size_t q, Rng& rng) {
  std::vector<FeatureRow> centers;
  centers.reserve(q);
  centers.push_back(rows[rng.below(rows.size())]);
  std::vector<double> d2(rows.size());
  while (centers.size() < q) {
    double total = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const FeatureRow& c : centers) {
        best = std::min(best, squared_distance(rows[i], c));
      }
      d2[i] = best;
      total += best;
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      const double r = rng.uniform() * total;
      double cum = 0.0;
      pick = rows.size() - 1;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        cum += d2[i];
        if (cum > r) {
          pick = i;
          break;
        }
      }
    } else {
      pick = rng.below(rows.size());
    }
    centers.push_back(rows[pick]);
  }
  return centers;
}

std::size_t nearest_center(const FeatureRow& row,
                           const std::vector<FeatureRow>& centers) {
  std::size_t best = 0;
  double best_d = squared_distance(row, centers[0]);
  for (std::size_t k = 1; k < centers.size(); ++k) {
    const double d = squared_distance(row, centers[k]);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

// Moves the row farthest from its assigned center into each empty
// cluster, taking only from clusters that keep at least one member.
void repair_empty_clusters(const std::vector<FeatureRow>& rows,
                           std::vector<FeatureRow>& centers,
                           std::vector<std::size_t>& assignments,
                           std::vector<std::size_t>& sizes) {
  for (std::size_t k = 0; k < centers.size(); ++k) {
    if (sizes[k] != 0) continue;
    std::size_t worst_row = rows.size();
    double worst_d = -1.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (sizes[assignments[i]] < 2) continue;
      const double d = squared_distance(rows[i], centers[assignments[i]]);
      if (d > worst_d) {
        worst_d = d;
        worst_row = i;
      }
    }
    sizes[assignments[worst_row]] -= 1;
    assignments[worst_row] = k;
    sizes[k] = 1;
    centers[k] = rows[worst_row];
  }
}

double sse_of(const std::vector<FeatureRow>& rows,
              const std::vector<FeatureRow>& centers,
              const std::vector<std::size_t>& assignments) {
  double sse = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    sse += squared_distance(rows[i], centers[assignments[i]]);
  }
  return sse;
}

ClusterModel kmeans_once(const std::vector<FeatureRow>& rows, std::size_t q,
                         std::uint64_t seed) {
  constexpr std::size_t kMaxIterations = 100;
  constexpr double kMovementTol = 1e-9;

  Rng rng(seed);
  ClusterModel model;
  model.centers = seed_centers(rows, q, rng);
  model.assignments.assign(rows.size(), 0);
  std::vector<std::size_t> sizes(q, 0);

  auto assign_pass = [&](std::vector<std::size_t>& assignments) {
    sizes.assign(q, 0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      assignments[i] = nearest_center(rows[i], model.centers);
      sizes[assignments[i]] += 1;
    }
    repair_empty_clusters(rows, model.centers, assignments, sizes);
  };

  assign_pass(model.assignments);
  model.sse_trace.push_back(sse_of(rows, model.centers, model.assignments));
  model.iterations = 1;

  std::vector<std::size_t> next(rows.size());
  for (std::size_t iter = 1; iter < kMaxIterations; ++iter) {
    double movement = 0.0;
    std::vector<FeatureRow> updated(q, FeatureRow(rows.front().size(), 0.0));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const FeatureRow& r = rows[i];
      FeatureRow& c = updated[model.assignments[i]];
      for (std::size_t j = 0; j < r.size(); ++j) c[j] += r[j];
    }
    for (std::size_t k = 0; k < q; ++k) {
      for (double& v : updated[k]) v /= static_cast<double>(sizes[k]);
      movement = std::max(movement, distance(updated[k], model.centers[k]));
    }
    model.centers = std::move(updated);

    assign_pass(next);
    model.sse_trace.push_back(sse_of(rows, model.centers, next));
    model.iterations = iter + 1;
    const bool stable = next == model.assignments;
    model.assignments = next;
    if (stable || movement < kMovementTol) break;
  }
  model.sse = model.sse_trace.back();
  return model;
}

}  // namespace

ClusterModel kmeans(const std::vector<FeatureRow>& rows, std::size_t q,
                    std::uint64_t seed, std::size_t restarts) {
  if (q == 0) {
    throw std::invalid_argument("kmeans: Q must be positive");
  }
  if (q > rows.size()) {
    throw std::invalid_argument("kmeans: Q=" + std::to_string(q) +
                                " exceeds " + std::to_string(rows.size()) +
                                " rows");
  }
  if (restarts == 0) restarts = 1;
  ClusterModel best;
  for (std::size_t r = 0; r < restarts; ++r) {
    ClusterModel candidate = kmeans_once(rows, q, mix_seed({seed, r}));
    if (r == 0 || candidate.sse < best.sse) best = std::move(candidate);
  }
  return best;
}

ClusteredSegment iterative_mean_clustering(const SubjectSegment& segment,
                                           std::size_t q, std::size_t depth,
                                           std::uint64_t seed,
                                           std::size_t restarts) {
  if (depth == 0) {
    throw std::invalid_argument("iterative_mean_clustering: depth must be >= 1");
  }
  std::vector<FeatureRow> current = segment.rows;
  ClusteredSegment out;
  out.subject_id = segment.subject_id;
  out.label = segment.label;
  for (std::size_t layer = 0; layer < depth; ++layer) {
    if (q > current.size()) {
      throw std::invalid_argument(
          "iterative_mean_clustering: layer " + std::to_string(layer + 1) +
          ": Q=" + std::to_string(q) + " exceeds " +
          std::to_string(current.size()) + " rows");
    }
    const ClusterModel model =
        kmeans(current, q, mix_seed({seed, layer}), restarts);
    if (layer + 1 == depth) {
      out.clusters.assign(q, {});
      for (std::size_t i = 0; i < current.size(); ++i) {
        out.clusters[model.assignments[i]].push_back(current[i]);
      }
    } else {
      current = model.centers;
    }
  }
  return out;
}

TypeBResult transform_type_b(const std::vector<SubjectSegment>& segments,
                             std::size_t q, std::size_t depth,
                             std::uint64_t seed, TrimMode mode,
                             std::size_t restarts) {
  if (segments.empty()) {
    throw std::invalid_argument("transform_type_b: no segments");
  }
  TypeBResult out;
  out.es.n_features = segments.front().feature_count();
  out.es.samples.reserve(segments.size() * 6 * q);
  out.clustered.reserve(segments.size());
  for (const SubjectSegment& seg : segments) {
    if (seg.feature_count() != out.es.n_features) {
      throw std::invalid_argument(
          "transform_type_b: feature count differs between subjects");
    }
    const std::uint64_t sub_seed =
        mix_seed({seed, hash_string(seg.subject_id)});
    ClusteredSegment cs =
        iterative_mean_clustering(seg, q, depth, sub_seed, restarts);
    for (const std::vector<FeatureRow>& cluster : cs.clusters) {
      const EnvelopeStats stats = envelope_stats(cluster, mode);
      for (const FeatureRow* row : stats.rows()) {
        out.es.samples.push_back({seg.subject_id, seg.label, *row});
      }
    }
    out.clustered.push_back(std::move(cs));
  }
  return out;
}

}  // namespace mrcst
