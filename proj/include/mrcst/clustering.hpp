#pragma once

#include <cstdint>

#include "mrcst/envelope.hpp"
#include "mrcst/types.hpp"

namespace mrcst {

// Result of one k-means run. Every row is assigned to exactly one
// cluster and no cluster is empty.
struct ClusterModel {
  std::vector<FeatureRow> centers;
  std::vector<std::size_t> assignments;
  double sse = 0.0;
  std::size_t iterations = 0;
  // SSE after each assignment pass, against the centers used for that
  // pass. Non-increasing by construction.
  std::vector<double> sse_trace;
};

// One subject's rows partitioned into Q clusters at the final layer.
struct ClusteredSegment {
  std::string subject_id;
  int label = 0;
  std::vector<std::vector<FeatureRow>> clusters;

  std::size_t cluster_count() const { return clusters.size(); }
};

// Euclidean distance. Lengths must match.
double distance(const FeatureRow& a, const FeatureRow& b);

// Lloyd iterations with k-means++-style seeding driven by the supplied
// seed. Stops on stable assignments, center movement below 1e-9, or 100
// iterations. Empty clusters are repaired by seizing the row farthest
// from its assigned center. With restarts > 1 the run with the lowest
// SSE wins, first one on ties.
ClusterModel kmeans(const std::vector<FeatureRow>& rows, std::size_t q,
                    std::uint64_t seed, std::size_t restarts = 1);

// depth = 1 partitions the raw rows. Each additional layer replaces the
// current rows by that layer's Q centers and re-clusters; the final
// layer's clusters are returned with their member rows.
ClusteredSegment iterative_mean_clustering(const SubjectSegment& segment,
                                           std::size_t q, std::size_t depth,
                                           std::uint64_t seed,
                                           std::size_t restarts = 1);

struct TypeBResult {
  TransformedDataset es;
  // The clustered dataset Y, reused by the type C operator so both see
  // identical cluster assignments.
  std::vector<ClusteredSegment> clustered;
};

// Type B operator: cluster each segment, then apply the envelope to each
// cluster. 6*Q derived samples per subject. Each segment's clustering is
// seeded from (seed, subject id), so per-segment jobs are order-free.
TypeBResult transform_type_b(const std::vector<SubjectSegment>& segments,
                             std::size_t q, std::size_t depth,
                             std::uint64_t seed,
                             TrimMode mode = TrimMode::kRetained,
                             std::size_t restarts = 1);

}  // namespace mrcst
