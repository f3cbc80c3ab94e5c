#pragma once

#include "mrcst/clustering.hpp"
#include "mrcst/types.hpp"

namespace mrcst {

// Cluster rows X (I x N) paired with that cluster's envelope rows T
// (M x N, M = 6 in the pipeline).
struct ConvolutionPair {
  std::vector<FeatureRow> x;
  std::vector<FeatureRow> t;
};

// Stacks I copies of t_row into an I x N matrix.
std::vector<FeatureRow> extend_matrix(const FeatureRow& t_row,
                                      std::size_t i_rows);

// Literal summation form: out[m][n] = sum_i t[m][n] * x[i][n].
std::vector<FeatureRow> convolve_loop(const ConvolutionPair& pair);

// Matrix form of the same operator: concatenates X's columns into the row
// vector x', builds each u_m as the block diagonal of the extended
// envelope row's columns, and returns (x' U)^T reshaped to M x N. Agrees
// with convolve_loop.
std::vector<FeatureRow> convolve_matrix(const ConvolutionPair& pair);

// Type C operator: per cluster of each subject, convolve the cluster rows
// with that cluster's envelope rows taken from es. clustered and es must
// come from the same transform_type_b call.
TransformedDataset transform_type_c(const std::vector<ClusteredSegment>& clustered,
                                    const TransformedDataset& es);

}  // namespace mrcst
