#include "mrcst/convolution.hpp"

#include <stdexcept>
#include <string>

namespace mrcst {

namespace {

void validate_pair(const ConvolutionPair& pair) {
  if (pair.x.empty()) {
    throw std::invalid_argument("convolve: X has no rows");
  }
  if (pair.t.empty()) {
    throw std::invalid_argument("convolve: T has no rows");
  }
  const std::size_t n = pair.x.front().size();
  for (const FeatureRow& r : pair.x) {
    if (r.size() != n) throw std::invalid_argument("convolve: ragged X");
  }
  for (const FeatureRow& r : pair.t) {
    if (r.size() != n) {
      throw std::invalid_argument("convolve: X and T feature counts differ");
    }
  }
}

}  // namespace

std::vector<FeatureRow> extend_matrix(const FeatureRow& t_row,
                                      std::size_t i_rows) {
  return std::vector<FeatureRow>(i_rows, t_row);
}

std::vector<FeatureRow> convolve_loop(const ConvolutionPair& pair) {
  validate_pair(pair);
  const std::size_t m_rows = pair.t.size();
  const std::size_t i_rows = pair.x.size();
  const std::size_t n = pair.x.front().size();
  std::vector<FeatureRow> out(m_rows, FeatureRow(n, 0.0));
  for (std::size_t m = 0; m < m_rows; ++m) {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < i_rows; ++i) {
        acc += pair.t[m][j] * pair.x[i][j];
      }
      out[m][j] = acc;
    }
  }
  return out;
}

std::vector<FeatureRow> convolve_matrix(const ConvolutionPair& pair) {
  validate_pair(pair);
  const std::size_t m_rows = pair.t.size();
  const std::size_t i_rows = pair.x.size();
  const std::size_t n = pair.x.front().size();

  // x': X's columns concatenated into one row vector of length I*N.
  std::vector<double> x_prime(i_rows * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < i_rows; ++i) {
      x_prime[j * i_rows + i] = pair.x[i][j];
    }
  }

  // U = [u_1 ... u_M]; u_m is the (I*N) x N block diagonal of the columns
  // of the extended matrix of T's m-th row.
  const std::size_t u_cols = n * m_rows;
  std::vector<std::vector<double>> u(i_rows * n,
                                     std::vector<double>(u_cols, 0.0));
  for (std::size_t m = 0; m < m_rows; ++m) {
    const std::vector<FeatureRow> ext = extend_matrix(pair.t[m], i_rows);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < i_rows; ++i) {
        u[j * i_rows + i][m * n + j] = ext[i][j];
      }
    }
  }

  // (x' U)^T reshaped to M x N.
  std::vector<FeatureRow> out(m_rows, FeatureRow(n, 0.0));
  for (std::size_t col = 0; col < u_cols; ++col) {
    double acc = 0.0;
    for (std::size_t r = 0; r < x_prime.size(); ++r) {
      acc += x_prime[r] * u[r][col];
    }
    out[col / n][col % n] = acc;
  }
  return out;
}

TransformedDataset transform_type_c(const std::vector<ClusteredSegment>& clustered,
                                    const TransformedDataset& es) {
  if (clustered.empty()) {
    throw std::invalid_argument("transform_type_c: no clustered segments");
  }
  std::size_t total_clusters = 0;
  for (const ClusteredSegment& cs : clustered) {
    total_clusters += cs.cluster_count();
  }
  if (es.samples.size() != total_clusters * 6) {
    throw std::invalid_argument(
        "transform_type_c: envelope dataset has " +
        std::to_string(es.samples.size()) + " rows, expected " +
        std::to_string(total_clusters * 6));
  }

  TransformedDataset out;
  out.n_features = es.n_features;
  out.samples.reserve(es.samples.size());
  std::size_t offset = 0;
  for (const ClusteredSegment& cs : clustered) {
    for (const std::vector<FeatureRow>& cluster : cs.clusters) {
      ConvolutionPair pair;
      pair.x = cluster;
      pair.t.reserve(6);
      for (std::size_t k = 0; k < 6; ++k) {
        const DerivedSample& sample = es.samples[offset + k];
        if (sample.subject_id != cs.subject_id) {
          throw std::invalid_argument(
              "transform_type_c: cluster/envelope subject mismatch at row " +
              std::to_string(offset + k));
        }
        pair.t.push_back(sample.features);
      }
      offset += 6;
      for (FeatureRow& row : convolve_loop(pair)) {
        out.samples.push_back({cs.subject_id, cs.label, std::move(row)});
      }
    }
  }
  return out;
}

}  // namespace mrcst
