#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace mrcst {

using FeatureRow = std::vector<double>;

// All samples recorded from one subject: a G0 x N block in file order.
// G0 may differ between subjects.
struct SubjectSegment {
  std::string subject_id;
  int label = 0;  // 1 = PD patient, 0 = healthy
  std::vector<FeatureRow> rows;

  std::size_t row_count() const { return rows.size(); }
  std::size_t feature_count() const { return rows.empty() ? 0 : rows.front().size(); }
};

struct DerivedSample {
  std::string subject_id;
  int label = 0;
  FeatureRow features;
};

// A reconstructed dataset (E_f, E_s or E_t). Samples are kept grouped by
// subject, in subject order.
struct TransformedDataset {
  std::size_t n_features = 0;
  std::vector<DerivedSample> samples;
};

// Groups consecutive samples with the same subject id back into segments.
std::vector<SubjectSegment> as_segments(const TransformedDataset& ds);

// The identity channel: every raw row becomes one derived sample.
TransformedDataset raw_dataset(const std::vector<SubjectSegment>& segments);

}  // namespace mrcst
