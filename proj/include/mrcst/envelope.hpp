#pragma once

#include <array>

#include "mrcst/types.hpp"

namespace mrcst {

// Denominator used by the 25% trimmed mean: the count of retained ranks
// (a true trimmed mean) or the full row count as printed in the source
// formula. The choice is echoed into every report.
enum class TrimMode { kRetained, kPaperLiteral };

// The six envelope rows condensing one segment: mean, median, trimmed
// mean (25%), standard deviation, interquartile distance and mean
// absolute deviation, each of length N. Order statistics are taken per
// feature on that feature's sorted values.
struct EnvelopeStats {
  FeatureRow mean;
  FeatureRow median;
  FeatureRow trimmed_mean;
  FeatureRow stddev;
  FeatureRow iqr;
  FeatureRow mad;

  // Fixed emission order of the six rows.
  std::array<const FeatureRow*, 6> rows() const {
    return {&mean, &median, &trimmed_mean, &stddev, &iqr, &mad};
  }
};

// Round-half-up. Callers clamp the result to [1, G0] when it is used as a
// 1-based sorted-rank index.
long round_index(double x);

EnvelopeStats envelope_stats(const std::vector<FeatureRow>& rows,
                             TrimMode mode = TrimMode::kRetained);
EnvelopeStats envelope_stats(const SubjectSegment& segment,
                             TrimMode mode = TrimMode::kRetained);

// Type A operator: six envelope rows per subject, labels inherited.
TransformedDataset transform_type_a(const std::vector<SubjectSegment>& segments,
                                    TrimMode mode = TrimMode::kRetained);

}  // namespace mrcst
