#include "mrcst/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mrcst {

long round_index(double x) {
  return static_cast<long>(std::floor(x + 0.5));
}

namespace {

long clamp_rank(long r, long g0) {
  return std::max(1l, std::min(r, g0));
}

}  // namespace

EnvelopeStats envelope_stats(const std::vector<FeatureRow>& rows, TrimMode mode) {
  if (rows.empty()) {
    throw std::invalid_argument("envelope_stats: empty segment");
  }
  const std::size_t g0 = rows.size();
  const std::size_t n = rows.front().size();
  for (const FeatureRow& r : rows) {
    if (r.size() != n) {
      throw std::invalid_argument("envelope_stats: ragged feature rows");
    }
  }

  EnvelopeStats out;
  out.mean.resize(n);
  out.median.resize(n);
  out.trimmed_mean.resize(n);
  out.stddev.resize(n);
  out.iqr.resize(n);
  out.mad.resize(n);

  const long g = static_cast<long>(g0);
  long trim_lo = clamp_rank(round_index(0.25 * static_cast<double>(g0)), g);
  long trim_hi = clamp_rank(g - round_index(0.25 * static_cast<double>(g0)), g);
  if (g0 <= 2 || trim_lo > trim_hi) {
    trim_lo = 1;
    trim_hi = g;
  }
  const long q1 = clamp_rank(round_index(0.25 * static_cast<double>(g0)), g);
  const long q3 = clamp_rank(round_index(0.75 * static_cast<double>(g0)), g);

  std::vector<double> col(g0);
  for (std::size_t j = 0; j < n; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < g0; ++i) {
      col[i] = rows[i][j];
      sum += col[i];
    }
    const double mean = sum / static_cast<double>(g0);
    out.mean[j] = mean;

    double sq = 0.0;
    double abs_dev = 0.0;
    for (std::size_t i = 0; i < g0; ++i) {
      const double d = col[i] - mean;
      sq += d * d;
      abs_dev += std::fabs(d);
    }
    out.stddev[j] =
        g0 > 1 ? std::sqrt(sq / static_cast<double>(g0 - 1)) : 0.0;
    out.mad[j] = abs_dev / static_cast<double>(g0);

    std::sort(col.begin(), col.end());
    if (g0 % 2 == 1) {
      out.median[j] = col[(g0 + 1) / 2 - 1];
    } else {
      out.median[j] = (col[g0 / 2 - 1] + col[g0 / 2]) / 2.0;
    }

    double trim_sum = 0.0;
    for (long r = trim_lo; r <= trim_hi; ++r) {
      trim_sum += col[static_cast<std::size_t>(r - 1)];
    }
    const double denom = mode == TrimMode::kRetained
                             ? static_cast<double>(trim_hi - trim_lo + 1)
                             : static_cast<double>(g0);
    out.trimmed_mean[j] = trim_sum / denom;

    out.iqr[j] = col[static_cast<std::size_t>(q3 - 1)] -
                 col[static_cast<std::size_t>(q1 - 1)];
  }
  return out;
}

EnvelopeStats envelope_stats(const SubjectSegment& segment, TrimMode mode) {
  return envelope_stats(segment.rows, mode);
}

TransformedDataset transform_type_a(const std::vector<SubjectSegment>& segments,
                                    TrimMode mode) {
  if (segments.empty()) {
    throw std::invalid_argument("transform_type_a: no segments");
  }
  TransformedDataset out;
  out.n_features = segments.front().feature_count();
  out.samples.reserve(segments.size() * 6);
  for (const SubjectSegment& seg : segments) {
    if (seg.feature_count() != out.n_features) {
      throw std::invalid_argument(
          "transform_type_a: feature count differs between subjects");
    }
    const EnvelopeStats stats = envelope_stats(seg.rows, mode);
    for (const FeatureRow* row : stats.rows()) {
      out.samples.push_back({seg.subject_id, seg.label, *row});
    }
  }
  return out;
}

}  // namespace mrcst
