#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "mrcst/envelope.hpp"
#include "mrcst/rng.hpp"

using namespace mrcst;

namespace {

// Independent per-feature oracle: every statistic recomputed from an
// explicit sort of that feature's column.
struct ColumnOracle {
  double mean, median, trimmed_retained, trimmed_literal, stddev, iqr, mad;
};

ColumnOracle oracle(std::vector<double> col) {
  ColumnOracle o{};
  const std::size_t g0 = col.size();
  double sum = 0.0;
  for (double v : col) sum += v;
  o.mean = sum / static_cast<double>(g0);

  double sq = 0.0, abs_dev = 0.0;
  for (double v : col) {
    sq += (v - o.mean) * (v - o.mean);
    abs_dev += std::fabs(v - o.mean);
  }
  o.stddev = g0 > 1 ? std::sqrt(sq / static_cast<double>(g0 - 1)) : 0.0;
  o.mad = abs_dev / static_cast<double>(g0);

  std::sort(col.begin(), col.end());
  o.median = g0 % 2 == 1 ? col[g0 / 2]
                         : (col[g0 / 2 - 1] + col[g0 / 2]) / 2.0;

  auto half_up = [](double x) {
    return static_cast<long>(std::floor(x + 0.5));
  };
  auto clamp = [&](long r) {
    return std::max(1l, std::min(r, static_cast<long>(g0)));
  };
  long lo = clamp(half_up(0.25 * static_cast<double>(g0)));
  long hi = clamp(static_cast<long>(g0) - half_up(0.25 * static_cast<double>(g0)));
  if (g0 <= 2 || lo > hi) {
    lo = 1;
    hi = static_cast<long>(g0);
  }
  double trim_sum = 0.0;
  for (long r = lo; r <= hi; ++r) trim_sum += col[static_cast<std::size_t>(r - 1)];
  o.trimmed_retained = trim_sum / static_cast<double>(hi - lo + 1);
  o.trimmed_literal = trim_sum / static_cast<double>(g0);

  const long q1 = clamp(half_up(0.25 * static_cast<double>(g0)));
  const long q3 = clamp(half_up(0.75 * static_cast<double>(g0)));
  o.iqr = col[static_cast<std::size_t>(q3 - 1)] - col[static_cast<std::size_t>(q1 - 1)];
  return o;
}

std::vector<FeatureRow> random_rows(Rng& rng, std::size_t g0, std::size_t n,
                                    double lo = -10.0, double hi = 10.0) {
  std::vector<FeatureRow> rows(g0, FeatureRow(n));
  for (auto& row : rows) {
    for (double& v : row) v = lo + (hi - lo) * rng.uniform();
  }
  return rows;
}

}  // namespace

TEST_CASE("round_index uses the half-up convention") {
  CHECK(round_index(6.5) == 7);
  CHECK(round_index(2.25) == 2);
  CHECK(round_index(0.75) == 1);
  CHECK(round_index(2.5) == 3);
  CHECK(round_index(0.0) == 0);
}

TEST_CASE("three-row example: central rows") {
  const std::vector<FeatureRow> rows = {{1, 2}, {3, 4}, {5, 6}};
  const EnvelopeStats s = envelope_stats(rows);
  CHECK(s.mean == FeatureRow{3, 4});
  CHECK(s.median == FeatureRow{3, 4});
}

TEST_CASE("three-row example: dispersion and trimmed rows") {
  const std::vector<FeatureRow> rows = {{1, 2}, {3, 4}, {5, 6}};
  const EnvelopeStats s = envelope_stats(rows, TrimMode::kRetained);
  CHECK(s.stddev[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(s.stddev[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(s.mad[0] == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(s.mad[1] == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  // rank 2 minus rank 1 of the sorted column
  CHECK(s.iqr[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(s.iqr[1] == doctest::Approx(2.0).epsilon(1e-12));
  // retained ranks 1..2, divided by the retained count 2
  CHECK(s.trimmed_mean[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(s.trimmed_mean[1] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("paper-literal trim divides the same sum by G0") {
  const std::vector<FeatureRow> rows = {{1, 2}, {3, 4}, {5, 6}};
  const EnvelopeStats s = envelope_stats(rows, TrimMode::kPaperLiteral);
  CHECK(s.trimmed_mean[0] == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(s.trimmed_mean[1] == doctest::Approx(6.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("single-row segment: central rows equal the row, dispersion is 0") {
  const std::vector<FeatureRow> rows = {{2.5, -1.0, 7.0}};
  const EnvelopeStats s = envelope_stats(rows);
  CHECK(s.mean == rows[0]);
  CHECK(s.median == rows[0]);
  CHECK(s.trimmed_mean == rows[0]);
  CHECK(s.stddev == FeatureRow{0, 0, 0});
  CHECK(s.iqr == FeatureRow{0, 0, 0});
  CHECK(s.mad == FeatureRow{0, 0, 0});
}

TEST_CASE("two-row segment trims nothing") {
  const std::vector<FeatureRow> rows = {{1.0}, {5.0}};
  const EnvelopeStats s = envelope_stats(rows);
  CHECK(s.trimmed_mean[0] == doctest::Approx(3.0));
}

TEST_CASE("empty segment is rejected") {
  CHECK_THROWS_AS(envelope_stats(std::vector<FeatureRow>{}), std::invalid_argument);
}

TEST_CASE("ragged rows are rejected") {
  const std::vector<FeatureRow> rows = {{1, 2}, {3}};
  CHECK_THROWS_AS(envelope_stats(rows), std::invalid_argument);
}

TEST_CASE("oracle equivalence on 100 random segments") {
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t g0 = 1 + rng.below(12);
    const std::size_t n = 1 + rng.below(8);
    const std::vector<FeatureRow> rows = random_rows(rng, g0, n);
    const EnvelopeStats retained = envelope_stats(rows, TrimMode::kRetained);
    const EnvelopeStats literal = envelope_stats(rows, TrimMode::kPaperLiteral);
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<double> col(g0);
      for (std::size_t i = 0; i < g0; ++i) col[i] = rows[i][j];
      const ColumnOracle o = oracle(col);
      CHECK(retained.mean[j] == doctest::Approx(o.mean).epsilon(1e-9));
      CHECK(retained.median[j] == doctest::Approx(o.median).epsilon(1e-9));
      CHECK(retained.trimmed_mean[j] ==
            doctest::Approx(o.trimmed_retained).epsilon(1e-9));
      CHECK(literal.trimmed_mean[j] ==
            doctest::Approx(o.trimmed_literal).epsilon(1e-9));
      CHECK(retained.stddev[j] == doctest::Approx(o.stddev).epsilon(1e-9));
      CHECK(retained.iqr[j] == doctest::Approx(o.iqr).epsilon(1e-9));
      CHECK(retained.mad[j] == doctest::Approx(o.mad).epsilon(1e-9));
    }
  }
}

TEST_CASE("row permutation leaves the envelope unchanged") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t g0 = 2 + rng.below(10);
    const std::size_t n = 1 + rng.below(6);
    std::vector<FeatureRow> rows = random_rows(rng, g0, n);
    const EnvelopeStats before = envelope_stats(rows);
    // Fisher-Yates with the same generator
    for (std::size_t i = rows.size(); i > 1; --i) {
      std::swap(rows[i - 1], rows[rng.below(i)]);
    }
    const EnvelopeStats after = envelope_stats(rows);
    for (std::size_t k = 0; k < 6; ++k) {
      const FeatureRow& a = *before.rows()[k];
      const FeatureRow& b = *after.rows()[k];
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(a[j] == doctest::Approx(b[j]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("adding a constant shifts central rows and fixes dispersion rows") {
  Rng rng(12);
  const std::vector<FeatureRow> rows = random_rows(rng, 7, 4);
  const double c = 3.25;
  std::vector<FeatureRow> shifted = rows;
  for (auto& row : shifted) {
    for (double& v : row) v += c;
  }
  const EnvelopeStats a = envelope_stats(rows);
  const EnvelopeStats b = envelope_stats(shifted);
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(b.mean[j] == doctest::Approx(a.mean[j] + c).epsilon(1e-9));
    CHECK(b.median[j] == doctest::Approx(a.median[j] + c).epsilon(1e-9));
    CHECK(b.trimmed_mean[j] == doctest::Approx(a.trimmed_mean[j] + c).epsilon(1e-9));
    CHECK(b.stddev[j] == doctest::Approx(a.stddev[j]).epsilon(1e-9));
    CHECK(b.iqr[j] == doctest::Approx(a.iqr[j]).epsilon(1e-9));
    CHECK(b.mad[j] == doctest::Approx(a.mad[j]).epsilon(1e-9));
  }
}

TEST_CASE("positive scaling multiplies all six rows") {
  Rng rng(13);
  const std::vector<FeatureRow> rows = random_rows(rng, 9, 3);
  const double s = 2.5;
  std::vector<FeatureRow> scaled = rows;
  for (auto& row : scaled) {
    for (double& v : row) v *= s;
  }
  const EnvelopeStats a = envelope_stats(rows);
  const EnvelopeStats b = envelope_stats(scaled);
  for (std::size_t k = 0; k < 6; ++k) {
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK((*b.rows()[k])[j] ==
            doctest::Approx((*a.rows()[k])[j] * s).epsilon(1e-9));
    }
  }
}

TEST_CASE("dispersion rows are never negative") {
  Rng rng(14);
  for (int trial = 0; trial < 30; ++trial) {
    const std::vector<FeatureRow> rows =
        random_rows(rng, 1 + rng.below(10), 1 + rng.below(5));
    const EnvelopeStats s = envelope_stats(rows);
    for (std::size_t j = 0; j < s.stddev.size(); ++j) {
      CHECK(s.stddev[j] >= 0.0);
      CHECK(s.iqr[j] >= 0.0);
      CHECK(s.mad[j] >= 0.0);
    }
  }
}

TEST_CASE("transform_type_a emits six labelled samples per subject") {
  std::vector<SubjectSegment> segments;
  segments.push_back({"s1", 1, {{1, 2}, {3, 4}, {5, 6}}});
  segments.push_back({"s2", 0, {{0, 0}, {1, 1}}});
  const TransformedDataset ds = transform_type_a(segments);
  REQUIRE(ds.samples.size() == 12);
  CHECK(ds.n_features == 2);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(ds.samples[i].subject_id == "s1");
    CHECK(ds.samples[i].label == 1);
  }
  for (std::size_t i = 6; i < 12; ++i) {
    CHECK(ds.samples[i].subject_id == "s2");
    CHECK(ds.samples[i].label == 0);
  }
  // first row is the mean row
  CHECK(ds.samples[0].features == FeatureRow{3, 4});
}

TEST_CASE("identical rows give dispersion-free output") {
  const FeatureRow r = {2.0, -3.0};
  std::vector<SubjectSegment> segments = {{"a", 1, {r, r, r, r}}};
  const TransformedDataset ds = transform_type_a(segments);
  CHECK(ds.samples[0].features == r);   // mean
  CHECK(ds.samples[1].features == r);   // median
  CHECK(ds.samples[2].features == r);   // trimmed mean
  CHECK(ds.samples[3].features == FeatureRow{0, 0});
  CHECK(ds.samples[4].features == FeatureRow{0, 0});
  CHECK(ds.samples[5].features == FeatureRow{0, 0});
}

TEST_CASE("transform_type_a rejects empty input and mixed widths") {
  CHECK_THROWS_AS(transform_type_a({}), std::invalid_argument);
  std::vector<SubjectSegment> segments = {{"a", 0, {{1, 2}}}, {"b", 1, {{1}}}};
  CHECK_THROWS_AS(transform_type_a(segments), std::invalid_argument);
}
