#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "doctest.h"
#include "mrcst/dataset.hpp"
#include "synthetic.hpp"

using namespace mrcst;

namespace {

// Removes the named file when the scope ends.
struct TempPath {
  std::string path;
  explicit TempPath(std::string name) : path(std::move(name)) {}
  ~TempPath() { std::remove(path.c_str()); }
};

double pooled_feature_std(const SubjectSegment& seg) {
  double acc = 0.0;
  const std::size_t n = seg.feature_count();
  for (std::size_t j = 0; j < n; ++j) {
    double mean = 0.0;
    for (const FeatureRow& r : seg.rows) mean += r[j];
    mean /= static_cast<double>(seg.row_count());
    double ss = 0.0;
    for (const FeatureRow& r : seg.rows) {
      ss += (r[j] - mean) * (r[j] - mean);
    }
    acc += std::sqrt(ss / static_cast<double>(seg.row_count() - 1));
  }
  return acc / static_cast<double>(n);
}

double grand_mean(const SubjectSegment& seg) {
  double acc = 0.0;
  std::size_t count = 0;
  for (const FeatureRow& r : seg.rows) {
    for (double v : r) acc += v;
    count += r.size();
  }
  return acc / static_cast<double>(count);
}

bool same_segments(const std::vector<SubjectSegment>& a,
                   const std::vector<SubjectSegment>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].subject_id != b[i].subject_id || a[i].label != b[i].label ||
        a[i].rows != b[i].rows) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("sakar-like cohort has the canonical shape") {
  const auto segments = synthetic::sakar_like(11);
  REQUIRE(segments.size() == 40);
  std::size_t positives = 0;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    char expect[16];
    std::snprintf(expect, sizeof(expect), "S%02zu", s + 1);
    CHECK(segments[s].subject_id == expect);
    CHECK(segments[s].row_count() == 26);
    CHECK(segments[s].feature_count() == 26);
    CHECK(segments[s].label == (s < 20 ? 1 : 0));
    positives += segments[s].label == 1;
  }
  CHECK(positives == 20);
}

TEST_CASE("sakar-like scatter separates the classes, means do not") {
  const auto segments = synthetic::sakar_like(11);
  double min_patient_std = 1e300, max_healthy_std = 0.0;
  double mean_by_class[2] = {0.0, 0.0};
  for (const SubjectSegment& seg : segments) {
    const double s = pooled_feature_std(seg);
    if (seg.label == 1) {
      min_patient_std = std::min(min_patient_std, s);
    } else {
      max_healthy_std = std::max(max_healthy_std, s);
    }
    mean_by_class[seg.label] += grand_mean(seg) / 20.0;
  }
  // Spread bands are disjoint; mean levels share one band, so a
  // first-moment classifier has nothing to latch onto.
  CHECK(min_patient_std > 2.0 * max_healthy_std);
  CHECK(std::fabs(mean_by_class[1] - mean_by_class[0]) < 0.1);
}

TEST_CASE("maxlittle-like cohort has the canonical shape") {
  const auto segments = synthetic::maxlittle_like(11);
  REQUIRE(segments.size() == 31);
  std::size_t positives = 0;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    char expect[32];
    std::snprintf(expect, sizeof(expect), "phon_R01_S%02zu", s + 1);
    CHECK(segments[s].subject_id == expect);
    CHECK((segments[s].row_count() == 6 || segments[s].row_count() == 7));
    CHECK(segments[s].feature_count() == 22);
    CHECK(segments[s].label == (s < 23 ? 1 : 0));
    positives += segments[s].label == 1;
  }
  CHECK(positives == 23);
}

TEST_CASE("maxlittle-like cohort plants the designed exceptions") {
  const auto segments = synthetic::maxlittle_like(11);
  // Per-feature spread is wide for patients and for the last two healthy
  // subjects, narrow for the other healthy subjects.
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const double spread = pooled_feature_std(segments[s]);
    const bool wide = segments[s].label == 1 || s >= 29;
    if (wide) {
      CHECK(spread > 0.4);
    } else {
      CHECK(spread < 0.15);
    }
  }
  // Offset level is high for ordinary patients and the two borderline
  // healthy subjects, low for healthy and the two silent patients.
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const double level = grand_mean(segments[s]);
    const bool high = (segments[s].label == 1 && s < 21) || s >= 29;
    if (high) {
      CHECK(level > 0.8);
    } else {
      CHECK(level < 0.3);
    }
  }
}

TEST_CASE("cohorts are seed-deterministic and seed-sensitive") {
  CHECK(same_segments(synthetic::sakar_like(3), synthetic::sakar_like(3)));
  CHECK_FALSE(same_segments(synthetic::sakar_like(3), synthetic::sakar_like(4)));
  CHECK(same_segments(synthetic::maxlittle_like(3),
                      synthetic::maxlittle_like(3)));
  CHECK_FALSE(
      same_segments(synthetic::maxlittle_like(3), synthetic::maxlittle_like(4)));
}

TEST_CASE("sakar-like file round-trips through the loader") {
  const auto segments = synthetic::sakar_like(7);
  TempPath f("t_synth_sakar.csv");
  synthetic::write_sakar_file(f.path, segments);
  std::vector<std::string> warnings;
  const auto loaded = load_sakar(f.path, &warnings);
  CHECK(warnings.empty());
  CHECK(same_segments(segments, loaded));
}

TEST_CASE("maxlittle-like file round-trips through the loader") {
  const auto segments = synthetic::maxlittle_like(7);
  TempPath f("t_synth_ml.csv");
  synthetic::write_maxlittle_file(f.path, segments);
  std::vector<std::string> warnings;
  const auto loaded = load_maxlittle(f.path, &warnings);
  CHECK(warnings.empty());
  CHECK(same_segments(segments, loaded));
}
