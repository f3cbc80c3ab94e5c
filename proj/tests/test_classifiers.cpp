#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "mrcst/classifiers.hpp"
#include "mrcst/rng.hpp"

using namespace mrcst;

namespace {

// Two square blobs centred at (+2,+2) and (-2,-2) with half-width 1, so
// the classes are separated by a margin of 2.
void make_blobs(Rng& rng, std::size_t per_class, std::vector<FeatureRow>& x,
                std::vector<int>& y) {
  x.clear();
  y.clear();
  for (std::size_t i = 0; i < per_class; ++i) {
    x.push_back({2.0 + (rng.uniform() - 0.5) * 2.0,
                 2.0 + (rng.uniform() - 0.5) * 2.0});
    y.push_back(1);
    x.push_back({-2.0 + (rng.uniform() - 0.5) * 2.0,
                 -2.0 + (rng.uniform() - 0.5) * 2.0});
    y.push_back(0);
  }
}

double training_accuracy(const TrainedModel& model,
                         const std::vector<FeatureRow>& x,
                         const std::vector<int>& y) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    hits += static_cast<std::size_t>(predict_label(model.score(x[i])) == y[i]);
  }
  return static_cast<double>(hits) / static_cast<double>(x.size());
}

}  // namespace

TEST_CASE("predict_label thresholds at zero with ties negative") {
  CHECK(predict_label(0.1) == 1);
  CHECK(predict_label(-0.1) == 0);
  CHECK(predict_label(0.0) == 0);
}

TEST_CASE("both classifiers separate margin-2 blobs") {
  Rng rng(501);
  std::vector<FeatureRow> x;
  std::vector<int> y;
  make_blobs(rng, 100, x, y);

  ClassifierSpec spec;
  spec.kind = ClassifierKind::kSvm;
  const auto svm = train(spec, x, y, 1);
  CHECK(training_accuracy(*svm, x, y) >= 0.95);

  spec.kind = ClassifierKind::kRf;
  const auto rf = train(spec, x, y, 1);
  CHECK(training_accuracy(*rf, x, y) >= 0.95);
}

TEST_CASE("training rejects bad inputs") {
  ClassifierSpec spec;
  std::vector<FeatureRow> x = {{1, 2}, {3, 4}};
  CHECK_THROWS_AS(train(spec, {}, {}, 0), std::invalid_argument);
  CHECK_THROWS_AS(train(spec, x, {1}, 0), std::invalid_argument);
  CHECK_THROWS_AS(train(spec, x, {1, 1}, 0), std::invalid_argument);  // one class
  CHECK_THROWS_AS(train(spec, x, {1, 2}, 0), std::invalid_argument);  // bad label
  CHECK_THROWS_AS(train(spec, {{1, 2}, {3}}, {1, 0}, 0), std::invalid_argument);
}

TEST_CASE("scoring rejects mismatched feature counts") {
  Rng rng(502);
  std::vector<FeatureRow> x;
  std::vector<int> y;
  make_blobs(rng, 10, x, y);
  for (ClassifierKind kind : {ClassifierKind::kSvm, ClassifierKind::kRf}) {
    ClassifierSpec spec;
    spec.kind = kind;
    const auto model = train(spec, x, y, 3);
    CHECK_THROWS_AS(model->score({1.0, 2.0, 3.0}), std::invalid_argument);
  }
}

TEST_CASE("scores stay inside [-1,1] on arbitrary inputs") {
  Rng rng(503);
  std::vector<FeatureRow> x;
  std::vector<int> y;
  make_blobs(rng, 30, x, y);
  for (ClassifierKind kind : {ClassifierKind::kSvm, ClassifierKind::kRf}) {
    ClassifierSpec spec;
    spec.kind = kind;
    const auto model = train(spec, x, y, 7);
    for (int trial = 0; trial < 100; ++trial) {
      const FeatureRow probe = {(rng.uniform() - 0.5) * 2000.0,
                                (rng.uniform() - 0.5) * 2000.0};
      const double s = model->score(probe);
      CHECK(std::isfinite(s));
      CHECK(s >= -1.0);
      CHECK(s <= 1.0);
    }
  }
}

TEST_CASE("svm dual constraints hold at convergence") {
  Rng rng(504);
  std::vector<FeatureRow> x;
  std::vector<int> y;
  make_blobs(rng, 50, x, y);
  const SvmParams params;
  const SvmModel svm(params, x, y);
  double alpha_y = 0.0;
  for (std::size_t i = 0; i < svm.alpha().size(); ++i) {
    CHECK(svm.alpha()[i] >= 0.0);
    CHECK(svm.alpha()[i] <= params.c);
    alpha_y += svm.alpha()[i] * static_cast<double>(svm.labels_pm()[i]);
  }
  CHECK(std::fabs(alpha_y) < 1e-6);
  CHECK(svm.iterations() > 0);
}

TEST_CASE("svm score sign matches the raw decision sign") {
  Rng rng(505);
  std::vector<FeatureRow> x;
  std::vector<int> y;
  make_blobs(rng, 40, x, y);
  const SvmModel svm(SvmParams{}, x, y);
  for (int trial = 0; trial < 100; ++trial) {
    const FeatureRow probe = {(rng.uniform() - 0.5) * 8.0,
                              (rng.uniform() - 0.5) * 8.0};
    const double d = svm.decision(probe);
    const double s = svm.score(probe);
    CHECK(s == doctest::Approx(std::tanh(d)).epsilon(1e-12));
    CHECK(((s > 0.0) == (d > 0.0)));
  }
}

TEST_CASE("models are deterministic given seed and inputs") {
  Rng rng(506);
  std::vector<FeatureRow> x;
  std::vector<int> y;
  make_blobs(rng, 25, x, y);
  std::vector<FeatureRow> probes;
  for (int i = 0; i < 20; ++i) {
    probes.push_back({(rng.uniform() - 0.5) * 6.0, (rng.uniform() - 0.5) * 6.0});
  }
  for (ClassifierKind kind : {ClassifierKind::kSvm, ClassifierKind::kRf}) {
    ClassifierSpec spec;
    spec.kind = kind;
    const auto a = train(spec, x, y, 99);
    const auto b = train(spec, x, y, 99);
    for (const FeatureRow& p : probes) {
      CHECK(a->score(p) == b->score(p));  // bitwise
    }
  }
}

TEST_CASE("deep pd-blob points get unanimous forest votes") {
  Rng rng(507);
  std::vector<FeatureRow> x;
  std::vector<int> y;
  make_blobs(rng, 50, x, y);
  ClassifierSpec spec;
  spec.kind = ClassifierKind::kRf;
  const auto rf = train(spec, x, y, 5);
  CHECK(rf->score({2.0, 2.0}) == 1.0);    // every tree votes PD
  CHECK(rf->score({-2.0, -2.0}) == -1.0); // every tree votes healthy
}

TEST_CASE("single full-data tree memorizes duplicate-free data") {
  Rng rng(508);
  std::vector<FeatureRow> x;
  std::vector<int> y;
  // random labels over distinct points: only achievable by memorization
  for (int i = 0; i < 60; ++i) {
    x.push_back({rng.uniform() * 10.0, rng.uniform() * 10.0,
                 rng.uniform() * 10.0});
    y.push_back(static_cast<int>(rng.below(2)));
  }
  if (std::count(y.begin(), y.end(), 1) == 0) y[0] = 1;
  if (std::count(y.begin(), y.end(), 0) == 0) y[0] = 0;
  ClassifierSpec spec;
  spec.kind = ClassifierKind::kRf;
  spec.rf.n_trees = 1;
  spec.rf.bootstrap = false;
  const auto rf = train(spec, x, y, 21);
  CHECK(training_accuracy(*rf, x, y) == 1.0);
}

TEST_CASE("model dumps name their kind") {
  Rng rng(509);
  std::vector<FeatureRow> x;
  std::vector<int> y;
  make_blobs(rng, 10, x, y);
  for (ClassifierKind kind : {ClassifierKind::kSvm, ClassifierKind::kRf}) {
    ClassifierSpec spec;
    spec.kind = kind;
    const auto model = train(spec, x, y, 2);
    std::ostringstream out;
    model->dump(out);
    CHECK(out.str().find("kind") == 0);
    CHECK(out.str().find("n_features 2") != std::string::npos);
  }
}
