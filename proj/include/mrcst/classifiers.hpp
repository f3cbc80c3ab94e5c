#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>

#include "mrcst/types.hpp"

namespace mrcst {

enum class ClassifierKind { kSvm, kRf };

struct SvmParams {
  double c = 10.0;        // box penalty
  double gamma = 0.005;   // kernel scale
  int degree = 3;         // polynomial degree
  double coef0 = 1.0;     // kernel offset
  double tolerance = 1e-3;  // KKT stopping tolerance
};

struct RfParams {
  std::size_t n_trees = 50;
  std::size_t max_depth = 0;  // 0 = unlimited
  bool bootstrap = true;      // off trains every tree on the full set
};

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::kSvm;
  SvmParams svm;
  RfParams rf;
};

// A trained model maps an N-vector to a score in [-1, 1]; the hard label
// is 1 iff the score is > 0, with ties going to 0.
class TrainedModel {
 public:
  virtual ~TrainedModel() = default;
  virtual double score(const FeatureRow& x) const = 0;
  // One parameter per line, for debugging; not a compatibility surface.
  virtual void dump(std::ostream& out) const = 0;
  std::size_t feature_count() const { return n_features_; }

 protected:
  explicit TrainedModel(std::size_t n_features) : n_features_(n_features) {}
  std::size_t n_features_;
};

// Polynomial-kernel SVM trained by sequential minimal optimization with
// maximal-violating-pair working set selection. The score is tanh of the
// decision function.
class SvmModel : public TrainedModel {
 public:
  SvmModel(const SvmParams& params, std::vector<FeatureRow> x,
           const std::vector<int>& labels01);

  double score(const FeatureRow& x) const override;
  void dump(std::ostream& out) const override;

  // Raw decision value sum(alpha_i y_i K(x_i, x)) + b.
  double decision(const FeatureRow& x) const;

  // Dual state, exposed so feasibility (0 <= alpha <= C, sum alpha*y = 0)
  // can be audited after training.
  const std::vector<double>& alpha() const { return alpha_; }
  const std::vector<int>& labels_pm() const { return y_; }
  double bias() const { return bias_; }
  const SvmParams& params() const { return params_; }
  std::size_t iterations() const { return iterations_; }

 private:
  double kernel(const FeatureRow& a, const FeatureRow& b) const;

  SvmParams params_;
  std::vector<FeatureRow> x_;
  std::vector<int> y_;  // labels in {-1, +1}
  std::vector<double> alpha_;
  double bias_ = 0.0;
  std::size_t iterations_ = 0;
};

// Random forest of Gini-split decision trees; the score is
// 2 * (fraction of trees voting positive) - 1.
class ForestModel : public TrainedModel {
 public:
  ForestModel(const RfParams& params, const std::vector<FeatureRow>& x,
              const std::vector<int>& labels01, std::uint64_t seed);

  double score(const FeatureRow& x) const override;
  void dump(std::ostream& out) const override;

  std::size_t tree_count() const { return trees_.size(); }

 private:
  struct Node {
    int feature = -1;      // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int label = 0;         // leaf vote
  };
  using Tree = std::vector<Node>;

  int build_node(Tree& tree, const std::vector<FeatureRow>& x,
                 const std::vector<int>& y, std::vector<std::size_t>& rows,
                 std::size_t depth, class Rng& rng);
  int tree_vote(const Tree& tree, const FeatureRow& x) const;

  RfParams params_;
  std::vector<Tree> trees_;
};

// Validates the training set (uniform width, labels in {0,1}, both
// classes present) and trains the configured model. The seed only
// affects the random forest.
std::unique_ptr<TrainedModel> train(const ClassifierSpec& spec,
                                    const std::vector<FeatureRow>& x,
                                    const std::vector<int>& labels01,
                                    std::uint64_t seed);

// 1 iff score > 0; a tied score of exactly 0 predicts healthy.
int predict_label(double score);

}  // namespace mrcst
