#include <stdexcept>

#include "mrcst/classifiers.hpp"

namespace mrcst {

std::unique_ptr<TrainedModel> train(const ClassifierSpec& spec,
                                    const std::vector<FeatureRow>& x,
                                    const std::vector<int>& labels01,
                                    std::uint64_t seed) {
  if (x.empty() || x.size() != labels01.size()) {
    throw std::invalid_argument("train: empty set or label count mismatch");
  }
  const std::size_t n = x.front().size();
  bool any_pos = false, any_neg = false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].size() != n) {
      throw std::invalid_argument("train: ragged feature rows");
    }
    if (labels01[i] != 0 && labels01[i] != 1) {
      throw std::invalid_argument("train: labels must be 0 or 1");
    }
    (labels01[i] == 1 ? any_pos : any_neg) = true;
  }
  if (!any_pos || !any_neg) {
    throw std::invalid_argument("train: both classes must be present");
  }

  if (spec.kind == ClassifierKind::kSvm) {
    return std::make_unique<SvmModel>(spec.svm, x, labels01);
  }
  return std::make_unique<ForestModel>(spec.rf, x, labels01, seed);
}

int predict_label(double score) { return score > 0.0 ? 1 : 0; }

}  // namespace mrcst
