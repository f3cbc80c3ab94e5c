#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mrcst/classifiers.hpp"
#include "mrcst/clustering.hpp"
#include "mrcst/dataset.hpp"
#include "mrcst/fusion.hpp"

namespace mrcst {

// Which reconstruction feeds the classifier: the raw samples, one of the
// three transformed datasets, or their weighted fusion.
enum class Method { kNone, kEf, kEs, kEt, kMrcst };

// Whether fusion mixes soft scores or hard +-1 labels.
enum class ScoreMode { kScore, kLabel };

struct RunConfig {
  Method method = Method::kMrcst;
  ClassifierSpec classifier;
  std::size_t q = 3;
  std::size_t depth = 1;
  TrimMode trim = TrimMode::kRetained;
  NormMethod norm = NormMethod::kMinMax;
  ScoreMode score_mode = ScoreMode::kScore;
  double grid_step = 0.1;
  std::size_t runs = 10;
  std::uint64_t seed = 2025;
  std::size_t jobs = 1;
  std::size_t restarts = 1;
  // When set, skips the inner grid search and fuses with these weights.
  std::optional<FusionWeights> force_weights;
};

// Throws std::invalid_argument naming the offending field.
void validate(const RunConfig& config);

// One held-out subject in one run.
struct FoldRecord {
  std::size_t run = 0;
  std::string subject_id;
  int true_label = 0;
  // Subject-level score per channel; single-channel methods use slot 0.
  std::array<double, 3> channel_scores = {0.0, 0.0, 0.0};
  FusionWeights weights;
  double fused_score = 0.0;
  int predicted = 0;
};

struct RunMetrics {
  double accuracy = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;
};

struct EvaluationReport {
  RunConfig config;
  std::vector<FoldRecord> folds;  // run-major, subjects in input order
  std::vector<RunMetrics> per_run;
  double accuracy_mean = 0.0;
  double accuracy_std = 0.0;
  double sensitivity_mean = 0.0;
  double sensitivity_std = 0.0;
  double specificity_mean = 0.0;
  double specificity_std = 0.0;
};

// Repeated-seed leave-one-subject-out evaluation. Per run, the
// per-subject transforms are computed once (they depend only on that
// subject's rows and the run seed); per fold, normalizers, classifiers
// and fusion weights are fitted on the training subjects only. Results
// are bit-identical for any jobs value.
EvaluationReport run_loso(const std::vector<SubjectSegment>& segments,
                          const RunConfig& config);

// Everything a fold fits on its training side; captured so tests can
// audit that the held-out subject cannot influence any of it.
struct FoldArtifacts {
  std::vector<Normalizer> normalizers;    // one per channel
  std::vector<std::string> model_dumps;   // one per channel
  FusionWeights weights;
};

FoldArtifacts fold_artifacts(const std::vector<SubjectSegment>& segments,
                             const RunConfig& config, std::size_t run_index,
                             std::size_t test_index);

// Stable wire names used by configs, reports and the CLI.
std::string method_name(Method m);
std::optional<Method> method_from_name(const std::string& name);
std::string classifier_name(ClassifierKind k);
std::optional<ClassifierKind> classifier_from_name(const std::string& name);

}  // namespace mrcst
