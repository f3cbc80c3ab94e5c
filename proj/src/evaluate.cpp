#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mrcst/convolution.hpp"
#include "mrcst/evaluate.hpp"
#include "mrcst/rng.hpp"

namespace mrcst {

std::string method_name(Method m) {
  switch (m) {
    case Method::kNone: return "none";
    case Method::kEf: return "ef";
    case Method::kEs: return "es";
    case Method::kEt: return "et";
    case Method::kMrcst: return "mrcst";
  }
  return "mrcst";
}

std::optional<Method> method_from_name(const std::string& name) {
  if (name == "none") return Method::kNone;
  if (name == "ef") return Method::kEf;
  if (name == "es") return Method::kEs;
  if (name == "et") return Method::kEt;
  if (name == "mrcst") return Method::kMrcst;
  return std::nullopt;
}

std::string classifier_name(ClassifierKind k) {
  return k == ClassifierKind::kSvm ? "svm" : "rf";
}

std::optional<ClassifierKind> classifier_from_name(const std::string& name) {
  if (name == "svm") return ClassifierKind::kSvm;
  if (name == "rf") return ClassifierKind::kRf;
  return std::nullopt;
}

void validate(const RunConfig& config) {
  if (config.q < 1) throw std::invalid_argument("q: must be >= 1");
  if (config.depth < 1) throw std::invalid_argument("depth: must be >= 1");
  if (config.runs < 1) throw std::invalid_argument("runs: must be >= 1");
  if (config.jobs < 1) throw std::invalid_argument("jobs: must be >= 1");
  if (config.restarts < 1) throw std::invalid_argument("restarts: must be >= 1");
  if (!(config.grid_step > 0.0 && config.grid_step <= 1.0)) {
    throw std::invalid_argument("grid_step: must be in (0,1]");
  }
  const long n = std::lround(1.0 / config.grid_step);
  if (std::fabs(static_cast<double>(n) * config.grid_step - 1.0) > 1e-9) {
    throw std::invalid_argument("grid_step: must divide 1");
  }
  if (!(config.classifier.svm.c > 0.0)) {
    throw std::invalid_argument("classifier.svm.c: must be > 0");
  }
  if (!(config.classifier.svm.gamma > 0.0)) {
    throw std::invalid_argument("classifier.svm.gamma: must be > 0");
  }
  if (config.classifier.svm.degree < 1) {
    throw std::invalid_argument("classifier.svm.degree: must be >= 1");
  }
  if (!(config.classifier.svm.tolerance > 0.0)) {
    throw std::invalid_argument("classifier.svm.tolerance: must be > 0");
  }
  if (config.classifier.rf.n_trees < 1) {
    throw std::invalid_argument("classifier.rf.n_trees: must be >= 1");
  }
  if (config.force_weights) {
    for (double a : config.force_weights->alpha) {
      if (!(a >= 0.0 && a <= 1.0)) {
        throw std::invalid_argument("force_weights: entries must be in [0,1]");
      }
    }
    if (std::fabs(config.force_weights->sum() - 1.0) > 1e-12) {
      throw std::invalid_argument("force_weights: must sum to 1");
    }
  }
}

namespace {

void run_tasks(std::size_t count, std::size_t jobs,
               const std::function<void(std::size_t)>& task) {
  jobs = std::min(jobs, count);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_lock;
  std::exception_ptr error;
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (std::size_t t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) break;
        try {
          task(i);
        } catch (...) {
          std::lock_guard<std::mutex> guard(error_lock);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& worker : pool) worker.join();
  if (error) std::rethrow_exception(error);
}

std::vector<TransformedDataset> build_channels(
    const std::vector<SubjectSegment>& segments, const RunConfig& config,
    std::uint64_t run_seed) {
  std::vector<TransformedDataset> channels;
  switch (config.method) {
    case Method::kNone:
      channels.push_back(raw_dataset(segments));
      break;
    case Method::kEf:
      channels.push_back(transform_type_a(segments, config.trim));
      break;
    case Method::kEs: {
      TypeBResult tb = transform_type_b(segments, config.q, config.depth,
                                        run_seed, config.trim, config.restarts);
      channels.push_back(std::move(tb.es));
      break;
    }
    case Method::kEt: {
      const TypeBResult tb = transform_type_b(
          segments, config.q, config.depth, run_seed, config.trim,
          config.restarts);
      channels.push_back(transform_type_c(tb.clustered, tb.es));
      break;
    }
    case Method::kMrcst: {
      TypeBResult tb = transform_type_b(segments, config.q, config.depth,
                                        run_seed, config.trim, config.restarts);
      TransformedDataset et = transform_type_c(tb.clustered, tb.es);
      channels.push_back(transform_type_a(segments, config.trim));
      channels.push_back(std::move(tb.es));
      channels.push_back(std::move(et));
      break;
    }
  }
  return channels;
}

using SampleRange = std::pair<std::size_t, std::size_t>;

// Half-open sample range of each segment inside a channel dataset, which
// keeps samples grouped in segment order.
std::vector<SampleRange> subject_ranges(const TransformedDataset& ds,
                                        const std::vector<SubjectSegment>& segments) {
  std::vector<SampleRange> ranges(segments.size());
  std::size_t at = 0;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const std::size_t begin = at;
    while (at < ds.samples.size() &&
           ds.samples[at].subject_id == segments[s].subject_id) {
      ++at;
    }
    if (begin == at) {
      throw std::logic_error("channel dataset is missing subject " +
                             segments[s].subject_id);
    }
    ranges[s] = {begin, at};
  }
  if (at != ds.samples.size()) {
    throw std::logic_error("channel dataset has unattributed samples");
  }
  return ranges;
}

TransformedDataset gather(const TransformedDataset& ds,
                          const std::vector<SampleRange>& ranges,
                          const std::vector<std::size_t>& segment_indices) {
  TransformedDataset out;
  out.n_features = ds.n_features;
  std::size_t total = 0;
  for (std::size_t s : segment_indices) total += ranges[s].second - ranges[s].first;
  out.samples.reserve(total);
  for (std::size_t s : segment_indices) {
    for (std::size_t i = ranges[s].first; i < ranges[s].second; ++i) {
      out.samples.push_back(ds.samples[i]);
    }
  }
  return out;
}

void to_xy(const TransformedDataset& ds, std::vector<FeatureRow>& x,
           std::vector<int>& y) {
  x.clear();
  y.clear();
  x.reserve(ds.samples.size());
  y.reserve(ds.samples.size());
  for (const DerivedSample& s : ds.samples) {
    x.push_back(s.features);
    y.push_back(s.label);
  }
}

double channel_subject_score(const TrainedModel& model,
                             const TransformedDataset& samples,
                             ScoreMode mode) {
  std::vector<double> scores;
  scores.reserve(samples.samples.size());
  for (const DerivedSample& s : samples.samples) {
    double value = model.score(s.features);
    if (mode == ScoreMode::kLabel) {
      value = predict_label(value) == 1 ? 1.0 : -1.0;
    }
    scores.push_back(value);
  }
  return subject_score(scores);
}

struct FoldContext {
  const std::vector<SubjectSegment>& segments;
  const RunConfig& config;
  const std::vector<TransformedDataset>& channels;
  const std::vector<std::vector<SampleRange>>& ranges;
  std::uint64_t run_seed;
};

// Trains one channel on the given training segments and returns the
// held-out subject's channel score (and, optionally, the fitted
// artifacts for leakage audits).
double score_channel(const FoldContext& ctx, std::size_t channel,
                     const std::vector<std::size_t>& train_segments,
                     std::size_t test_segment, std::uint64_t model_seed,
                     Normalizer* norm_out, std::string* dump_out) {
  const TransformedDataset train_raw =
      gather(ctx.channels[channel], ctx.ranges[channel], train_segments);
  const Normalizer norm = fit_normalizer(train_raw, ctx.config.norm);
  const TransformedDataset train_norm = apply_normalizer(norm, train_raw);
  std::vector<FeatureRow> x;
  std::vector<int> y;
  to_xy(train_norm, x, y);
  const std::unique_ptr<TrainedModel> model =
      train(ctx.config.classifier, x, y, model_seed);

  const TransformedDataset test_norm = apply_normalizer(
      norm, gather(ctx.channels[channel], ctx.ranges[channel], {test_segment}));
  const double score =
      channel_subject_score(*model, test_norm, ctx.config.score_mode);

  if (norm_out != nullptr) *norm_out = norm;
  if (dump_out != nullptr) {
    std::ostringstream out;
    model->dump(out);
    *dump_out = out.str();
  }
  return score;
}

FusionWeights tune_weights(const FoldContext& ctx, const LosoFold& fold) {
  std::vector<TuningPoint> points;
  points.reserve(fold.train.size());
  for (std::size_t held = 0; held < fold.train.size(); ++held) {
    const std::size_t inner_test = fold.train[held];
    std::vector<std::size_t> inner_train;
    inner_train.reserve(fold.train.size() - 1);
    for (std::size_t s : fold.train) {
      if (s != inner_test) inner_train.push_back(s);
    }
    TuningPoint point;
    point.label = ctx.segments[inner_test].label;
    for (std::size_t ch = 0; ch < ctx.channels.size(); ++ch) {
      point.scores[ch] = score_channel(
          ctx, ch, inner_train, inner_test,
          mix_seed({ctx.run_seed, fold.test, inner_test, ch}), nullptr,
          nullptr);
    }
    points.push_back(point);
  }
  return grid_search_weights(points, ctx.config.grid_step);
}

struct FoldOutput {
  FoldRecord record;
  FoldArtifacts artifacts;
};

FoldOutput run_fold(const FoldContext& ctx, const LosoFold& fold,
                    bool capture) {
  FoldOutput out;
  FoldRecord& record = out.record;
  record.subject_id = ctx.segments[fold.test].subject_id;
  record.true_label = ctx.segments[fold.test].label;

  if (ctx.config.method == Method::kMrcst) {
    if (ctx.config.force_weights) {
      record.weights = *ctx.config.force_weights;
    } else {
      record.weights = tune_weights(ctx, fold);
    }
  } else {
    record.weights.alpha = {1.0, 0.0, 0.0};
  }

  if (capture) {
    out.artifacts.normalizers.resize(ctx.channels.size());
    out.artifacts.model_dumps.resize(ctx.channels.size());
    out.artifacts.weights = record.weights;
  }
  for (std::size_t ch = 0; ch < ctx.channels.size(); ++ch) {
    record.channel_scores[ch] = score_channel(
        ctx, ch, fold.train, fold.test,
        mix_seed({ctx.run_seed, fold.test, ch}),
        capture ? &out.artifacts.normalizers[ch] : nullptr,
        capture ? &out.artifacts.model_dumps[ch] : nullptr);
  }

  record.fused_score = fuse(record.channel_scores, record.weights);
  record.predicted = predict_label(record.fused_score);
  return out;
}

void check_segments(const std::vector<SubjectSegment>& segments) {
  if (segments.size() < 2) {
    throw std::invalid_argument("segments: need at least 2 subjects");
  }
  bool any_pos = false, any_neg = false;
  const std::size_t n = segments.front().feature_count();
  for (const SubjectSegment& seg : segments) {
    if (seg.rows.empty()) {
      throw std::invalid_argument("segments: subject " + seg.subject_id +
                                  " has no rows");
    }
    if (seg.feature_count() != n) {
      throw std::invalid_argument(
          "segments: feature count differs between subjects");
    }
    (seg.label == 1 ? any_pos : any_neg) = true;
  }
  if (!any_pos || !any_neg) {
    throw std::invalid_argument("segments: both classes must be present");
  }
}

double mean_of(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double sample_std_of(const std::vector<double>& values, double mean) {
  if (values.size() < 2) return 0.0;
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return std::sqrt(sq / static_cast<double>(values.size() - 1));
}

}  // namespace

EvaluationReport run_loso(const std::vector<SubjectSegment>& segments,
                          const RunConfig& config) {
  validate(config);
  check_segments(segments);

  EvaluationReport report;
  report.config = config;
  const std::vector<LosoFold> folds = split_loso(segments);
  report.folds.resize(config.runs * folds.size());
  report.per_run.resize(config.runs);

  for (std::size_t run = 0; run < config.runs; ++run) {
    const std::uint64_t run_seed = mix_seed({config.seed, run});
    const std::vector<TransformedDataset> channels =
        build_channels(segments, config, run_seed);
    std::vector<std::vector<SampleRange>> ranges;
    ranges.reserve(channels.size());
    for (const TransformedDataset& ds : channels) {
      ranges.push_back(subject_ranges(ds, segments));
    }
    const FoldContext ctx{segments, config, channels, ranges, run_seed};

    run_tasks(folds.size(), config.jobs, [&](std::size_t f) {
      FoldOutput out = run_fold(ctx, folds[f], false);
      out.record.run = run;
      report.folds[run * folds.size() + f] = std::move(out.record);
    });

    ConfusionCounts counts;
    for (std::size_t f = 0; f < folds.size(); ++f) {
      const FoldRecord& record = report.folds[run * folds.size() + f];
      counts.add(record.true_label, record.predicted);
    }
    const Metrics metrics = compute_metrics(counts);
    report.per_run[run] = {metrics.accuracy, metrics.sensitivity.value(),
                           metrics.specificity.value()};
  }

  std::vector<double> acc, sens, spec;
  for (const RunMetrics& m : report.per_run) {
    acc.push_back(m.accuracy);
    sens.push_back(m.sensitivity);
    spec.push_back(m.specificity);
  }
  report.accuracy_mean = mean_of(acc);
  report.accuracy_std = sample_std_of(acc, report.accuracy_mean);
  report.sensitivity_mean = mean_of(sens);
  report.sensitivity_std = sample_std_of(sens, report.sensitivity_mean);
  report.specificity_mean = mean_of(spec);
  report.specificity_std = sample_std_of(spec, report.specificity_mean);
  return report;
}

FoldArtifacts fold_artifacts(const std::vector<SubjectSegment>& segments,
                             const RunConfig& config, std::size_t run_index,
                             std::size_t test_index) {
  validate(config);
  check_segments(segments);
  if (test_index >= segments.size()) {
    throw std::invalid_argument("test_index: out of range");
  }
  const std::uint64_t run_seed = mix_seed({config.seed, run_index});
  const std::vector<TransformedDataset> channels =
      build_channels(segments, config, run_seed);
  std::vector<std::vector<SampleRange>> ranges;
  for (const TransformedDataset& ds : channels) {
    ranges.push_back(subject_ranges(ds, segments));
  }
  const FoldContext ctx{segments, config, channels, ranges, run_seed};
  const std::vector<LosoFold> folds = split_loso(segments);
  return run_fold(ctx, folds[test_index], true).artifacts;
}

}  // namespace mrcst
