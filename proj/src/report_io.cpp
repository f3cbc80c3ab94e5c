#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mrcst/report_io.hpp"

namespace mrcst {

using nlohmann::ordered_json;

std::string format_name(FileFormat f) {
  switch (f) {
    case FileFormat::kSakar: return "sakar";
    case FileFormat::kMaxLittle: return "maxlittle";
    case FileFormat::kCsv: return "csv";
  }
  return "csv";
}

std::optional<FileFormat> format_from_name(const std::string& name) {
  if (name == "sakar") return FileFormat::kSakar;
  if (name == "maxlittle") return FileFormat::kMaxLittle;
  if (name == "csv") return FileFormat::kCsv;
  return std::nullopt;
}

std::string trim_name(TrimMode m) {
  return m == TrimMode::kRetained ? "retained" : "paper";
}

std::optional<TrimMode> trim_from_name(const std::string& name) {
  if (name == "retained") return TrimMode::kRetained;
  if (name == "paper") return TrimMode::kPaperLiteral;
  return std::nullopt;
}

std::string norm_name(NormMethod m) {
  return m == NormMethod::kMinMax ? "minmax" : "zscore";
}

std::optional<NormMethod> norm_from_name(const std::string& name) {
  if (name == "minmax") return NormMethod::kMinMax;
  if (name == "zscore") return NormMethod::kZScore;
  return std::nullopt;
}

std::string score_mode_name(ScoreMode m) {
  return m == ScoreMode::kScore ? "score" : "label";
}

std::optional<ScoreMode> score_mode_from_name(const std::string& name) {
  if (name == "score") return ScoreMode::kScore;
  if (name == "label") return ScoreMode::kLabel;
  return std::nullopt;
}

namespace {

[[noreturn]] void bad_field(const std::string& path, const std::string& what) {
  throw std::invalid_argument(path + ": " + what);
}

double as_double(const ordered_json& j, const std::string& path) {
  if (!j.is_number()) bad_field(path, "expected a number");
  return j.get<double>();
}

std::size_t as_size(const ordered_json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    bad_field(path, "expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

std::string as_string(const ordered_json& j, const std::string& path) {
  if (!j.is_string()) bad_field(path, "expected a string");
  return j.get<std::string>();
}

bool as_bool(const ordered_json& j, const std::string& path) {
  if (!j.is_boolean()) bad_field(path, "expected a boolean");
  return j.get<bool>();
}

template <typename Enum>
Enum as_name(const ordered_json& j, const std::string& path,
             std::optional<Enum> (*parse)(const std::string&)) {
  const std::string name = as_string(j, path);
  const std::optional<Enum> value = parse(name);
  if (!value) bad_field(path, "unknown name '" + name + "'");
  return *value;
}

void classifier_from_json(const ordered_json& j, ClassifierSpec& spec,
                          const std::string& path) {
  if (!j.is_object()) bad_field(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    const std::string sub = path + "." + key;
    if (key == "kind") {
      spec.kind = as_name<ClassifierKind>(value, sub, classifier_from_name);
    } else if (key == "svm") {
      if (!value.is_object()) bad_field(sub, "expected an object");
      for (const auto& [skey, svalue] : value.items()) {
        const std::string spath = sub + "." + skey;
        if (skey == "c") spec.svm.c = as_double(svalue, spath);
        else if (skey == "gamma") spec.svm.gamma = as_double(svalue, spath);
        else if (skey == "degree") spec.svm.degree = static_cast<int>(as_size(svalue, spath));
        else if (skey == "coef0") spec.svm.coef0 = as_double(svalue, spath);
        else if (skey == "tolerance") spec.svm.tolerance = as_double(svalue, spath);
        else bad_field(spath, "unknown field");
      }
    } else if (key == "rf") {
      if (!value.is_object()) bad_field(sub, "expected an object");
      for (const auto& [rkey, rvalue] : value.items()) {
        const std::string rpath = sub + "." + rkey;
        if (rkey == "n_trees") spec.rf.n_trees = as_size(rvalue, rpath);
        else if (rkey == "max_depth") spec.rf.max_depth = as_size(rvalue, rpath);
        else if (rkey == "bootstrap") spec.rf.bootstrap = as_bool(rvalue, rpath);
        else bad_field(rpath, "unknown field");
      }
    } else {
      bad_field(sub, "unknown field");
    }
  }
}

}  // namespace

nlohmann::ordered_json config_to_json(const CliConfig& config) {
  ordered_json j;
  j["input"] = config.input;
  j["format"] = format_name(config.format);
  j["out"] = config.out;
  j["normalized"] = config.normalized;
  j["method"] = method_name(config.run.method);
  j["classifier"] = {
      {"kind", classifier_name(config.run.classifier.kind)},
      {"svm",
       {{"c", config.run.classifier.svm.c},
        {"gamma", config.run.classifier.svm.gamma},
        {"degree", config.run.classifier.svm.degree},
        {"coef0", config.run.classifier.svm.coef0},
        {"tolerance", config.run.classifier.svm.tolerance}}},
      {"rf",
       {{"n_trees", config.run.classifier.rf.n_trees},
        {"max_depth", config.run.classifier.rf.max_depth},
        {"bootstrap", config.run.classifier.rf.bootstrap}}}};
  j["q"] = config.run.q;
  j["depth"] = config.run.depth;
  j["trim"] = trim_name(config.run.trim);
  j["norm"] = norm_name(config.run.norm);
  j["score_mode"] = score_mode_name(config.run.score_mode);
  j["grid_step"] = config.run.grid_step;
  j["runs"] = config.run.runs;
  j["seed"] = config.run.seed;
  j["jobs"] = config.run.jobs;
  j["restarts"] = config.run.restarts;
  if (config.run.force_weights) {
    j["force_weights"] = config.run.force_weights->alpha;
  } else {
    j["force_weights"] = nullptr;
  }
  return j;
}

void config_from_json(const ordered_json& j, CliConfig& config) {
  if (!j.is_object()) {
    throw std::invalid_argument("config: expected a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    const std::string path = "config." + key;
    if (key == "input") {
      config.input = as_string(value, path);
    } else if (key == "format") {
      config.format = as_name<FileFormat>(value, path, format_from_name);
    } else if (key == "out") {
      config.out = as_string(value, path);
    } else if (key == "normalized") {
      const std::string mode = as_string(value, path);
      if (mode != "none" && mode != "global") {
        bad_field(path, "must be 'none' or 'global'");
      }
      config.normalized = mode;
    } else if (key == "method") {
      config.run.method = as_name<Method>(value, path, method_from_name);
    } else if (key == "classifier") {
      classifier_from_json(value, config.run.classifier, path);
    } else if (key == "q") {
      config.run.q = as_size(value, path);
    } else if (key == "depth") {
      config.run.depth = as_size(value, path);
    } else if (key == "trim") {
      config.run.trim = as_name<TrimMode>(value, path, trim_from_name);
    } else if (key == "norm") {
      config.run.norm = as_name<NormMethod>(value, path, norm_from_name);
    } else if (key == "score_mode") {
      config.run.score_mode =
          as_name<ScoreMode>(value, path, score_mode_from_name);
    } else if (key == "grid_step") {
      config.run.grid_step = as_double(value, path);
    } else if (key == "runs") {
      config.run.runs = as_size(value, path);
    } else if (key == "seed") {
      if (!value.is_number_integer()) bad_field(path, "expected an integer");
      config.run.seed = value.get<std::uint64_t>();
    } else if (key == "jobs") {
      config.run.jobs = as_size(value, path);
    } else if (key == "restarts") {
      config.run.restarts = as_size(value, path);
    } else if (key == "force_weights") {
      if (value.is_null()) {
        config.run.force_weights.reset();
      } else {
        if (!value.is_array() || value.size() != 3) {
          bad_field(path, "expected null or an array of 3 numbers");
        }
        FusionWeights w;
        for (std::size_t c = 0; c < 3; ++c) {
          w.alpha[c] = as_double(value[c], path);
        }
        config.run.force_weights = w;
      }
    } else {
      bad_field(path, "unknown field");
    }
  }
}

void load_config_file(const std::string& path, CliConfig& config) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("config file not found: " + path);
  }
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("config file " + path + ": " + e.what());
  }
  // Reports and manifests embed their config; accept them directly so
  // any output file can be replayed.
  if (j.is_object() && j.contains("config")) {
    config_from_json(j["config"], config);
  } else {
    config_from_json(j, config);
  }
}

std::vector<SubjectSegment> load_dataset(const std::string& path,
                                         FileFormat format,
                                         std::vector<std::string>* warnings) {
  switch (format) {
    case FileFormat::kSakar: return load_sakar(path, warnings);
    case FileFormat::kMaxLittle: return load_maxlittle(path, warnings);
    case FileFormat::kCsv: return load_generic_csv(path);
  }
  throw std::invalid_argument("format: unknown");
}

nlohmann::ordered_json report_to_json(const EvaluationReport& report,
                                      const CliConfig& config) {
  ordered_json j;
  j["config"] = config_to_json(config);
  j["method"] = method_name(report.config.method);
  j["classifier"] = classifier_name(report.config.classifier.kind);
  j["accuracy_mean"] = report.accuracy_mean;
  j["accuracy_std"] = report.accuracy_std;
  j["sensitivity_mean"] = report.sensitivity_mean;
  j["sensitivity_std"] = report.sensitivity_std;
  j["specificity_mean"] = report.specificity_mean;
  j["specificity_std"] = report.specificity_std;
  ordered_json weights = ordered_json::array();
  ordered_json folds = ordered_json::array();
  for (const FoldRecord& record : report.folds) {
    weights.push_back(record.weights.alpha);
    ordered_json fold;
    fold["run"] = record.run;
    fold["subject_id"] = record.subject_id;
    fold["true_label"] = record.true_label;
    fold["channel_scores"] = record.channel_scores;
    fold["weights"] = record.weights.alpha;
    fold["fused_score"] = record.fused_score;
    fold["predicted"] = record.predicted;
    folds.push_back(std::move(fold));
  }
  j["weights_per_fold"] = std::move(weights);
  j["folds"] = std::move(folds);
  return j;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  out << content;
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

void write_report_json(const std::string& path, const EvaluationReport& report,
                       const CliConfig& config) {
  write_text_file(path, report_to_json(report, config).dump(2) + "\n");
}

namespace {

std::string seventeen(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

// mean±std in percent, two decimals, matching the reported tables.
std::string percent_cell(double mean, double std) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.2f±%.2f", mean * 100.0,
                std * 100.0);
  return buffer;
}

}  // namespace

void write_folds_csv(const std::string& path,
                     const EvaluationReport& report) {
  std::ostringstream out;
  out << "run,subject_id,true_label,score_ef,score_es,score_et,"
         "w_ef,w_es,w_et,fused_score,predicted\n";
  for (const FoldRecord& r : report.folds) {
    out << r.run << ',' << r.subject_id << ',' << r.true_label;
    for (double s : r.channel_scores) out << ',' << seventeen(s);
    for (double a : r.weights.alpha) out << ',' << seventeen(a);
    out << ',' << seventeen(r.fused_score) << ',' << r.predicted << '\n';
  }
  write_text_file(path, out.str());
}

std::string ablation_table(const std::vector<AblationRow>& rows) {
  std::ostringstream out;
  out << "method,classifier,accuracy,sensitivity,specificity\n";
  for (const AblationRow& row : rows) {
    out << method_name(row.method) << ','
        << classifier_name(row.classifier) << ','
        << percent_cell(row.report.accuracy_mean, row.report.accuracy_std)
        << ','
        << percent_cell(row.report.sensitivity_mean,
                        row.report.sensitivity_std)
        << ','
        << percent_cell(row.report.specificity_mean,
                        row.report.specificity_std)
        << '\n';
  }
  return out.str();
}

}  // namespace mrcst
