// Command-line front end: transform datasets, evaluate methods under
// leave-one-subject-out, and reproduce the ablation table.
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mrcst/convolution.hpp"
#include "mrcst/report_io.hpp"
#include "mrcst/rng.hpp"

namespace {

using namespace mrcst;

// Raw flag values; presence is tracked through the option pointers so
// that flags override config-file values, which override defaults.
struct Flags {
  std::string input;
  std::string format = "csv";
  std::string config_path;
  std::string out = ".";
  std::string method = "mrcst";
  std::string classifier = "svm";
  std::string trim = "retained";
  std::string norm = "minmax";
  std::string score_mode = "score";
  std::string normalized = "none";
  std::size_t q = 3;
  std::size_t depth = 1;
  std::size_t runs = 10;
  std::size_t jobs = 1;
  std::size_t restarts = 1;
  double grid_step = 0.1;
  std::uint64_t seed = 2025;
};

struct FlagOptions {
  CLI::Option* input = nullptr;
  CLI::Option* format = nullptr;
  CLI::Option* out = nullptr;
  CLI::Option* method = nullptr;
  CLI::Option* classifier = nullptr;
  CLI::Option* trim = nullptr;
  CLI::Option* norm = nullptr;
  CLI::Option* score_mode = nullptr;
  CLI::Option* normalized = nullptr;
  CLI::Option* q = nullptr;
  CLI::Option* depth = nullptr;
  CLI::Option* runs = nullptr;
  CLI::Option* jobs = nullptr;
  CLI::Option* restarts = nullptr;
  CLI::Option* grid_step = nullptr;
  CLI::Option* seed = nullptr;
};

FlagOptions add_common_flags(CLI::App* cmd, Flags& f) {
  FlagOptions opt;
  opt.input = cmd->add_option("--input", f.input, "Input dataset path");
  opt.format = cmd->add_option("--format", f.format,
                               "Input format: sakar, maxlittle or csv");
  cmd->add_option("--config", f.config_path,
                  "JSON config file (flags override it)");
  opt.out = cmd->add_option("--out", f.out, "Output directory");
  opt.method = cmd->add_option(
      "--method", f.method, "Evaluated channel: none, ef, es, et or mrcst");
  opt.classifier =
      cmd->add_option("--classifier", f.classifier, "Classifier: svm or rf");
  opt.trim = cmd->add_option("--trim", f.trim,
                             "Trimmed-mean denominator: retained or paper");
  opt.norm =
      cmd->add_option("--norm", f.norm, "Normalization: minmax or zscore");
  opt.score_mode = cmd->add_option(
      "--score-mode", f.score_mode,
      "Fuse soft scores or hard labels: score or label");
  opt.normalized = cmd->add_option(
      "--normalized", f.normalized,
      "Transform dump normalization: none (default) or global (debug)");
  opt.q = cmd->add_option("--q", f.q,
                          "Clusters per subject (default 3; 2 for maxlittle)");
  opt.depth = cmd->add_option("--depth", f.depth, "Clustering layers");
  opt.runs = cmd->add_option("--runs", f.runs, "Repetitions to average");
  opt.jobs = cmd->add_option("--jobs", f.jobs, "Worker threads over folds");
  opt.restarts =
      cmd->add_option("--restarts", f.restarts, "k-means restarts");
  opt.grid_step =
      cmd->add_option("--grid-step", f.grid_step, "Fusion grid step");
  opt.seed = cmd->add_option("--seed", f.seed, "Master seed");
  return opt;
}

// flag > file > default: start from defaults, overlay the config file,
// then overlay every flag the user actually passed.
CliConfig resolve_config(const Flags& f, const FlagOptions& opt) {
  CliConfig config;
  if (!f.config_path.empty()) {
    load_config_file(f.config_path, config);
  }

  auto given = [](const CLI::Option* o) { return o != nullptr && o->count() > 0; };
  auto parse_name = [](const std::string& field, const std::string& value,
                       auto parser, auto& into) {
    const auto parsed = parser(value);
    if (!parsed) {
      throw std::invalid_argument(field + ": unknown name '" + value + "'");
    }
    into = *parsed;
  };

  if (given(opt.input)) config.input = f.input;
  if (given(opt.format)) {
    parse_name("format", f.format, format_from_name, config.format);
  }
  if (given(opt.out)) config.out = f.out;
  if (given(opt.method)) {
    parse_name("method", f.method, method_from_name, config.run.method);
  }
  if (given(opt.classifier)) {
    parse_name("classifier", f.classifier, classifier_from_name,
               config.run.classifier.kind);
  }
  if (given(opt.trim)) {
    parse_name("trim", f.trim, trim_from_name, config.run.trim);
  }
  if (given(opt.norm)) {
    parse_name("norm", f.norm, norm_from_name, config.run.norm);
  }
  if (given(opt.score_mode)) {
    parse_name("score_mode", f.score_mode, score_mode_from_name,
               config.run.score_mode);
  }
  if (given(opt.normalized)) {
    if (f.normalized != "none" && f.normalized != "global") {
      throw std::invalid_argument("normalized: must be 'none' or 'global'");
    }
    config.normalized = f.normalized;
  }
  if (given(opt.q)) {
    config.run.q = f.q;
  } else if (f.config_path.empty() || config.run.q == 0) {
    // Dataset-shaped default: the smaller cohort works better with 2.
    config.run.q = config.format == FileFormat::kMaxLittle ? 2 : 3;
  }
  if (given(opt.depth)) config.run.depth = f.depth;
  if (given(opt.runs)) config.run.runs = f.runs;
  if (given(opt.jobs)) config.run.jobs = f.jobs;
  if (given(opt.restarts)) config.run.restarts = f.restarts;
  if (given(opt.grid_step)) config.run.grid_step = f.grid_step;
  if (given(opt.seed)) config.run.seed = f.seed;

  if (config.input.empty()) {
    throw std::invalid_argument("input: required");
  }
  if (!std::filesystem::exists(config.input)) {
    throw std::invalid_argument("input file not found: " + config.input);
  }
  validate(config.run);
  return config;
}

std::vector<SubjectSegment> load_input(const CliConfig& config) {
  std::vector<std::string> warnings;
  std::vector<SubjectSegment> segments =
      load_dataset(config.input, config.format, &warnings);
  for (const std::string& w : warnings) {
    std::cerr << "warning: " << w << "\n";
  }
  return segments;
}

std::filesystem::path prepare_out_dir(const CliConfig& config) {
  const std::filesystem::path dir(config.out);
  std::filesystem::create_directories(dir);
  return dir;
}

int cmd_transform(const CliConfig& config) {
  const std::vector<SubjectSegment> segments = load_input(config);
  const std::uint64_t run_seed = mix_seed({config.run.seed, 0});

  TransformedDataset ef = transform_type_a(segments, config.run.trim);
  TypeBResult tb =
      transform_type_b(segments, config.run.q, config.run.depth, run_seed,
                       config.run.trim, config.run.restarts);
  TransformedDataset et = transform_type_c(tb.clustered, tb.es);
  TransformedDataset es = std::move(tb.es);

  if (config.normalized == "global") {
    // Debug dump only: evaluation always normalizes inside each fold.
    for (TransformedDataset* ds : {&ef, &es, &et}) {
      *ds = apply_normalizer(fit_normalizer(*ds, config.run.norm), *ds);
    }
  }

  const std::filesystem::path dir = prepare_out_dir(config);
  write_generic_csv((dir / "ef.csv").string(), ef);
  write_generic_csv((dir / "es.csv").string(), es);
  write_generic_csv((dir / "et.csv").string(), et);

  std::size_t input_rows = 0;
  for (const SubjectSegment& seg : segments) input_rows += seg.row_count();

  nlohmann::ordered_json manifest;
  manifest["config"] = config_to_json(config);
  manifest["run_seed"] = run_seed;
  manifest["subjects"] = segments.size();
  manifest["rows"] = {{"input", input_rows},
                      {"ef", ef.samples.size()},
                      {"es", es.samples.size()},
                      {"et", et.samples.size()}};
  write_text_file((dir / "manifest.json").string(), manifest.dump(2) + "\n");

  std::cout << "wrote " << (dir / "ef.csv").string() << " ("
            << ef.samples.size() << " rows), " << (dir / "es.csv").string()
            << " (" << es.samples.size() << " rows), "
            << (dir / "et.csv").string() << " (" << et.samples.size()
            << " rows)\n";
  return 0;
}

int cmd_evaluate(const CliConfig& config) {
  const std::vector<SubjectSegment> segments = load_input(config);
  const EvaluationReport report = run_loso(segments, config.run);

  const std::filesystem::path dir = prepare_out_dir(config);
  write_report_json((dir / "report.json").string(), report, config);
  write_folds_csv((dir / "folds.csv").string(), report);

  char line[160];
  std::snprintf(line, sizeof(line),
                "%s %s: accuracy %.2f±%.2f sensitivity %.2f±%.2f "
                "specificity %.2f±%.2f",
                method_name(config.run.method).c_str(),
                classifier_name(config.run.classifier.kind).c_str(),
                report.accuracy_mean * 100.0, report.accuracy_std * 100.0,
                report.sensitivity_mean * 100.0,
                report.sensitivity_std * 100.0,
                report.specificity_mean * 100.0,
                report.specificity_std * 100.0);
  std::cout << line << "\n";
  std::cout << "wrote " << (dir / "report.json").string() << " and "
            << (dir / "folds.csv").string() << "\n";
  return 0;
}

int cmd_ablation(const CliConfig& config) {
  const std::vector<SubjectSegment> segments = load_input(config);

  std::vector<AblationRow> rows;
  for (Method method : {Method::kNone, Method::kEf, Method::kEs, Method::kEt,
                        Method::kMrcst}) {
    for (ClassifierKind kind : {ClassifierKind::kSvm, ClassifierKind::kRf}) {
      RunConfig cell = config.run;
      cell.method = method;
      cell.classifier.kind = kind;
      AblationRow row;
      row.method = method;
      row.classifier = kind;
      row.report = run_loso(segments, cell);
      rows.push_back(std::move(row));
      std::cerr << "finished " << method_name(method) << " + "
                << classifier_name(kind) << "\n";
    }
  }

  const std::string table = ablation_table(rows);
  const std::filesystem::path dir = prepare_out_dir(config);
  write_text_file((dir / "ablation.csv").string(), table);

  nlohmann::ordered_json manifest;
  manifest["config"] = config_to_json(config);
  manifest["rows"] = rows.size();
  write_text_file((dir / "ablation_manifest.json").string(),
                  manifest.dump(2) + "\n");

  std::cout << table;
  std::cout << "wrote " << (dir / "ablation.csv").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Subject-grouped sample reconstruction: envelope, clustering and "
      "convolution channels with weighted decision fusion"};
  app.require_subcommand(1);

  Flags flags;
  CLI::App* transform = app.add_subcommand(
      "transform", "Write the ef/es/et reconstructions as CSV");
  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "Leave-one-subject-out evaluation of one method");
  CLI::App* ablation = app.add_subcommand(
      "ablation", "Evaluate all method x classifier cells");
  const FlagOptions transform_opts = add_common_flags(transform, flags);
  const FlagOptions evaluate_opts = add_common_flags(evaluate, flags);
  const FlagOptions ablation_opts = add_common_flags(ablation, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version exit clean, usage errors as 2
  }

  try {
    if (transform->parsed()) {
      return cmd_transform(resolve_config(flags, transform_opts));
    }
    if (evaluate->parsed()) {
      return cmd_evaluate(resolve_config(flags, evaluate_opts));
    }
    return cmd_ablation(resolve_config(flags, ablation_opts));
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
