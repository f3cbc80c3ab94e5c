#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "mrcst/evaluate.hpp"

namespace mrcst {

// Dataset flavors the loaders understand.
enum class FileFormat { kSakar, kMaxLittle, kCsv };

std::string format_name(FileFormat f);
std::optional<FileFormat> format_from_name(const std::string& name);

// Wire names for the remaining enum knobs (method and classifier names
// live next to their enums).
std::string trim_name(TrimMode m);
std::optional<TrimMode> trim_from_name(const std::string& name);
std::string norm_name(NormMethod m);
std::optional<NormMethod> norm_from_name(const std::string& name);
std::string score_mode_name(ScoreMode m);
std::optional<ScoreMode> score_mode_from_name(const std::string& name);

// Everything a command needs: the core evaluation settings plus the
// file-level plumbing (input path/format, output directory, debug
// normalization for transform dumps).
struct CliConfig {
  std::string input;
  FileFormat format = FileFormat::kCsv;
  std::string out = ".";
  // "none" (default) or "global": transform-only debug dump that
  // normalizes over the whole dataset; evaluation always normalizes
  // per fold and ignores this.
  std::string normalized = "none";
  RunConfig run;
};

// JSON field names mirror the CLI flags. Fields absent from the JSON
// keep their current values, so a partial config overlays cleanly.
nlohmann::ordered_json config_to_json(const CliConfig& config);
void config_from_json(const nlohmann::ordered_json& j, CliConfig& config);

// Loads `path` and overlays it onto `config`. Accepts either a bare
// config object or any report/manifest carrying a "config" member, so
// every output file doubles as a rerun recipe.
void load_config_file(const std::string& path, CliConfig& config);

std::vector<SubjectSegment> load_dataset(const std::string& path,
                                         FileFormat format,
                                         std::vector<std::string>* warnings);

// report.json with the stable top-level keys: config, method,
// classifier, the six metric aggregates, weights_per_fold and folds.
nlohmann::ordered_json report_to_json(const EvaluationReport& report,
                                      const CliConfig& config);

void write_report_json(const std::string& path, const EvaluationReport& report,
                       const CliConfig& config);

// One row per fold: run, subject, truth, per-channel scores, weights,
// fused score and the decision.
void write_folds_csv(const std::string& path, const EvaluationReport& report);

// One ablation cell: a finished evaluation of one method/classifier pair.
struct AblationRow {
  Method method;
  ClassifierKind classifier;
  EvaluationReport report;
};

// CSV with columns method, classifier, accuracy, sensitivity,
// specificity; metric cells are "mean±std" in percent.
std::string ablation_table(const std::vector<AblationRow>& rows);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace mrcst
