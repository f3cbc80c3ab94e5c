// Python bindings over the core operations: loading, the three
// reconstruction operators, clustering, fusion and the LOSO evaluation
// driver. Configs and reports cross the boundary as plain dicts with the
// same schema the CLI reads and writes.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "mrcst/clustering.hpp"
#include "mrcst/convolution.hpp"
#include "mrcst/dataset.hpp"
#include "mrcst/envelope.hpp"
#include "mrcst/evaluate.hpp"
#include "mrcst/fusion.hpp"
#include "mrcst/report_io.hpp"
#include "mrcst/rng.hpp"

namespace py = pybind11;
using namespace mrcst;

namespace {

using RawSegment = std::tuple<std::string, int, std::vector<FeatureRow>>;

std::vector<SubjectSegment> to_segments(const std::vector<RawSegment>& raw) {
  std::vector<SubjectSegment> segments;
  segments.reserve(raw.size());
  for (const RawSegment& r : raw) {
    SubjectSegment seg;
    seg.subject_id = std::get<0>(r);
    seg.label = std::get<1>(r);
    seg.rows = std::get<2>(r);
    segments.push_back(std::move(seg));
  }
  return segments;
}

py::list segments_to_py(const std::vector<SubjectSegment>& segments) {
  py::list out;
  for (const SubjectSegment& seg : segments) {
    out.append(py::make_tuple(seg.subject_id, seg.label, seg.rows));
  }
  return out;
}

py::list dataset_to_py(const TransformedDataset& ds) {
  py::list out;
  for (const DerivedSample& s : ds.samples) {
    out.append(py::make_tuple(s.subject_id, s.label, s.features));
  }
  return out;
}

nlohmann::ordered_json py_to_json(const py::object& obj) {
  const std::string dumped =
      py::module_::import("json").attr("dumps")(obj).cast<std::string>();
  return nlohmann::ordered_json::parse(dumped);
}

py::object json_to_py(const nlohmann::ordered_json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

TrimMode trim_or_throw(const std::string& name) {
  const auto mode = trim_from_name(name);
  if (!mode) {
    throw std::invalid_argument("trim: unknown name '" + name + "'");
  }
  return *mode;
}

py::list load_dataset_py(const std::string& path, const std::string& format) {
  const auto f = format_from_name(format);
  if (!f) {
    throw std::invalid_argument("format: unknown name '" + format + "'");
  }
  std::vector<std::string> warnings;
  const auto segments = load_dataset(path, *f, &warnings);
  const py::object warn = py::module_::import("warnings").attr("warn");
  for (const std::string& w : warnings) warn(w);
  return segments_to_py(segments);
}

py::list envelope_py(const std::vector<FeatureRow>& rows,
                     const std::string& trim) {
  const EnvelopeStats stats = envelope_stats(rows, trim_or_throw(trim));
  py::list out;
  for (const FeatureRow* row : stats.rows()) out.append(*row);
  return out;
}

py::dict transform_py(const std::vector<RawSegment>& raw, std::size_t q,
                      std::size_t depth, std::uint64_t seed,
                      const std::string& trim, std::size_t restarts) {
  const TrimMode mode = trim_or_throw(trim);
  const auto segments = to_segments(raw);
  const std::uint64_t run_seed = mix_seed({seed, 0});
  const TransformedDataset ef = transform_type_a(segments, mode);
  const TypeBResult tb =
      transform_type_b(segments, q, depth, run_seed, mode, restarts);
  const TransformedDataset et = transform_type_c(tb.clustered, tb.es);
  py::dict out;
  out["ef"] = dataset_to_py(ef);
  out["es"] = dataset_to_py(tb.es);
  out["et"] = dataset_to_py(et);
  return out;
}

py::object evaluate_py(const std::vector<RawSegment>& raw,
                       const py::object& config_obj) {
  CliConfig config;
  if (!config_obj.is_none()) {
    config_from_json(py_to_json(config_obj), config);
  }
  const EvaluationReport report = run_loso(to_segments(raw), config.run);
  return json_to_py(report_to_json(report, config));
}

py::dict kmeans_py(const std::vector<FeatureRow>& rows, std::size_t q,
                   std::uint64_t seed, std::size_t restarts) {
  const ClusterModel model = kmeans(rows, q, seed, restarts);
  py::dict out;
  out["centers"] = model.centers;
  out["assignments"] = model.assignments;
  out["sse"] = model.sse;
  out["iterations"] = model.iterations;
  return out;
}

double fuse_py(const std::array<double, 3>& scores,
               const std::array<double, 3>& weights) {
  FusionWeights w;
  w.alpha = weights;
  return fuse(scores, w);
}

std::array<double, 3> grid_search_py(
    const std::vector<std::pair<int, std::array<double, 3>>>& points,
    double step) {
  std::vector<TuningPoint> tuning;
  tuning.reserve(points.size());
  for (const auto& [label, scores] : points) {
    tuning.push_back({label, scores});
  }
  return grid_search_weights(tuning, step).alpha;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Multitype reconstruction transforms and subject-level LOSO "
      "evaluation for subject-grouped tabular data.";
  m.attr("__version__") = "0.1.0";
  m.attr("ENVELOPE_ROWS") = py::make_tuple("mean", "median", "trimmed_mean",
                                           "stddev", "iqr", "mad");

  m.def("load_dataset", &load_dataset_py, py::arg("path"),
        py::arg("format") = "csv",
        "Load a dataset file into [(subject_id, label, rows)] segments.\n"
        "Formats: 'sakar', 'maxlittle', 'csv'. Shape deviations from the\n"
        "canonical corpora are raised as warnings, never errors.");

  m.def("envelope", &envelope_py, py::arg("rows"),
        py::arg("trim") = "retained",
        "Six summary rows (see ENVELOPE_ROWS) condensing one subject's\n"
        "samples, each the same width as the input rows. `trim` picks the\n"
        "trimmed-mean denominator: 'retained' or 'paper'.");

  m.def("transform", &transform_py, py::arg("segments"), py::arg("q") = 3,
        py::arg("depth") = 1, py::arg("seed") = 2025,
        py::arg("trim") = "retained", py::arg("restarts") = 1,
        "Apply all three reconstructions and return {'ef','es','et'},\n"
        "each a list of (subject_id, label, features) derived samples.\n"
        "Matches the CLI `transform` subcommand, including its seeding.");

  m.def("evaluate", &evaluate_py, py::arg("segments"),
        py::arg("config") = py::none(),
        "Repeated-seed leave-one-subject-out evaluation. `config` is a\n"
        "dict with the same fields as the CLI config file (all optional);\n"
        "returns the report as a dict with the same schema as report.json.");

  m.def("kmeans", &kmeans_py, py::arg("rows"), py::arg("q"),
        py::arg("seed") = 0, py::arg("restarts") = 1,
        "Seeded k-means over feature rows; returns centers, assignments,\n"
        "final SSE and the iteration count.");

  m.def("fuse", &fuse_py, py::arg("scores"), py::arg("weights"),
        "Convex weighted sum of the three per-channel scores.");

  m.def("grid_search_weights", &grid_search_py, py::arg("points"),
        py::arg("step") = 0.1,
        "Best convex weight triple on the step lattice for tuning points\n"
        "given as (label, (ef_score, es_score, et_score)).");

  m.def("subject_score", &subject_score, py::arg("sample_scores"),
        "Mean of one subject's per-sample scores; > 0 reads as positive.");
}
