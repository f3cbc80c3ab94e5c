#pragma once

#include <string>
#include <vector>

#include "mrcst/types.hpp"

namespace mrcst {

// Loaders group rows into per-subject segments preserving file order and
// throw std::runtime_error with the offending line number on malformed
// input. Deviations from the canonical UCI shapes are appended to
// warnings when a sink is given; they never fail the load.

// Headerless CSV: subject id, 26 features, class label (28 columns).
std::vector<SubjectSegment> load_sakar(const std::string& path,
                                       std::vector<std::string>* warnings = nullptr);

// Header + recording-name rows; the subject key is the recording name up
// to the final _<index>; the `status` column carries the label.
std::vector<SubjectSegment> load_maxlittle(const std::string& path,
                                           std::vector<std::string>* warnings = nullptr);

// Optional header; subject id, N features, label in {0,1}.
std::vector<SubjectSegment> load_generic_csv(const std::string& path);

// Header `subject_id,label,f1..fN`, 17 significant digits, LF endings.
// Values round-trip bit-exactly through load_generic_csv.
void write_generic_csv(const std::string& path,
                       const std::vector<SubjectSegment>& segments);
void write_generic_csv(const std::string& path, const TransformedDataset& ds);

enum class NormMethod { kMinMax, kZScore };

// Per-feature affine rescaling fitted on training data only. Constant
// features keep scale 0 and map to 0 on apply.
struct Normalizer {
  NormMethod method = NormMethod::kMinMax;
  std::vector<double> offset;
  std::vector<double> scale;
};

Normalizer fit_normalizer(const TransformedDataset& train, NormMethod method);
TransformedDataset apply_normalizer(const Normalizer& norm,
                                    const TransformedDataset& data);

struct LosoFold {
  std::vector<std::size_t> train;  // indices into the segment list
  std::size_t test = 0;
};

// One fold per subject; fold i holds out the i-th segment.
std::vector<LosoFold> split_loso(const std::vector<SubjectSegment>& segments);

}  // namespace mrcst
