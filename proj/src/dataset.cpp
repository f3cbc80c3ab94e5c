#include "mrcst/dataset.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>

namespace mrcst {

namespace {

std::string trimmed(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(trimmed(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(trimmed(field));
  return fields;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(out);
}

double parse_feature(const std::string& s, std::size_t line_no) {
  double v;
  if (!parse_double(s, v)) {
    throw std::runtime_error("line " + std::to_string(line_no) +
                             ": non-numeric feature value '" + s + "'");
  }
  return v;
}

int parse_label(const std::string& s, std::size_t line_no) {
  double v;
  if (!parse_double(s, v) || (v != 0.0 && v != 1.0)) {
    throw std::runtime_error("line " + std::to_string(line_no) +
                             ": label must be 0 or 1, got '" + s + "'");
  }
  return static_cast<int>(v);
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

// Accumulates rows into per-subject segments, keeping first-appearance
// order and enforcing one label per subject.
class SegmentBuilder {
 public:
  void add(const std::string& subject_id, int label, FeatureRow features,
           std::size_t line_no) {
    auto it = index_.find(subject_id);
    if (it == index_.end()) {
      index_.emplace(subject_id, segments_.size());
      segments_.push_back({subject_id, label, {std::move(features)}});
      return;
    }
    SubjectSegment& seg = segments_[it->second];
    if (seg.label != label) {
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": subject '" + subject_id +
                               "' has conflicting labels");
    }
    seg.rows.push_back(std::move(features));
  }

  std::vector<SubjectSegment> take() { return std::move(segments_); }
  bool empty() const { return segments_.empty(); }

 private:
  std::map<std::string, std::size_t> index_;
  std::vector<SubjectSegment> segments_;
};

}  // namespace

std::vector<SubjectSegment> load_sakar(const std::string& path,
                                       std::vector<std::string>* warnings) {
  const std::vector<std::string> lines = read_lines(path);
  SegmentBuilder builder;
  std::size_t rows = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trimmed(lines[i]).empty()) continue;
    const std::size_t line_no = i + 1;
    const std::vector<std::string> f = split_csv(lines[i]);
    if (f.size() != 28) {
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": expected 28 columns, got " +
                               std::to_string(f.size()));
    }
    FeatureRow features(26);
    for (std::size_t j = 0; j < 26; ++j) {
      features[j] = parse_feature(f[j + 1], line_no);
    }
    builder.add(f[0], parse_label(f[27], line_no), std::move(features),
                line_no);
    ++rows;
  }
  if (builder.empty()) {
    throw std::runtime_error(path + ": no data rows");
  }
  std::vector<SubjectSegment> segments = builder.take();
  if (warnings != nullptr) {
    bool canonical = segments.size() == 40 && rows == 1040;
    for (const SubjectSegment& s : segments) {
      canonical = canonical && s.row_count() == 26;
    }
    if (!canonical) {
      warnings->push_back("not the canonical Sakar shape (40 subjects x 26 "
                          "rows): got " +
                          std::to_string(segments.size()) + " subjects, " +
                          std::to_string(rows) + " rows");
    }
  }
  return segments;
}

namespace {

std::string maxlittle_subject_key(const std::string& name) {
  const std::size_t pos = name.rfind('_');
  if (pos == std::string::npos || pos + 1 == name.size()) return name;
  for (std::size_t i = pos + 1; i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return name;
  }
  return name.substr(0, pos);
}

}  // namespace

std::vector<SubjectSegment> load_maxlittle(const std::string& path,
                                           std::vector<std::string>* warnings) {
  const std::vector<std::string> lines = read_lines(path);
  std::size_t first = 0;
  while (first < lines.size() && trimmed(lines[first]).empty()) ++first;
  if (first == lines.size()) {
    throw std::runtime_error(path + ": no data rows");
  }
  const std::vector<std::string> header = split_csv(lines[first]);
  std::size_t status_col = header.size();
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == "status") status_col = j;
  }
  if (status_col == header.size()) {
    throw std::runtime_error(path + ": missing status column");
  }

  SegmentBuilder builder;
  std::size_t rows = 0;
  for (std::size_t i = first + 1; i < lines.size(); ++i) {
    if (trimmed(lines[i]).empty()) continue;
    const std::size_t line_no = i + 1;
    const std::vector<std::string> f = split_csv(lines[i]);
    if (f.size() != header.size()) {
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": expected " + std::to_string(header.size()) +
                               " columns, got " + std::to_string(f.size()));
    }
    FeatureRow features;
    features.reserve(header.size() - 2);
    for (std::size_t j = 1; j < f.size(); ++j) {
      if (j == status_col) continue;
      features.push_back(parse_feature(f[j], line_no));
    }
    builder.add(maxlittle_subject_key(f[0]), parse_label(f[status_col], line_no),
                std::move(features), line_no);
    ++rows;
  }
  if (builder.empty()) {
    throw std::runtime_error(path + ": no data rows");
  }
  std::vector<SubjectSegment> segments = builder.take();
  if (warnings != nullptr) {
    bool canonical = segments.size() == 31;
    for (const SubjectSegment& s : segments) {
      canonical = canonical && (s.row_count() == 6 || s.row_count() == 7) &&
                  s.feature_count() == 22;
    }
    if (!canonical) {
      warnings->push_back(
          "not the canonical MaxLittle shape (31 subjects, 6-7 rows each, 22 "
          "features): got " +
          std::to_string(segments.size()) + " subjects, " +
          std::to_string(rows) + " rows");
    }
  }
  return segments;
}

std::vector<SubjectSegment> load_generic_csv(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  SegmentBuilder builder;
  std::size_t n_columns = 0;
  std::size_t label_col = 0;  // resolved once the first line is seen
  bool checked_header = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trimmed(lines[i]).empty()) continue;
    const std::size_t line_no = i + 1;
    const std::vector<std::string> f = split_csv(lines[i]);
    if (!checked_header) {
      checked_header = true;
      if (f.size() < 3) {
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": need at least 3 columns");
      }
      n_columns = f.size();
      label_col = f.size() - 1;
      bool numeric = true;
      double v;
      for (std::size_t j = 1; j < f.size(); ++j) {
        numeric = numeric && parse_double(f[j], v);
      }
      if (!numeric) {
        // Header row. A column named `label` overrides the last-column
        // default, so our own output format reloads correctly.
        for (std::size_t j = 1; j < f.size(); ++j) {
          if (f[j] == "label") label_col = j;
        }
        continue;
      }
    }
    if (f.size() != n_columns) {
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": expected " + std::to_string(n_columns) +
                               " columns, got " + std::to_string(f.size()));
    }
    FeatureRow features;
    features.reserve(f.size() - 2);
    for (std::size_t j = 1; j < f.size(); ++j) {
      if (j == label_col) continue;
      features.push_back(parse_feature(f[j], line_no));
    }
    builder.add(f[0], parse_label(f[label_col], line_no), std::move(features),
                line_no);
  }
  if (builder.empty()) {
    throw std::runtime_error(path + ": no data rows");
  }
  return builder.take();
}

void write_generic_csv(const std::string& path,
                       const std::vector<SubjectSegment>& segments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  const std::size_t n = segments.empty() ? 0 : segments.front().feature_count();
  out << "subject_id,label";
  for (std::size_t j = 1; j <= n; ++j) out << ",f" << j;
  out << "\n";
  char buf[40];
  for (const SubjectSegment& seg : segments) {
    for (const FeatureRow& row : seg.rows) {
      out << seg.subject_id << "," << seg.label;
      for (double v : row) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << "," << buf;
      }
      out << "\n";
    }
  }
  if (!out) {
    throw std::runtime_error("write failed for " + path);
  }
}

void write_generic_csv(const std::string& path, const TransformedDataset& ds) {
  write_generic_csv(path, as_segments(ds));
}

std::vector<SubjectSegment> as_segments(const TransformedDataset& ds) {
  std::vector<SubjectSegment> segments;
  for (const DerivedSample& s : ds.samples) {
    if (segments.empty() || segments.back().subject_id != s.subject_id) {
      segments.push_back({s.subject_id, s.label, {}});
    }
    segments.back().rows.push_back(s.features);
  }
  return segments;
}

TransformedDataset raw_dataset(const std::vector<SubjectSegment>& segments) {
  TransformedDataset out;
  out.n_features = segments.empty() ? 0 : segments.front().feature_count();
  for (const SubjectSegment& seg : segments) {
    for (const FeatureRow& row : seg.rows) {
      out.samples.push_back({seg.subject_id, seg.label, row});
    }
  }
  return out;
}

Normalizer fit_normalizer(const TransformedDataset& train, NormMethod method) {
  if (train.samples.empty()) {
    throw std::invalid_argument("fit_normalizer: empty training set");
  }
  const std::size_t n = train.n_features;
  Normalizer norm;
  norm.method = method;
  norm.offset.assign(n, 0.0);
  norm.scale.assign(n, 0.0);
  const std::size_t count = train.samples.size();
  if (method == NormMethod::kMinMax) {
    for (std::size_t j = 0; j < n; ++j) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -std::numeric_limits<double>::infinity();
      for (const DerivedSample& s : train.samples) {
        lo = std::min(lo, s.features[j]);
        hi = std::max(hi, s.features[j]);
      }
      norm.offset[j] = lo;
      norm.scale[j] = hi - lo;  // 0 marks a constant feature
    }
  } else {
    for (std::size_t j = 0; j < n; ++j) {
      double sum = 0.0;
      for (const DerivedSample& s : train.samples) sum += s.features[j];
      const double mean = sum / static_cast<double>(count);
      double sq = 0.0;
      for (const DerivedSample& s : train.samples) {
        const double d = s.features[j] - mean;
        sq += d * d;
      }
      norm.offset[j] = mean;
      norm.scale[j] =
          count > 1 ? std::sqrt(sq / static_cast<double>(count - 1)) : 0.0;
    }
  }
  return norm;
}

TransformedDataset apply_normalizer(const Normalizer& norm,
                                    const TransformedDataset& data) {
  if (data.n_features != norm.offset.size()) {
    throw std::invalid_argument("apply_normalizer: feature count mismatch");
  }
  TransformedDataset out = data;
  for (DerivedSample& s : out.samples) {
    for (std::size_t j = 0; j < s.features.size(); ++j) {
      s.features[j] = norm.scale[j] == 0.0
                          ? 0.0
                          : (s.features[j] - norm.offset[j]) / norm.scale[j];
    }
  }
  return out;
}

std::vector<LosoFold> split_loso(const std::vector<SubjectSegment>& segments) {
  if (segments.size() < 2) {
    throw std::invalid_argument("split_loso: need at least 2 subjects");
  }
  std::vector<LosoFold> folds(segments.size());
  for (std::size_t i = 0; i < segments.size(); ++i) {
    folds[i].test = i;
    folds[i].train.reserve(segments.size() - 1);
    for (std::size_t j = 0; j < segments.size(); ++j) {
      if (j != i) folds[i].train.push_back(j);
    }
  }
  return folds;
}

}  // namespace mrcst
