#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "mrcst/classifiers.hpp"
#include "mrcst/rng.hpp"

namespace mrcst {

namespace {

double gini_pair(std::size_t pos, std::size_t total) {
  if (total == 0) return 0.0;
  const double p = static_cast<double>(pos) / static_cast<double>(total);
  return 1.0 - p * p - (1.0 - p) * (1.0 - p);
}

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double impurity = std::numeric_limits<double>::infinity();
};

// Size-weighted Gini of the best threshold on one feature, with
// thresholds midway between consecutive distinct values. Returns false
// when the feature is constant on these rows.
bool best_threshold(const std::vector<FeatureRow>& x, const std::vector<int>& y,
                    const std::vector<std::size_t>& rows, std::size_t feature,
                    SplitChoice& out) {
  std::vector<std::pair<double, int>> vals;
  vals.reserve(rows.size());
  std::size_t total_pos = 0;
  for (std::size_t r : rows) {
    vals.emplace_back(x[r][feature], y[r]);
    total_pos += static_cast<std::size_t>(y[r]);
  }
  std::sort(vals.begin(), vals.end());
  if (vals.front().first == vals.back().first) return false;

  bool found = false;
  std::size_t left_pos = 0;
  for (std::size_t k = 0; k + 1 < vals.size(); ++k) {
    left_pos += static_cast<std::size_t>(vals[k].second);
    if (vals[k].first == vals[k + 1].first) continue;
    const double threshold = vals[k].first +
                             (vals[k + 1].first - vals[k].first) / 2.0;
    // a midpoint can round onto a neighbour; such a split is degenerate
    if (!(vals[k].first < threshold && threshold < vals[k + 1].first)) continue;
    const std::size_t n_left = k + 1;
    const std::size_t n_right = vals.size() - n_left;
    const double impurity =
        (static_cast<double>(n_left) * gini_pair(left_pos, n_left) +
         static_cast<double>(n_right) *
             gini_pair(total_pos - left_pos, n_right)) /
        static_cast<double>(vals.size());
    if (impurity < out.impurity) {
      out.impurity = impurity;
      out.feature = static_cast<int>(feature);
      out.threshold = threshold;
      found = true;
    }
  }
  return found;
}

// max(1, floor(sqrt(n))) distinct feature indices, in ascending order so
// ties between equally good splits resolve deterministically.
std::vector<std::size_t> sample_features(std::size_t n_features, Rng& rng) {
  const std::size_t k = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::sqrt(static_cast<double>(n_features))));
  std::vector<std::size_t> pool(n_features);
  std::iota(pool.begin(), pool.end(), 0);
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(pool[i], pool[i + rng.below(n_features - i)]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

int ForestModel::build_node(Tree& tree, const std::vector<FeatureRow>& x,
                            const std::vector<int>& y,
                            std::vector<std::size_t>& rows, std::size_t depth,
                            Rng& rng) {
  std::size_t pos = 0;
  for (std::size_t r : rows) pos += static_cast<std::size_t>(y[r]);

  const bool pure = pos == 0 || pos == rows.size();
  const bool depth_capped =
      params_.max_depth != 0 && depth >= params_.max_depth;
  const int majority = pos * 2 > rows.size() ? 1 : 0;  // tie -> healthy

  auto make_leaf = [&](int label) {
    Node leaf;
    leaf.label = label;
    tree.push_back(leaf);
    return static_cast<int>(tree.size() - 1);
  };
  if (pure || depth_capped || rows.size() < 2) return make_leaf(majority);

  SplitChoice best;
  const std::vector<std::size_t> candidates =
      sample_features(x.front().size(), rng);
  for (std::size_t f : candidates) best_threshold(x, y, rows, f, best);
  if (best.feature < 0) {
    // every sampled feature was constant here; fall back to the rest so a
    // mixed node only becomes a leaf when no feature separates it at all
    for (std::size_t f = 0; f < x.front().size(); ++f) {
      if (!std::binary_search(candidates.begin(), candidates.end(), f)) {
        best_threshold(x, y, rows, f, best);
      }
    }
  }
  if (best.feature < 0) return make_leaf(majority);

  std::vector<std::size_t> left_rows, right_rows;
  for (std::size_t r : rows) {
    (x[r][best.feature] <= best.threshold ? left_rows : right_rows).push_back(r);
  }
  rows.clear();
  rows.shrink_to_fit();

  const int index = static_cast<int>(tree.size());
  Node node;
  node.feature = best.feature;
  node.threshold = best.threshold;
  tree.push_back(node);
  const int left = build_node(tree, x, y, left_rows, depth + 1, rng);
  const int right = build_node(tree, x, y, right_rows, depth + 1, rng);
  tree[index].left = left;
  tree[index].right = right;
  return index;
}

ForestModel::ForestModel(const RfParams& params,
                         const std::vector<FeatureRow>& x,
                         const std::vector<int>& labels01, std::uint64_t seed)
    : TrainedModel(x.empty() ? 0 : x.front().size()), params_(params) {
  trees_.reserve(params_.n_trees);
  for (std::size_t t = 0; t < params_.n_trees; ++t) {
    Rng rng(mix_seed({seed, t}));
    std::vector<std::size_t> rows(x.size());
    if (params_.bootstrap) {
      for (std::size_t& r : rows) r = rng.below(x.size());
    } else {
      std::iota(rows.begin(), rows.end(), 0);
    }
    Tree tree;
    build_node(tree, x, labels01, rows, 0, rng);
    trees_.push_back(std::move(tree));
  }
}

int ForestModel::tree_vote(const Tree& tree, const FeatureRow& x) const {
  int at = 0;
  while (tree[at].feature >= 0) {
    at = x[tree[at].feature] <= tree[at].threshold ? tree[at].left
                                                   : tree[at].right;
  }
  return tree[at].label;
}

double ForestModel::score(const FeatureRow& x) const {
  if (x.size() != n_features_) {
    throw std::invalid_argument("forest score: feature count mismatch");
  }
  std::size_t votes = 0;
  for (const Tree& tree : trees_) {
    votes += static_cast<std::size_t>(tree_vote(tree, x));
  }
  return 2.0 * static_cast<double>(votes) / static_cast<double>(trees_.size()) -
         1.0;
}

void ForestModel::dump(std::ostream& out) const {
  const std::streamsize old_precision = out.precision(17);
  out << "kind rf\n"
      << "n_features " << n_features_ << "\n"
      << "n_trees " << trees_.size() << "\n";
  for (std::size_t t = 0; t < trees_.size(); ++t) {
    out << "tree " << t << " nodes " << trees_[t].size() << "\n";
    for (const Node& n : trees_[t]) {
      if (n.feature < 0) {
        out << "leaf " << n.label << "\n";
      } else {
        out << "split " << n.feature << " " << n.threshold << " " << n.left
            << " " << n.right << "\n";
      }
    }
  }
  out.precision(old_precision);
}

}  // namespace mrcst
