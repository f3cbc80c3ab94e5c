#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "mrcst/classifiers.hpp"

namespace mrcst {

namespace {

double int_pow(double base, int exponent) {
  double out = 1.0;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

// Lazily materialized rows of the kernel matrix. SMO usually touches a
// small subset of rows, so the full matrix is never built up front.
class KernelCache {
 public:
  KernelCache(const std::vector<FeatureRow>& x, const SvmParams& p)
      : x_(x), params_(p), rows_(x.size()) {}

  const std::vector<double>& row(std::size_t i) {
    std::vector<double>& r = rows_[i];
    if (r.empty()) {
      r.resize(x_.size());
      for (std::size_t j = 0; j < x_.size(); ++j) {
        double dot = 0.0;
        for (std::size_t f = 0; f < x_[i].size(); ++f) {
          dot += x_[i][f] * x_[j][f];
        }
        r[j] = int_pow(params_.gamma * dot + params_.coef0, params_.degree);
      }
    }
    return r;
  }

 private:
  const std::vector<FeatureRow>& x_;
  const SvmParams& params_;
  std::vector<std::vector<double>> rows_;
};

}  // namespace

double SvmModel::kernel(const FeatureRow& a, const FeatureRow& b) const {
  double dot = 0.0;
  for (std::size_t f = 0; f < a.size(); ++f) dot += a[f] * b[f];
  return int_pow(params_.gamma * dot + params_.coef0, params_.degree);
}

SvmModel::SvmModel(const SvmParams& params, std::vector<FeatureRow> x,
                   const std::vector<int>& labels01)
    : TrainedModel(x.empty() ? 0 : x.front().size()),
      params_(params),
      x_(std::move(x)) {
  const std::size_t n = x_.size();
  y_.resize(n);
  for (std::size_t i = 0; i < n; ++i) y_[i] = labels01[i] == 1 ? 1 : -1;
  alpha_.assign(n, 0.0);

  // Minimize 1/2 a'Qa - e'a with Q_ij = y_i y_j K_ij, 0 <= a <= C,
  // y'a = 0. With a = 0 the gradient G = Qa - e starts at -1.
  std::vector<double> grad(n, -1.0);
  KernelCache cache(x_, params_);
  const double c = params_.c;
  const std::size_t max_iterations = std::max<std::size_t>(10000, 100 * n);

  while (iterations_ < max_iterations) {
    // maximal violating pair over the feasible ascent/descent sets
    double up_best = -std::numeric_limits<double>::infinity();
    double low_best = std::numeric_limits<double>::infinity();
    std::size_t i = n, j = n;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -static_cast<double>(y_[t]) * grad[t];
      const bool in_up = (y_[t] == 1 && alpha_[t] < c) ||
                         (y_[t] == -1 && alpha_[t] > 0.0);
      const bool in_low = (y_[t] == 1 && alpha_[t] > 0.0) ||
                          (y_[t] == -1 && alpha_[t] < c);
      if (in_up && v > up_best) {
        up_best = v;
        i = t;
      }
      if (in_low && v < low_best) {
        low_best = v;
        j = t;
      }
    }
    if (i == n || j == n || up_best - low_best <= params_.tolerance) break;
    ++iterations_;

    const std::vector<double>& row_i = cache.row(i);
    const std::vector<double>& row_j = cache.row(j);

    // two-variable subproblem on (alpha_i, alpha_j)
    const double s = static_cast<double>(y_[i] * y_[j]);
    double lo, hi;
    if (y_[i] != y_[j]) {
      lo = std::max(0.0, alpha_[j] - alpha_[i]);
      hi = std::min(c, c + alpha_[j] - alpha_[i]);
    } else {
      lo = std::max(0.0, alpha_[i] + alpha_[j] - c);
      hi = std::min(c, alpha_[i] + alpha_[j]);
    }
    double eta = row_i[i] + row_j[j] - 2.0 * row_i[j];
    eta = std::max(eta, 1e-12);
    // E_t = y_t G_t is the prediction error u_t - y_t
    const double e_i = static_cast<double>(y_[i]) * grad[i];
    const double e_j = static_cast<double>(y_[j]) * grad[j];
    double aj_new = alpha_[j] + static_cast<double>(y_[j]) * (e_i - e_j) / eta;
    aj_new = std::min(hi, std::max(lo, aj_new));
    const double delta_j = aj_new - alpha_[j];
    const double delta_i = -s * delta_j;
    alpha_[j] = aj_new;
    alpha_[i] = std::min(c, std::max(0.0, alpha_[i] + delta_i));

    for (std::size_t t = 0; t < n; ++t) {
      grad[t] += static_cast<double>(y_[t] * y_[i]) * row_i[t] * delta_i +
                 static_cast<double>(y_[t] * y_[j]) * row_j[t] * delta_j;
    }
  }

  // bias from the free support vectors; fall back to the violating-pair
  // midpoint when every multiplier sits on a bound
  double free_sum = 0.0;
  std::size_t free_count = 0;
  double up = std::numeric_limits<double>::infinity();
  double low = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = static_cast<double>(y_[t]) * grad[t];
    if (alpha_[t] > 0.0 && alpha_[t] < params_.c) {
      free_sum += yg;
      ++free_count;
    } else {
      const bool in_up = (y_[t] == 1 && alpha_[t] <= 0.0) ||
                         (y_[t] == -1 && alpha_[t] >= params_.c);
      if (in_up) {
        up = std::min(up, yg);
      } else {
        low = std::max(low, yg);
      }
    }
  }
  bias_ = free_count > 0 ? -free_sum / static_cast<double>(free_count)
                         : -(up + low) / 2.0;
}

double SvmModel::decision(const FeatureRow& x) const {
  if (x.size() != n_features_) {
    throw std::invalid_argument("svm score: feature count mismatch");
  }
  double sum = bias_;
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (alpha_[i] > 0.0) {
      sum += alpha_[i] * static_cast<double>(y_[i]) * kernel(x_[i], x);
    }
  }
  return sum;
}

double SvmModel::score(const FeatureRow& x) const {
  return std::tanh(decision(x));
}

void SvmModel::dump(std::ostream& out) const {
  const std::streamsize old_precision = out.precision(17);
  out << "kind svm\n"
      << "n_features " << n_features_ << "\n"
      << "c " << params_.c << "\n"
      << "gamma " << params_.gamma << "\n"
      << "degree " << params_.degree << "\n"
      << "coef0 " << params_.coef0 << "\n"
      << "bias " << bias_ << "\n"
      << "iterations " << iterations_ << "\n";
  for (std::size_t i = 0; i < alpha_.size(); ++i) {
    if (alpha_[i] > 0.0) {
      out << "alpha " << i << " " << alpha_[i] * static_cast<double>(y_[i])
          << "\n";
    }
  }
  out.precision(old_precision);
}

}  // namespace mrcst
