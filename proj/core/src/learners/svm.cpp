#include "helpfuse/learners/svm.hpp"

#include <algorithm>
#include <cmath>

#include "helpfuse/error.hpp"
#include "helpfuse/learners/logistic.hpp"  // sigmoid
#include "helpfuse/rng.hpp"

namespace helpfuse {

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma) {
  double dist = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    dist += d * d;
  }
  return std::exp(-gamma * dist);
}

double SvmModel::decision(std::span<const double> x) const {
  const std::size_t d = feature_dim;
  double sum = bias;
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    sum += coefficients[i] *
           rbf_kernel({support_vectors.data() + i * d, d}, x, gamma);
  }
  return sum;
}

double SvmModel::score(std::span<const double> x) const { return sigmoid(decision(x)); }

double resolve_gamma(const TrainSet& train, const SvmParams& params) {
  if (params.gamma > 0.0) return params.gamma;
  const std::size_t n = train.size();
  const std::size_t d = train.n_features;
  double mean_var = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += train.features[i * d + j];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double diff = train.features[i * d + j] - mean;
      var += diff * diff;
    }
    mean_var += var / static_cast<double>(n);
  }
  mean_var /= static_cast<double>(d);
  if (mean_var <= 1e-12) return 1.0 / static_cast<double>(d);
  return 1.0 / (static_cast<double>(d) * mean_var);
}

namespace {

// Decision function convention: f(x) = sum_j alpha_j y_j K(x_j, x) + b.
class SmoSolver {
 public:
  SmoSolver(const TrainSet& train, const SvmParams& params, std::uint64_t seed)
      : train_(train),
        params_(params),
        n_(train.size()),
        d_(train.n_features),
        gamma_(resolve_gamma(train, params)),
        rng_(seed) {
    y_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) y_[i] = train.targets[i] != 0 ? 1.0 : -1.0;
    alpha_.assign(n_, 0.0);
    // With all alphas zero, f(x_i) = 0 and E_i = -y_i.
    error_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) error_[i] = -y_[i];

    norms_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      double s = 0.0;
      const double* row = train_.features.data() + i * d_;
      for (std::size_t j = 0; j < d_; ++j) s += row[j] * row[j];
      norms_[i] = s;
    }
    kernel_.assign(n_ * n_, 0.0f);
    for (std::size_t i = 0; i < n_; ++i) {
      const double* ri = train_.features.data() + i * d_;
      for (std::size_t j = 0; j <= i; ++j) {
        double dot = 0.0;
        const double* rj = train_.features.data() + j * d_;
        for (std::size_t k = 0; k < d_; ++k) dot += ri[k] * rj[k];
        const float v = static_cast<float>(std::exp(-gamma_ * (norms_[i] + norms_[j] - 2.0 * dot)));
        kernel_[i * n_ + j] = v;
        kernel_[j * n_ + i] = v;
      }
    }
  }

  void solve() {
    // The inner loop is Platt's alternation. After it stalls the bias is
    // re-derived from the converged alphas: with no free multiplier the
    // incremental b is only determined up to an interval and may make an
    // optimal alpha vector look KKT-violating, so a fresh bias (and exact
    // error recomputation) is needed before judging convergence.
    for (int round = 0; round < 3; ++round) {
      platt_loop();
      recompute_bias_and_errors();
      if (max_kkt_violation() <= params_.tolerance) break;
    }
  }

  SvmModel extract() const {
    SvmModel model;
    model.feature_dim = d_;
    model.gamma = gamma_;
    model.bias = bias_;
    for (std::size_t i = 0; i < n_; ++i) {
      if (alpha_[i] > 0.0) {
        const double* row = train_.features.data() + i * d_;
        model.support_vectors.insert(model.support_vectors.end(), row, row + d_);
        model.coefficients.push_back(alpha_[i] * y_[i]);
      }
    }
    return model;
  }

 private:
  void platt_loop() {
    bool examine_all = true;
    int passes = 0;
    while (passes < params_.max_passes) {
      std::size_t num_changed = 0;
      if (examine_all) {
        for (std::size_t i = 0; i < n_; ++i) num_changed += examine(i);
      } else {
        for (std::size_t i = 0; i < n_; ++i) {
          if (is_free(i)) num_changed += examine(i);
        }
      }
      ++passes;
      if (examine_all) {
        if (num_changed == 0) break;
        examine_all = false;
      } else if (num_changed == 0) {
        examine_all = true;
      }
    }
  }

  void recompute_bias_and_errors() {
    std::vector<double> g(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      if (alpha_[j] <= 0.0) continue;
      const double w = alpha_[j] * y_[j];
      const float* row = kernel_.data() + j * n_;
      for (std::size_t i = 0; i < n_; ++i) g[i] += w * static_cast<double>(row[i]);
    }
    double free_sum = 0.0;
    std::size_t free_count = 0;
    double lo = -1e300, hi = 1e300;
    for (std::size_t i = 0; i < n_; ++i) {
      const double target = y_[i] - g[i];
      if (is_free(i)) {
        free_sum += target;
        ++free_count;
      } else if ((y_[i] > 0.0) == (alpha_[i] <= 0.0)) {
        // y=+1 at zero or y=-1 at C: b must be at least y - g.
        lo = std::max(lo, target);
      } else {
        hi = std::min(hi, target);
      }
    }
    if (free_count > 0)
      bias_ = free_sum / static_cast<double>(free_count);
    else if (lo <= hi)
      bias_ = 0.5 * (lo + hi);
    else
      bias_ = 0.5 * (lo + hi);  // infeasible interval: best compromise
    for (std::size_t i = 0; i < n_; ++i) error_[i] = g[i] + bias_ - y_[i];
  }

  double max_kkt_violation() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double margin = y_[i] * (error_[i] + y_[i]);
      if (alpha_[i] <= 0.0)
        worst = std::max(worst, 1.0 - margin);
      else if (alpha_[i] >= params_.c)
        worst = std::max(worst, margin - 1.0);
      else
        worst = std::max(worst, std::abs(margin - 1.0));
    }
    return worst;
  }

  double kernel(std::size_t i, std::size_t j) const {
    return static_cast<double>(kernel_[i * n_ + j]);
  }

  bool is_free(std::size_t i) const { return alpha_[i] > 0.0 && alpha_[i] < params_.c; }

  std::size_t examine(std::size_t i2) {
    const double e2 = error_[i2];
    const double r2 = e2 * y_[i2];
    const bool violates = (r2 < -params_.tolerance && alpha_[i2] < params_.c) ||
                          (r2 > params_.tolerance && alpha_[i2] > 0.0);
    if (!violates) return 0;

    // Second-choice heuristic: maximize |E1 - E2| over free multipliers.
    std::size_t best = n_;
    double best_gap = -1.0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (!is_free(i)) continue;
      const double gap = std::abs(error_[i] - e2);
      if (gap > best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (best < n_ && take_step(best, i2)) return 1;

    // Then all free multipliers from a random offset, then everything.
    const std::size_t start1 = static_cast<std::size_t>(rng_.next_below(n_));
    for (std::size_t k = 0; k < n_; ++k) {
      const std::size_t i1 = (start1 + k) % n_;
      if (is_free(i1) && take_step(i1, i2)) return 1;
    }
    const std::size_t start2 = static_cast<std::size_t>(rng_.next_below(n_));
    for (std::size_t k = 0; k < n_; ++k) {
      const std::size_t i1 = (start2 + k) % n_;
      if (take_step(i1, i2)) return 1;
    }
    return 0;
  }

  bool take_step(std::size_t i1, std::size_t i2) {
    if (i1 == i2) return false;
    const double a1_old = alpha_[i1];
    const double a2_old = alpha_[i2];
    const double y1 = y_[i1];
    const double y2 = y_[i2];
    const double e1 = error_[i1];
    const double e2 = error_[i2];
    const double s = y1 * y2;
    const double c = params_.c;

    double low, high;
    if (y1 != y2) {
      low = std::max(0.0, a2_old - a1_old);
      high = std::min(c, c + a2_old - a1_old);
    } else {
      low = std::max(0.0, a1_old + a2_old - c);
      high = std::min(c, a1_old + a2_old);
    }
    if (low >= high) return false;

    const double k11 = kernel(i1, i1);
    const double k12 = kernel(i1, i2);
    const double k22 = kernel(i2, i2);
    const double eta = k11 + k22 - 2.0 * k12;

    double a2_new;
    if (eta > 0.0) {
      a2_new = a2_old + y2 * (e1 - e2) / eta;
      a2_new = std::clamp(a2_new, low, high);
    } else {
      // Flat/degenerate direction: evaluate the dual objective at both ends.
      const double f1 = e1 + y1;  // f(x1)
      const double f2 = e2 + y2;
      const double v1 = f1 - bias_ - y1 * a1_old * k11 - y2 * a2_old * k12;
      const double v2 = f2 - bias_ - y1 * a1_old * k12 - y2 * a2_old * k22;
      auto objective = [&](double a2) {
        const double a1 = a1_old + s * (a2_old - a2);
        return a1 + a2 - 0.5 * a1 * a1 * k11 - 0.5 * a2 * a2 * k22 - s * a1 * a2 * k12 -
               y1 * a1 * v1 - y2 * a2 * v2;
      };
      const double obj_low = objective(low);
      const double obj_high = objective(high);
      if (obj_low > obj_high + 1e-12)
        a2_new = low;
      else if (obj_high > obj_low + 1e-12)
        a2_new = high;
      else
        return false;
    }

    if (std::abs(a2_new - a2_old) < 1e-9 * (a2_new + a2_old + 1e-9)) return false;
    const double a1_new = a1_old + s * (a2_old - a2_new);

    const double d1 = y1 * (a1_new - a1_old);
    const double d2 = y2 * (a2_new - a2_old);
    const double b1 = bias_ - e1 - d1 * k11 - d2 * k12;
    const double b2 = bias_ - e2 - d1 * k12 - d2 * k22;
    double bias_new;
    if (a1_new > 0.0 && a1_new < c)
      bias_new = b1;
    else if (a2_new > 0.0 && a2_new < c)
      bias_new = b2;
    else
      bias_new = 0.5 * (b1 + b2);
    const double delta_b = bias_new - bias_;

    alpha_[i1] = a1_new;
    alpha_[i2] = a2_new;
    bias_ = bias_new;
    const float* row1 = kernel_.data() + i1 * n_;
    const float* row2 = kernel_.data() + i2 * n_;
    for (std::size_t k = 0; k < n_; ++k) {
      error_[k] += d1 * static_cast<double>(row1[k]) + d2 * static_cast<double>(row2[k]) + delta_b;
    }
    return true;
  }

  const TrainSet& train_;
  const SvmParams& params_;
  std::size_t n_;
  std::size_t d_;
  double gamma_;
  Rng rng_;
  double bias_ = 0.0;
  std::vector<double> y_;
  std::vector<double> alpha_;
  std::vector<double> error_;
  std::vector<double> norms_;
  std::vector<float> kernel_;
};

}  // namespace

SvmModel fit_svm(const TrainSet& train, const SvmParams& params, std::uint64_t seed) {
  bool has_pos = false, has_neg = false;
  for (std::uint8_t t : train.targets) (t != 0 ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg)
    throw data_error("svm_rbf: training data contains a single class");
  SmoSolver solver(train, params, seed);
  solver.solve();
  return solver.extract();
}

}  // namespace helpfuse
