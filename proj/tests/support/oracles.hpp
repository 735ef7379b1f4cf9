#pragma once

// Independent reference implementations used to check the library. These are
// deliberately written from the definitions, not by calling the code under
// test.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "helpfuse/detectors.hpp"
#include "helpfuse/metrics.hpp"

namespace oracles {

struct PrfRef {
  double precision;
  double recall;
  double f1;
};

inline PrfRef prf_reference(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn) {
  const double tpd = static_cast<double>(tp);
  const double p = (tp + fp) == 0 ? 0.0 : tpd / static_cast<double>(tp + fp);
  const double r = (tp + fn) == 0 ? 0.0 : tpd / static_cast<double>(tp + fn);
  const double f1 = (p + r) == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
  return {p, r, f1};
}

// Trapezoidal area with its own insertion sort and explicit anchor handling.
inline double auc_reference(std::vector<helpfuse::CurvePoint> points, bool roc) {
  for (std::size_t i = 1; i < points.size(); ++i) {
    helpfuse::CurvePoint key = points[i];
    std::size_t j = i;
    while (j > 0 && (points[j - 1].x > key.x ||
                     (points[j - 1].x == key.x && points[j - 1].y > key.y))) {
      points[j] = points[j - 1];
      --j;
    }
    points[j] = key;
  }
  std::vector<std::pair<double, double>> path;
  if (roc) {
    path.push_back({0.0, 0.0});
    for (const auto& p : points) path.push_back({p.x, p.y});
    path.push_back({1.0, 1.0});
  } else {
    path.push_back({0.0, points.front().y});
    for (const auto& p : points) path.push_back({p.x, p.y});
    path.push_back({1.0, points.back().y});
  }
  double area = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const double dx = path[i].first - path[i - 1].first;
    area += dx * 0.5 * (path[i].second + path[i - 1].second);
  }
  return area;
}

// ----- SVM references ------------------------------------------------------

struct SvmProblem {
  std::vector<std::vector<double>> x;
  std::vector<double> y;  // +1 / -1
  double c = 1.0;
  double gamma = 1.0;

  std::size_t size() const { return y.size(); }
  double kernel(std::size_t i, std::size_t j) const {
    double dist = 0.0;
    for (std::size_t k = 0; k < x[i].size(); ++k) {
      const double d = x[i][k] - x[j][k];
      dist += d * d;
    }
    return std::exp(-gamma * dist);
  }
};

inline double dual_objective(const SvmProblem& prob, const std::vector<double>& alpha) {
  double obj = 0.0;
  for (std::size_t i = 0; i < prob.size(); ++i) obj += alpha[i];
  for (std::size_t i = 0; i < prob.size(); ++i) {
    for (std::size_t j = 0; j < prob.size(); ++j) {
      obj -= 0.5 * alpha[i] * alpha[j] * prob.y[i] * prob.y[j] * prob.kernel(i, j);
    }
  }
  return obj;
}

// Exact maximizer of the dual by enumerating active sets: every multiplier is
// pinned at 0, pinned at C, or free; free ones solve the stationarity system
// with the equality constraint via a dense solve. Feasible candidates are
// compared on the objective. Practical for n <= ~10.
inline double best_dual_objective(const SvmProblem& prob) {
  const std::size_t n = prob.size();
  const std::size_t configs = static_cast<std::size_t>(std::pow(3.0, static_cast<double>(n)));
  double best = -1e300;

  std::vector<int> state(n);  // 0 = at zero, 1 = at C, 2 = free
  std::vector<double> alpha(n);
  for (std::size_t code = 0; code < configs; ++code) {
    std::size_t rest = code;
    std::size_t free_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      state[i] = static_cast<int>(rest % 3);
      rest /= 3;
      if (state[i] == 2) ++free_count;
    }
    // Solve for the free alphas and the multiplier of the equality
    // constraint: for free i,  sum_j Q_ij a_j + y_i * lambda = 1, with
    // sum_i y_i a_i = 0, where Q_ij = y_i y_j K_ij.
    const std::size_t m = free_count + 1;
    std::vector<double> a(m * m, 0.0);
    std::vector<double> b(m, 0.0);
    std::vector<std::size_t> free_idx;
    for (std::size_t i = 0; i < n; ++i) {
      if (state[i] == 2) free_idx.push_back(i);
    }
    for (std::size_t r = 0; r < free_count; ++r) {
      const std::size_t i = free_idx[r];
      double rhs = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (state[j] == 1) rhs -= prob.y[i] * prob.y[j] * prob.kernel(i, j) * prob.c;
      }
      for (std::size_t ccol = 0; ccol < free_count; ++ccol) {
        const std::size_t j = free_idx[ccol];
        a[r * m + ccol] = prob.y[i] * prob.y[j] * prob.kernel(i, j);
      }
      a[r * m + free_count] = prob.y[i];
      b[r] = rhs;
    }
    {
      double rhs = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (state[j] == 1) rhs -= prob.y[j] * prob.c;
      }
      for (std::size_t ccol = 0; ccol < free_count; ++ccol)
        a[free_count * m + ccol] = prob.y[free_idx[ccol]];
      a[free_count * m + free_count] = 0.0;
      b[free_count] = rhs;
    }
    // Gaussian elimination with partial pivoting.
    bool singular = false;
    for (std::size_t col = 0; col < m && !singular; ++col) {
      std::size_t pivot = col;
      for (std::size_t r = col + 1; r < m; ++r) {
        if (std::abs(a[r * m + col]) > std::abs(a[pivot * m + col])) pivot = r;
      }
      if (std::abs(a[pivot * m + col]) < 1e-12) {
        singular = true;
        break;
      }
      if (pivot != col) {
        for (std::size_t k = 0; k < m; ++k) std::swap(a[pivot * m + k], a[col * m + k]);
        std::swap(b[pivot], b[col]);
      }
      for (std::size_t r = 0; r < m; ++r) {
        if (r == col) continue;
        const double factor = a[r * m + col] / a[col * m + col];
        for (std::size_t k = col; k < m; ++k) a[r * m + k] -= factor * a[col * m + k];
        b[r] -= factor * b[col];
      }
    }
    if (singular) continue;
    bool feasible = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (state[i] == 0)
        alpha[i] = 0.0;
      else if (state[i] == 1)
        alpha[i] = prob.c;
    }
    for (std::size_t r = 0; r < free_count; ++r) {
      const double v = b[r] / a[r * m + r];
      if (!(v >= -1e-9 && v <= prob.c + 1e-9)) {
        feasible = false;
        break;
      }
      alpha[free_idx[r]] = std::clamp(v, 0.0, prob.c);
    }
    if (!feasible) continue;
    double balance = 0.0;
    for (std::size_t i = 0; i < n; ++i) balance += prob.y[i] * alpha[i];
    if (std::abs(balance) > 1e-7) continue;
    best = std::max(best, dual_objective(prob, alpha));
  }
  return best;
}

// Largest KKT violation of (alpha, bias) for the soft-margin dual.
inline double kkt_violation(const SvmProblem& prob, const std::vector<double>& alpha,
                            double bias) {
  double worst = 0.0;
  for (std::size_t i = 0; i < prob.size(); ++i) {
    double f = bias;
    for (std::size_t j = 0; j < prob.size(); ++j)
      f += alpha[j] * prob.y[j] * prob.kernel(i, j);
    const double margin = prob.y[i] * f;
    if (alpha[i] <= 1e-12) {
      worst = std::max(worst, 1.0 - margin);  // need margin >= 1
    } else if (alpha[i] >= prob.c - 1e-12) {
      worst = std::max(worst, margin - 1.0);  // need margin <= 1
    } else {
      worst = std::max(worst, std::abs(margin - 1.0));
    }
  }
  return worst;
}

// ----- information / stream statistics --------------------------------------

// Plug-in mutual information (nats) between a binary label and a discrete
// pattern.
inline double mutual_information(const std::vector<int>& labels,
                                 const std::vector<int>& patterns) {
  const double n = static_cast<double>(labels.size());
  std::map<int, double> p_label, p_pattern;
  std::map<std::pair<int, int>, double> joint;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    p_label[labels[i]] += 1.0;
    p_pattern[patterns[i]] += 1.0;
    joint[{labels[i], patterns[i]}] += 1.0;
  }
  double mi = 0.0;
  for (const auto& [key, count] : joint) {
    const double pxy = count / n;
    const double px = p_label[key.first] / n;
    const double py = p_pattern[key.second] / n;
    mi += pxy * std::log(pxy / (px * py));
  }
  return mi;
}

// Empirical precision/recall of one detector component thresholded at 0.5.
inline PrfRef stream_component_prf(const std::vector<helpfuse::SessionDecisions>& streams,
                                   std::size_t component) {
  std::uint64_t tp = 0, fp = 0, fn = 0;
  for (const auto& sd : streams) {
    for (const auto& d : sd.stream) {
      const bool fire = d.vec.component(component) >= 0.5;
      const bool help = d.help != 0;
      if (fire && help)
        ++tp;
      else if (fire && !help)
        ++fp;
      else if (!fire && help)
        ++fn;
    }
  }
  return prf_reference(tp, fp, fn);
}

inline double stream_prevalence(const std::vector<helpfuse::SessionDecisions>& streams) {
  std::uint64_t positives = 0, total = 0;
  for (const auto& sd : streams) {
    for (const auto& d : sd.stream) {
      positives += d.help;
      ++total;
    }
  }
  return static_cast<double>(positives) / static_cast<double>(total);
}

}  // namespace oracles
