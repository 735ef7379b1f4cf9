#include "helpfuse/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace helpfuse {

namespace {

double safe_ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

ConfusionMatrix confusion(const std::vector<std::uint8_t>& predictions,
                          const std::vector<std::uint8_t>& targets) {
  if (predictions.size() != targets.size())
    throw std::invalid_argument("confusion: prediction/target length mismatch");
  if (predictions.empty()) throw std::invalid_argument("confusion: empty input");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const bool p = predictions[i] != 0;
    const bool t = targets[i] != 0;
    if (p && t)
      ++cm.tp;
    else if (p && !t)
      ++cm.fp;
    else if (!p && t)
      ++cm.fn;
    else
      ++cm.tn;
  }
  return cm;
}

Prf precision_recall_f1(const ConfusionMatrix& cm) {
  Prf out;
  out.precision = safe_ratio(static_cast<double>(cm.tp),
                             static_cast<double>(cm.tp + cm.fp));
  out.recall = safe_ratio(static_cast<double>(cm.tp),
                          static_cast<double>(cm.tp + cm.fn));
  out.f1 = safe_ratio(2.0 * out.precision * out.recall, out.precision + out.recall);
  return out;
}

CurvePoint roc_point(const ConfusionMatrix& cm) {
  CurvePoint p;
  p.x = safe_ratio(static_cast<double>(cm.fp), static_cast<double>(cm.fp + cm.tn));
  p.y = safe_ratio(static_cast<double>(cm.tp), static_cast<double>(cm.tp + cm.fn));
  return p;
}

CurvePoint pr_point(const ConfusionMatrix& cm) {
  const Prf prf = precision_recall_f1(cm);
  CurvePoint p;
  p.x = prf.recall;
  p.y = prf.precision;
  return p;
}

double auc(std::vector<CurvePoint> points, CurveKind kind) {
  if (points.empty()) throw std::invalid_argument("auc: empty point list");
  std::sort(points.begin(), points.end(), [](const CurvePoint& a, const CurvePoint& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  });

  std::vector<CurvePoint> path;
  path.reserve(points.size() + 2);
  if (kind == CurveKind::roc) {
    path.push_back({0.0, 0.0, 0.0});
    path.insert(path.end(), points.begin(), points.end());
    path.push_back({1.0, 1.0, 0.0});
  } else {
    // Horizontal extension keeps the result order-independent and avoids
    // optimistic interpolation toward (0, 1).
    path.push_back({0.0, points.front().y, 0.0});
    path.insert(path.end(), points.begin(), points.end());
    path.push_back({1.0, points.back().y, 0.0});
  }

  double area = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    area += (path[i].x - path[i - 1].x) * (path[i].y + path[i - 1].y) * 0.5;
  }
  return area;
}

std::pair<std::vector<CurvePoint>, double> curve_over_windows(
    const std::map<int, ConfusionMatrix>& per_window, CurveKind kind) {
  if (per_window.empty())
    throw std::invalid_argument("curve_over_windows: no windows");
  std::vector<CurvePoint> points;
  points.reserve(per_window.size());
  for (const auto& [window, cm] : per_window) {
    CurvePoint p = kind == CurveKind::roc ? roc_point(cm) : pr_point(cm);
    p.tag = static_cast<double>(window);
    points.push_back(p);
  }
  const double area = auc(points, kind);
  return {std::move(points), area};
}

std::vector<CurvePoint> threshold_sweep(const std::vector<double>& scores,
                                        const std::vector<std::uint8_t>& targets,
                                        CurveKind kind) {
  if (scores.size() != targets.size())
    throw std::invalid_argument("threshold_sweep: score/target length mismatch");
  if (scores.empty()) throw std::invalid_argument("threshold_sweep: empty input");

  std::vector<double> thresholds = scores;
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  std::vector<CurvePoint> points;
  points.reserve(thresholds.size());
  for (double theta : thresholds) {
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const bool pred = scores[i] >= theta;
      const bool t = targets[i] != 0;
      if (pred && t)
        ++cm.tp;
      else if (pred && !t)
        ++cm.fp;
      else if (!pred && t)
        ++cm.fn;
      else
        ++cm.tn;
    }
    CurvePoint p = kind == CurveKind::roc ? roc_point(cm) : pr_point(cm);
    p.tag = theta;
    points.push_back(p);
  }
  return points;
}

}  // namespace helpfuse
