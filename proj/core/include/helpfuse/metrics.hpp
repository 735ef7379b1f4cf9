#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace helpfuse {

struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }

  ConfusionMatrix& operator+=(const ConfusionMatrix& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    tn += o.tn;
    return *this;
  }
  friend ConfusionMatrix operator+(ConfusionMatrix a, const ConfusionMatrix& b) {
    a += b;
    return a;
  }
  bool operator==(const ConfusionMatrix&) const = default;
};

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// One plotted point. tag carries the window size or score threshold that
// produced it, depending on the curve construction.
struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
  double tag = 0.0;
};

enum class CurveKind { roc, pr };

// predictions/targets are 0/1. Throws std::invalid_argument on length
// mismatch or empty input.
ConfusionMatrix confusion(const std::vector<std::uint8_t>& predictions,
                          const std::vector<std::uint8_t>& targets);

// Degenerate 0/0 ratios are defined as 0.0, so the function is total.
Prf precision_recall_f1(const ConfusionMatrix& cm);

CurvePoint roc_point(const ConfusionMatrix& cm);  // (fpr, tpr)
CurvePoint pr_point(const ConfusionMatrix& cm);   // (recall, precision)

// Trapezoidal area under the polyline through the points, sorted internally
// by (x, y). ROC curves are anchored at (0,0) and (1,1); PR curves are
// extended horizontally to x=0 and x=1. Throws on an empty list.
double auc(std::vector<CurvePoint> points, CurveKind kind);

// One point per window size from that window's aggregated confusion matrix.
std::pair<std::vector<CurvePoint>, double> curve_over_windows(
    const std::map<int, ConfusionMatrix>& per_window, CurveKind kind);

// Conventional threshold-swept curve over raw scores for a fixed window;
// thresholds are the distinct score values, each point tagged with its
// threshold. This is the secondary curve mode; the window-parameterized
// construction above is the default.
std::vector<CurvePoint> threshold_sweep(const std::vector<double>& scores,
                                        const std::vector<std::uint8_t>& targets,
                                        CurveKind kind);

}  // namespace helpfuse
