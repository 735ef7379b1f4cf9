#include "doctest.h"

#include <cmath>

#include "helpfuse/metrics.hpp"
#include "helpfuse/rng.hpp"
#include "oracles.hpp"

using namespace helpfuse;

TEST_CASE("confusion counts partition the instances") {
  const ConfusionMatrix cm = confusion({1, 1, 0}, {1, 0, 0});
  CHECK(cm.tp == 1);
  CHECK(cm.fp == 1);
  CHECK(cm.fn == 0);
  CHECK(cm.tn == 1);

  const ConfusionMatrix all_correct = confusion({1, 0, 1}, {1, 0, 1});
  CHECK(all_correct.fp == 0);
  CHECK(all_correct.fn == 0);

  const ConfusionMatrix all_missed = confusion({0, 0, 0, 0}, {1, 1, 1, 1});
  CHECK(all_missed.tp == 0);
  CHECK(all_missed.fn == 4);

  CHECK_THROWS_AS(confusion({}, {}), std::invalid_argument);
  CHECK_THROWS_AS(confusion({1}, {1, 0}), std::invalid_argument);
}

TEST_CASE("precision/recall/f1 reproduces the task model triple") {
  const Prf prf = precision_recall_f1({44, 26, 56, 0});
  CHECK(std::round(prf.precision * 100) / 100 == doctest::Approx(0.63));
  CHECK(std::round(prf.recall * 100) / 100 == doctest::Approx(0.44));
  CHECK(std::round(prf.f1 * 100) / 100 == doctest::Approx(0.52));
}

TEST_CASE("degenerate ratios fall back to zero") {
  const Prf zero = precision_recall_f1({0, 0, 0, 10});
  CHECK(zero.precision == 0.0);
  CHECK(zero.recall == 0.0);
  CHECK(zero.f1 == 0.0);

  const Prf perfect = precision_recall_f1({25, 0, 0, 10});
  CHECK(perfect.precision == 1.0);
  CHECK(perfect.recall == 1.0);
  CHECK(perfect.f1 == 1.0);
}

TEST_CASE("roc and pr points") {
  const CurvePoint roc = roc_point({1, 1, 0, 1});
  CHECK(roc.x == doctest::Approx(0.5));
  CHECK(roc.y == doctest::Approx(1.0));

  const CurvePoint pr = pr_point({44, 26, 56, 0});
  CHECK(pr.x == doctest::Approx(44.0 / 100.0));
  CHECK(pr.y == doctest::Approx(44.0 / 70.0));
}

TEST_CASE("auc anchors and known values") {
  // Points exactly on the diagonal integrate to 1/2.
  std::vector<CurvePoint> diagonal;
  for (int i = 1; i <= 9; ++i) {
    const double v = i / 10.0;
    diagonal.push_back({v, v, 0.0});
  }
  CHECK(auc(diagonal, CurveKind::roc) == doctest::Approx(0.5).epsilon(1e-12));

  // A single perfect point with anchors covers the unit square.
  CHECK(auc({{0.0, 1.0, 0.0}}, CurveKind::roc) == doctest::Approx(1.0));

  // A flat precision line extends horizontally to both ends.
  std::vector<CurvePoint> flat = {{0.2, 0.45, 0.0}, {0.5, 0.45, 0.0}, {0.9, 0.45, 0.0}};
  CHECK(auc(flat, CurveKind::pr) == doctest::Approx(0.45));

  CHECK_THROWS_AS(auc({}, CurveKind::roc), std::invalid_argument);
}

TEST_CASE("auc is permutation invariant and bounded") {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<CurvePoint> points;
    const int n = 1 + static_cast<int>(rng.next_below(20));
    for (int i = 0; i < n; ++i) points.push_back({rng.next_double(), rng.next_double(), 0.0});
    const double roc = auc(points, CurveKind::roc);
    const double pr = auc(points, CurveKind::pr);
    CHECK(roc >= 0.0);
    CHECK(roc <= 1.0);
    CHECK(pr >= 0.0);
    CHECK(pr <= 1.0);
    std::vector<CurvePoint> permuted = points;
    rng.shuffle(permuted);
    CHECK(auc(permuted, CurveKind::roc) == doctest::Approx(roc).epsilon(1e-12));
    CHECK(auc(permuted, CurveKind::pr) == doctest::Approx(pr).epsilon(1e-12));
  }
}

TEST_CASE("metrics match the brute-force oracles") {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    ConfusionMatrix cm{rng.next_below(1000), rng.next_below(1000), rng.next_below(1000),
                       rng.next_below(1000)};
    if (cm.total() == 0) cm.tn = 1;
    const Prf prf = precision_recall_f1(cm);
    const oracles::PrfRef ref = oracles::prf_reference(cm.tp, cm.fp, cm.fn);
    CHECK(std::abs(prf.precision - ref.precision) < 1e-12);
    CHECK(std::abs(prf.recall - ref.recall) < 1e-12);
    CHECK(std::abs(prf.f1 - ref.f1) < 1e-12);
  }
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<CurvePoint> points;
    const int n = 1 + static_cast<int>(rng.next_below(30));
    for (int i = 0; i < n; ++i) points.push_back({rng.next_double(), rng.next_double(), 0.0});
    CHECK(std::abs(auc(points, CurveKind::roc) - oracles::auc_reference(points, true)) < 1e-12);
    CHECK(std::abs(auc(points, CurveKind::pr) - oracles::auc_reference(points, false)) < 1e-12);
  }
}

TEST_CASE("confusion aggregation is a homomorphism") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::uint8_t> p1, t1, p2, t2;
    const int n1 = 1 + static_cast<int>(rng.next_below(50));
    const int n2 = 1 + static_cast<int>(rng.next_below(50));
    for (int i = 0; i < n1; ++i) {
      p1.push_back(rng.next_below(2) != 0);
      t1.push_back(rng.next_below(2) != 0);
    }
    for (int i = 0; i < n2; ++i) {
      p2.push_back(rng.next_below(2) != 0);
      t2.push_back(rng.next_below(2) != 0);
    }
    std::vector<std::uint8_t> p = p1, t = t1;
    p.insert(p.end(), p2.begin(), p2.end());
    t.insert(t.end(), t2.begin(), t2.end());
    CHECK(confusion(p, t) == confusion(p1, t1) + confusion(p2, t2));
  }
}

TEST_CASE("curve_over_windows emits one point per window") {
  std::map<int, ConfusionMatrix> per_window;
  for (int w = 1; w <= 50; ++w)
    per_window[w] = {static_cast<std::uint64_t>(10 + w), 5, 20, 65};
  const auto [points, area] = curve_over_windows(per_window, CurveKind::roc);
  CHECK(points.size() == 50);
  CHECK(points.front().tag == doctest::Approx(1.0));
  CHECK(points.back().tag == doctest::Approx(50.0));
  CHECK(area >= 0.0);
  CHECK(area <= 1.0);

  // Identical matrices collapse to a single-point curve.
  std::map<int, ConfusionMatrix> same;
  for (int w = 1; w <= 5; ++w) same[w] = {10, 10, 10, 70};
  const auto [same_points, same_area] = curve_over_windows(same, CurveKind::roc);
  const double single = auc({roc_point({10, 10, 10, 70})}, CurveKind::roc);
  CHECK(same_area == doctest::Approx(single).epsilon(1e-12));

  const auto [one_point, one_area] = curve_over_windows({{3, {10, 10, 10, 70}}}, CurveKind::pr);
  CHECK(one_point.size() == 1);
  CHECK(one_area >= 0.0);
}

TEST_CASE("threshold sweep is invariant under monotone score transforms") {
  Rng rng(77);
  std::vector<double> scores;
  std::vector<std::uint8_t> targets;
  for (int i = 0; i < 300; ++i) {
    scores.push_back(rng.next_double());
    targets.push_back(rng.next_below(2) != 0);
  }
  const auto base = threshold_sweep(scores, targets, CurveKind::roc);
  std::vector<double> transformed;
  for (double s : scores) transformed.push_back(std::tanh(3.0 * s) + s * s * 0.1);
  const auto mapped = threshold_sweep(transformed, targets, CurveKind::roc);
  REQUIRE(base.size() == mapped.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    CHECK(base[i].x == doctest::Approx(mapped[i].x).epsilon(1e-12));
    CHECK(base[i].y == doctest::Approx(mapped[i].y).epsilon(1e-12));
  }
}
