#include "doctest.h"

#include <set>

#include "helpfuse/learners/model.hpp"
#include "helpfuse/rng.hpp"

using namespace helpfuse;

namespace {

TrainSet make_train(std::size_t d, std::initializer_list<std::pair<std::vector<double>, int>> rows) {
  TrainSet train;
  train.n_features = d;
  for (const auto& [x, y] : rows) train.add_row(x, static_cast<std::uint8_t>(y));
  return train;
}

TrainSet random_unique_rows(Rng& rng, std::size_t n, std::size_t d) {
  TrainSet train;
  train.n_features = d;
  std::set<std::vector<double>> seen;
  while (train.size() < n) {
    std::vector<double> row(d);
    for (double& v : row) v = rng.next_double();
    if (!seen.insert(row).second) continue;
    train.add_row(row, rng.next_below(2) != 0);
  }
  return train;
}

double training_accuracy(const TreeModel& model, const TrainSet& train) {
  std::size_t correct = 0;
  for (std::size_t i = 0; i < train.size(); ++i) {
    const bool pred = model.score(train.row(i)) >= 0.5;
    correct += pred == (train.targets[i] != 0);
  }
  return static_cast<double>(correct) / static_cast<double>(train.size());
}

}  // namespace

TEST_CASE("tree separates linearly separable data at depth 20") {
  Rng rng(41);
  TrainSet train;
  train.n_features = 2;
  for (int i = 0; i < 100; ++i) {
    const double a = rng.next_double();
    const double b = rng.next_double();
    train.add_row(std::vector<double>{a, b}, a + b > 1.0);
  }
  TreeParams params;  // depth 20
  const TreeModel model = fit_tree(train, params);
  CHECK(training_accuracy(model, train) == 1.0);
}

TEST_CASE("tree with unlimited depth memorizes distinct rows") {
  Rng rng(43);
  for (int trial = 0; trial < 5; ++trial) {
    const TrainSet train = random_unique_rows(rng, 64, 3);
    TreeParams params;
    params.max_depth = 1 << 28;
    const TreeModel model = fit_tree(train, params);
    CHECK(training_accuracy(model, train) == 1.0);
  }
}

TEST_CASE("tree leaf score is the positive fraction") {
  // Identical rows cannot be split: the root is a leaf holding 3/4.
  const TrainSet train = make_train(
      1, {{{0.5}, 1}, {{0.5}, 1}, {{0.5}, 1}, {{0.5}, 0}});
  const TreeModel model = fit_tree(train, TreeParams{});
  REQUIRE(model.nodes.size() == 1);
  CHECK(model.score(std::vector<double>{0.5}) == doctest::Approx(0.75));
}

TEST_CASE("tree ties break toward the lowest feature and threshold") {
  // Both features separate the data perfectly; feature 0 must win.
  const TrainSet train = make_train(2, {{{0.0, 0.0}, 0}, {{1.0, 1.0}, 1}});
  const TreeModel model = fit_tree(train, TreeParams{});
  REQUIRE(model.nodes.size() == 3);
  CHECK(model.nodes[0].feature == 0);
  CHECK(model.nodes[0].threshold == doctest::Approx(0.5));
}

TEST_CASE("forest trained on all-true targets scores 1 everywhere") {
  Rng rng(47);
  TrainSet train;
  train.n_features = 3;
  for (int i = 0; i < 30; ++i) {
    train.add_row(std::vector<double>{rng.next_double(), rng.next_double(), rng.next_double()},
                  1);
  }
  ForestParams params;
  params.n_estimators = 25;
  const ForestModel model = fit_forest(train, params, 9);
  for (int i = 0; i < 10; ++i) {
    const std::vector<double> x{rng.next_double(), rng.next_double(), rng.next_double()};
    CHECK(model.score(x) == 1.0);
  }
}

TEST_CASE("a 1-tree forest without bootstrap degenerates to the tree") {
  Rng rng(53);
  TrainSet train;
  train.n_features = 4;
  for (int i = 0; i < 120; ++i) {
    std::vector<double> row{rng.next_double(), rng.next_double(), rng.next_double(),
                            rng.next_double()};
    train.add_row(row, row[1] > 0.6 || row[3] < 0.2);
  }
  ForestParams fp;
  fp.n_estimators = 1;
  fp.bootstrap = false;
  fp.max_features = 4;  // consider every feature, as the plain tree does
  const ForestModel forest = fit_forest(train, fp, 1234);
  TreeParams tp;
  const TreeModel tree = fit_tree(train, tp);
  for (int i = 0; i < 200; ++i) {
    const std::vector<double> x{rng.next_double(), rng.next_double(), rng.next_double(),
                                rng.next_double()};
    CHECK(forest.score(x) == tree.score(x));
  }
}

TEST_CASE("forest fits are reproducible bit for bit") {
  Rng rng(59);
  TrainSet train;
  train.n_features = 5;
  for (int i = 0; i < 80; ++i) {
    std::vector<double> row(5);
    for (double& v : row) v = rng.next_below(3) * 0.5;  // ternary like detector data
    train.add_row(row, rng.next_below(2) != 0);
  }
  LearnerParams params;
  params.forest.n_estimators = 40;
  const Model a = fit(Algorithm::forest, train, params, 777);
  const Model b = fit(Algorithm::forest, train, params, 777);
  CHECK(a.to_json() == b.to_json());
  const Model c = fit(Algorithm::forest, train, params, 778);
  CHECK(a.to_json() != c.to_json());
}
