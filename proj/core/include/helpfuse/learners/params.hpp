#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace helpfuse {

enum class Algorithm : int {
  svm_rbf = 0,
  logistic = 1,
  tree = 2,
  gaussian_nb = 3,
  forest = 4,
  random_baseline = 5,
};

const char* to_string(Algorithm algorithm);
std::optional<Algorithm> parse_algorithm(const std::string& tag);
// Human-facing name for rendered tables ("Random Forest", ...).
const char* display_name(Algorithm algorithm);

struct TreeParams {
  int max_depth = 20;
  int min_samples_split = 2;
};

struct ForestParams {
  int n_estimators = 1600;
  int max_depth = 20;
  bool bootstrap = true;
  // Features considered per split; 0 selects floor(sqrt(d)). Set to the full
  // dimension to make a 1-tree, no-bootstrap forest coincide with the plain
  // decision tree.
  int max_features = 0;
};

struct SvmParams {
  double c = 1.0;
  double gamma = 0.0;  // 0 selects 1 / (d * mean feature variance)
  double tolerance = 1e-3;
  int max_passes = 200;  // cap on SMO sweeps over the data
};

struct LogisticParams {
  double learning_rate = 0.1;
  double l2 = 1e-4;
  int max_epochs = 500;
  double tolerance = 1e-6;  // stop when the gradient sup-norm falls below this
};

struct NbParams {
  double variance_floor = 1e-9;
};

struct LearnerParams {
  ForestParams forest;
  SvmParams svm;
  LogisticParams logistic;
  TreeParams tree;
  NbParams nb;
  std::uint64_t seed = 0;  // default stream seed for standalone training
};

// Throws data_error when a count is non-positive or the variance floor is
// not strictly positive.
void validate(const LearnerParams& params);

}  // namespace helpfuse
