#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "helpfuse/learners/params.hpp"
#include "helpfuse/rng.hpp"

namespace helpfuse {

// Row-major feature matrix with 0/1 targets.
struct TrainSet {
  std::size_t n_features = 0;
  std::vector<double> features;
  std::vector<std::uint8_t> targets;

  std::size_t size() const { return targets.size(); }
  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * n_features, n_features};
  }
  void add_row(std::span<const double> x, std::uint8_t target) {
    features.insert(features.end(), x.begin(), x.end());
    targets.push_back(target);
  }
};

// Throws data_error on count mismatch or non-finite feature values.
void validate(const TrainSet& train);

struct TreeNode {
  // Internal nodes: feature/threshold with children; leaves: left == -1 and
  // leaf_score holding the positive fraction of the training rows that
  // reached the node.
  int feature = -1;
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  double leaf_score = 0.0;
};

struct TreeModel {
  std::size_t feature_dim = 0;
  std::vector<TreeNode> nodes;

  double score(std::span<const double> x) const;
};

// CART with Gini impurity. Thresholds are midpoints between consecutive
// distinct values present in a node; equal-gain ties are broken by lowest
// feature index then lowest threshold. max_features = 0 considers every
// feature; otherwise a uniform subset of that size is drawn per node from
// rng (the random-forest case).
TreeModel fit_tree(const TrainSet& train, const std::vector<std::uint32_t>& row_indices,
                   const TreeParams& params, int max_features, Rng& rng);

TreeModel fit_tree(const TrainSet& train, const TreeParams& params);

}  // namespace helpfuse
