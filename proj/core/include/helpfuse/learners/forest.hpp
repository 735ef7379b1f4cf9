#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "helpfuse/learners/tree.hpp"

namespace helpfuse {

// Bagged CART ensemble. Every tree draws its own seed from the forest seed,
// so the fitted model does not depend on build order.
struct ForestModel {
  std::size_t feature_dim = 0;
  std::vector<TreeModel> trees;

  // Mean of the per-tree leaf scores. With pure leaves this equals the
  // fraction of trees voting true.
  double score(std::span<const double> x) const;
};

ForestModel fit_forest(const TrainSet& train, const ForestParams& params, std::uint64_t seed);

}  // namespace helpfuse
