#include "helpfuse/learners/forest.hpp"

#include <cmath>
#include <numeric>

namespace helpfuse {

double ForestModel::score(std::span<const double> x) const {
  double sum = 0.0;
  for (const TreeModel& tree : trees) sum += tree.score(x);
  return sum / static_cast<double>(trees.size());
}

ForestModel fit_forest(const TrainSet& train, const ForestParams& params, std::uint64_t seed) {
  ForestModel model;
  model.feature_dim = train.n_features;
  model.trees.reserve(static_cast<std::size_t>(params.n_estimators));

  const int max_features =
      params.max_features > 0
          ? params.max_features
          : std::max(1, static_cast<int>(std::sqrt(static_cast<double>(train.n_features))));
  TreeParams tree_params;
  tree_params.max_depth = params.max_depth;

  const std::size_t n = train.size();
  std::vector<std::uint32_t> identity(n);
  std::iota(identity.begin(), identity.end(), 0u);

  for (int t = 0; t < params.n_estimators; ++t) {
    Rng rng(mix_seed({seed, static_cast<std::uint64_t>(t)}));
    if (params.bootstrap) {
      std::vector<std::uint32_t> sample(n);
      for (std::size_t i = 0; i < n; ++i)
        sample[i] = static_cast<std::uint32_t>(rng.next_below(n));
      model.trees.push_back(fit_tree(train, sample, tree_params, max_features, rng));
    } else {
      model.trees.push_back(fit_tree(train, identity, tree_params, max_features, rng));
    }
  }
  return model;
}

}  // namespace helpfuse
