#pragma once

#include <span>
#include <vector>

#include "helpfuse/learners/tree.hpp"

namespace helpfuse {

// Gaussian naive Bayes with a variance floor; the floor keeps constant
// features (all-zero padding columns at large window sizes) from producing
// zero-variance singularities.
struct GaussianNbModel {
  double log_prior[2] = {0.0, 0.0};  // -inf encoded as a large negative value
  bool class_present[2] = {false, false};
  std::vector<double> mean[2];
  std::vector<double> variance[2];

  std::size_t feature_dim() const { return mean[0].size(); }
  // Normalized positive posterior.
  double score(std::span<const double> x) const;
};

GaussianNbModel fit_gaussian_nb(const TrainSet& train, const NbParams& params);

}  // namespace helpfuse
