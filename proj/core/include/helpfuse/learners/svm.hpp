#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "helpfuse/learners/tree.hpp"

namespace helpfuse {

// C-SVC with RBF kernel, trained by sequential minimal optimization.
struct SvmModel {
  std::size_t feature_dim = 0;
  double gamma = 0.0;
  double bias = 0.0;
  std::vector<double> support_vectors;  // row-major, one row per SV
  std::vector<double> coefficients;     // y_i * alpha_i per SV

  std::size_t n_support() const { return coefficients.size(); }
  double decision(std::span<const double> x) const;  // sum coef*K(sv, x) + bias
  double score(std::span<const double> x) const;     // sigmoid(decision)
};

// Requires both classes in the training set (data_error otherwise). The seed
// drives SMO's second-choice scan offsets; the converged model satisfies the
// KKT conditions within params.tolerance.
SvmModel fit_svm(const TrainSet& train, const SvmParams& params, std::uint64_t seed);

// gamma actually used for the given data when params.gamma == 0
// (1 / (d * mean feature variance), falling back to 1/d for constant data).
double resolve_gamma(const TrainSet& train, const SvmParams& params);

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma);

}  // namespace helpfuse
