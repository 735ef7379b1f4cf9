#pragma once

#include <span>
#include <vector>

#include "helpfuse/learners/tree.hpp"

namespace helpfuse {

struct LogisticModel {
  std::vector<double> weights;
  double bias = 0.0;

  std::size_t feature_dim() const { return weights.size(); }
  double score(std::span<const double> x) const;  // sigmoid(w.x + b)
};

// Full-batch gradient descent on the mean log-loss with L2 penalty on the
// weights (not the bias). Deterministic: weights start at zero and the data
// order is fixed, so no seed is involved.
LogisticModel fit_logistic(const TrainSet& train, const LogisticParams& params);

double sigmoid(double z);

// Exposed for gradient checking: regularized mean log-loss and its analytic
// gradient at (weights, bias).
double logistic_loss(const TrainSet& train, std::span<const double> weights, double bias,
                     double l2);
void logistic_gradient(const TrainSet& train, std::span<const double> weights, double bias,
                       double l2, std::span<double> grad_weights, double& grad_bias);

}  // namespace helpfuse
