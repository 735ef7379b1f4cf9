#include "helpfuse/learners/logistic.hpp"

#include <algorithm>
#include <cmath>

namespace helpfuse {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double LogisticModel::score(std::span<const double> x) const {
  double z = bias;
  for (std::size_t i = 0; i < weights.size(); ++i) z += weights[i] * x[i];
  return sigmoid(z);
}

namespace {

// log(1 + exp(z)) without overflow.
double log1p_exp(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

}  // namespace

double logistic_loss(const TrainSet& train, std::span<const double> weights, double bias,
                     double l2) {
  const std::size_t n = train.size();
  const std::size_t d = train.n_features;
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double z = bias;
    const double* row = train.features.data() + i * d;
    for (std::size_t j = 0; j < d; ++j) z += weights[j] * row[j];
    // y in {0,1}: loss_i = log(1+exp(z)) - y*z
    loss += log1p_exp(z) - (train.targets[i] != 0 ? z : 0.0);
  }
  loss /= static_cast<double>(n);
  double penalty = 0.0;
  for (double w : weights) penalty += w * w;
  return loss + 0.5 * l2 * penalty;
}

void logistic_gradient(const TrainSet& train, std::span<const double> weights, double bias,
                       double l2, std::span<double> grad_weights, double& grad_bias) {
  const std::size_t n = train.size();
  const std::size_t d = train.n_features;
  std::fill(grad_weights.begin(), grad_weights.end(), 0.0);
  grad_bias = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double z = bias;
    const double* row = train.features.data() + i * d;
    for (std::size_t j = 0; j < d; ++j) z += weights[j] * row[j];
    const double err = sigmoid(z) - (train.targets[i] != 0 ? 1.0 : 0.0);
    for (std::size_t j = 0; j < d; ++j) grad_weights[j] += err * row[j];
    grad_bias += err;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < d; ++j) grad_weights[j] = grad_weights[j] * inv_n + l2 * weights[j];
  grad_bias *= inv_n;
}

LogisticModel fit_logistic(const TrainSet& train, const LogisticParams& params) {
  const std::size_t d = train.n_features;
  LogisticModel model;
  model.weights.assign(d, 0.0);
  model.bias = 0.0;

  std::vector<double> grad(d, 0.0);
  double grad_bias = 0.0;
  for (int epoch = 0; epoch < params.max_epochs; ++epoch) {
    logistic_gradient(train, model.weights, model.bias, params.l2, grad, grad_bias);
    double sup = std::abs(grad_bias);
    for (double g : grad) sup = std::max(sup, std::abs(g));
    if (sup < params.tolerance) break;
    for (std::size_t j = 0; j < d; ++j) model.weights[j] -= params.learning_rate * grad[j];
    model.bias -= params.learning_rate * grad_bias;
  }
  return model;
}

}  // namespace helpfuse
