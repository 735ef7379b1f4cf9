#include "helpfuse/learners/naive_bayes.hpp"

#include <cmath>
#include <numbers>

namespace helpfuse {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2*pi)

}  // namespace

double GaussianNbModel::score(std::span<const double> x) const {
  if (!class_present[0] && !class_present[1]) return 0.5;
  if (!class_present[1]) return 0.0;
  if (!class_present[0]) return 1.0;

  double log_like[2];
  for (int c = 0; c < 2; ++c) {
    double ll = log_prior[c];
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double var = variance[c][j];
      const double diff = x[j] - mean[c][j];
      ll += -0.5 * (kLog2Pi + std::log(var) + diff * diff / var);
    }
    log_like[c] = ll;
  }
  // Normalize in log space.
  const double m = std::max(log_like[0], log_like[1]);
  const double p0 = std::exp(log_like[0] - m);
  const double p1 = std::exp(log_like[1] - m);
  return p1 / (p0 + p1);
}

GaussianNbModel fit_gaussian_nb(const TrainSet& train, const NbParams& params) {
  const std::size_t n = train.size();
  const std::size_t d = train.n_features;
  GaussianNbModel model;
  std::size_t counts[2] = {0, 0};
  for (int c = 0; c < 2; ++c) {
    model.mean[c].assign(d, 0.0);
    model.variance[c].assign(d, 0.0);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const int c = train.targets[i] != 0 ? 1 : 0;
    ++counts[c];
    const double* row = train.features.data() + i * d;
    for (std::size_t j = 0; j < d; ++j) model.mean[c][j] += row[j];
  }
  for (int c = 0; c < 2; ++c) {
    model.class_present[c] = counts[c] > 0;
    if (!model.class_present[c]) continue;
    for (std::size_t j = 0; j < d; ++j) model.mean[c][j] /= static_cast<double>(counts[c]);
    model.log_prior[c] = std::log(static_cast<double>(counts[c]) / static_cast<double>(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const int c = train.targets[i] != 0 ? 1 : 0;
    const double* row = train.features.data() + i * d;
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = row[j] - model.mean[c][j];
      model.variance[c][j] += diff * diff;
    }
  }
  for (int c = 0; c < 2; ++c) {
    if (!model.class_present[c]) continue;
    for (std::size_t j = 0; j < d; ++j) {
      model.variance[c][j] =
          std::max(model.variance[c][j] / static_cast<double>(counts[c]), params.variance_floor);
    }
  }
  return model;
}

}  // namespace helpfuse
