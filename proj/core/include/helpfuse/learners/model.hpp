#pragma once

#include <atomic>
#include <cstdint>
#include <span>
#include <string>
#include <variant>

#include "helpfuse/learners/forest.hpp"
#include "helpfuse/learners/logistic.hpp"
#include "helpfuse/learners/naive_bayes.hpp"
#include "helpfuse/learners/params.hpp"
#include "helpfuse/learners/svm.hpp"
#include "helpfuse/learners/tree.hpp"

namespace helpfuse {

// Coin-flip reference model. Each score() call consumes the next value of a
// counter-addressed uniform stream, so the model is deterministic given its
// stream position; concurrent calls are race-free but may interleave.
struct BaselineModel {
  std::uint64_t seed = 0;
  std::size_t feature_dim = 0;

  BaselineModel() = default;
  BaselineModel(std::uint64_t s, std::size_t dim) : seed(s), feature_dim(dim) {}
  BaselineModel(const BaselineModel& o)
      : seed(o.seed), feature_dim(o.feature_dim), position_(o.position_.load()) {}
  BaselineModel& operator=(const BaselineModel& o) {
    seed = o.seed;
    feature_dim = o.feature_dim;
    position_.store(o.position_.load());
    return *this;
  }

  std::uint64_t position() const { return position_.load(); }
  void set_position(std::uint64_t p) { position_.store(p); }
  double next_score() const { return unit_value_at(seed, position_.fetch_add(1)); }

 private:
  mutable std::atomic<std::uint64_t> position_{0};
};

// Uniform surface over the five learners plus the baseline. score() is in
// [0,1] for any input of matching dimension; predict() is score >= 0.5 with
// ties predicting true.
class Model {
 public:
  Model() = default;

  Algorithm algorithm() const;
  std::size_t feature_dim() const;

  double score(std::span<const double> x) const;
  bool predict(std::span<const double> x) const { return score(x) >= 0.5; }

  // Versioned JSON serialization (format documented in the README).
  std::string to_json() const;
  static Model from_json(const std::string& text);

  using Impl = std::variant<SvmModel, LogisticModel, TreeModel, GaussianNbModel, ForestModel,
                            BaselineModel>;
  explicit Model(Impl impl) : impl_(std::move(impl)) {}
  const Impl& impl() const { return impl_; }

 private:
  Impl impl_;
};

// Deterministic given (train, params, seed). svm_rbf and logistic require
// both classes; NaN features are rejected for every algorithm.
Model fit(Algorithm algorithm, const TrainSet& train, const LearnerParams& params,
          std::uint64_t seed);

// Baseline constructed without training data (predictions are fair coin
// flips). feature_dim 0 accepts any input dimension.
Model random_baseline(std::uint64_t seed, std::size_t feature_dim = 0);

}  // namespace helpfuse
