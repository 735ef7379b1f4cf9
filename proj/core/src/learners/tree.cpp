#include "helpfuse/learners/tree.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "helpfuse/error.hpp"

namespace helpfuse {

void validate(const TrainSet& train) {
  if (train.targets.empty()) throw data_error("train set is empty");
  if (train.n_features == 0) throw data_error("train set has zero features");
  if (train.features.size() != train.targets.size() * train.n_features)
    throw data_error("train set: feature matrix size does not match row count");
  for (double v : train.features) {
    if (!std::isfinite(v)) throw data_error("train set: non-finite feature value");
  }
  for (std::uint8_t t : train.targets) {
    if (t > 1) throw data_error("train set: targets must be 0 or 1");
  }
}

double TreeModel::score(std::span<const double> x) const {
  const TreeNode* node = &nodes[0];
  while (node->left >= 0) {
    node = x[static_cast<std::size_t>(node->feature)] <= node->threshold
               ? &nodes[static_cast<std::size_t>(node->left)]
               : &nodes[static_cast<std::size_t>(node->right)];
  }
  return node->leaf_score;
}

namespace {

// Counting-based split finder for features with few distinct values (the
// detector streams are nearly ternary); features with many distinct values
// fall back to a sort-based scan. Both consider the same candidate
// thresholds (midpoints between consecutive distinct values present in the
// node) so the fitted tree is identical either way.
constexpr std::size_t kMaxBins = 64;

struct Split {
  int feature = -1;
  double threshold = 0.0;
  // Maximized quantity: sum over children of (pos^2 + neg^2) / n_child.
  // Larger is better; strictly-greater comparison makes the lowest feature
  // index and lowest threshold win ties.
  double goodness = -1.0;
  bool valid() const { return feature >= 0; }
};

double midpoint(double low, double high) {
  const double mid = low + (high - low) * 0.5;
  // Adjacent representable values can round the midpoint onto an endpoint;
  // pin the threshold to the low value so `x <= threshold` still separates.
  if (!(low < mid) || !(mid < high)) return low;
  return mid;
}

class TreeBuilder {
 public:
  TreeBuilder(const TrainSet& train, const TreeParams& params, int max_features, Rng& rng)
      : train_(train), params_(params), rng_(rng) {
    const std::size_t d = train.n_features;
    max_features_ = max_features <= 0 ? static_cast<int>(d)
                                      : std::min<int>(max_features, static_cast<int>(d));
    feature_order_.resize(d);
    std::iota(feature_order_.begin(), feature_order_.end(), 0u);
    subset_.reserve(d);
    build_bins();
  }

  TreeModel build(std::vector<std::uint32_t> rows) {
    TreeModel model;
    model.feature_dim = train_.n_features;
    rows_ = std::move(rows);
    struct Item {
      std::uint32_t lo, hi;
      int depth;
      std::int32_t node;
    };
    model.nodes.push_back(TreeNode{});
    std::vector<Item> stack;
    stack.push_back({0, static_cast<std::uint32_t>(rows_.size()), 0, 0});
    while (!stack.empty()) {
      const Item item = stack.back();
      stack.pop_back();
      std::uint64_t pos = 0;
      for (std::uint32_t i = item.lo; i < item.hi; ++i) pos += train_.targets[rows_[i]];
      const std::uint64_t n = item.hi - item.lo;
      TreeNode& placeholder = model.nodes[static_cast<std::size_t>(item.node)];
      placeholder.leaf_score = static_cast<double>(pos) / static_cast<double>(n);

      const bool can_split = item.depth < params_.max_depth &&
                             n >= static_cast<std::uint64_t>(params_.min_samples_split) &&
                             pos != 0 && pos != n;
      if (!can_split) continue;

      const Split split = find_best_split(item.lo, item.hi);
      if (!split.valid()) continue;

      const std::uint32_t mid = partition(item.lo, item.hi, split);
      const auto left_index = static_cast<std::int32_t>(model.nodes.size());
      model.nodes.push_back(TreeNode{});
      model.nodes.push_back(TreeNode{});
      TreeNode& node = model.nodes[static_cast<std::size_t>(item.node)];
      node.feature = split.feature;
      node.threshold = split.threshold;
      node.left = left_index;
      node.right = left_index + 1;
      stack.push_back({mid, item.hi, item.depth + 1, left_index + 1});
      stack.push_back({item.lo, mid, item.depth + 1, left_index});
    }
    return model;
  }

 private:
  void build_bins() {
    const std::size_t d = train_.n_features;
    const std::size_t n = train_.size();
    bin_values_.assign(d, {});
    bin_index_.assign(d * n, 0);
    std::vector<double> values(n);
    for (std::size_t f = 0; f < d; ++f) {
      for (std::size_t i = 0; i < n; ++i) values[i] = train_.features[i * d + f];
      std::vector<double> distinct = values;
      std::sort(distinct.begin(), distinct.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
      if (distinct.size() > kMaxBins) continue;  // leave empty: sort path
      for (std::size_t i = 0; i < n; ++i) {
        const auto it = std::lower_bound(distinct.begin(), distinct.end(), values[i]);
        bin_index_[f * n + i] =
            static_cast<std::uint8_t>(std::distance(distinct.begin(), it));
      }
      bin_values_[f] = std::move(distinct);
    }
  }

  const std::vector<std::uint32_t>& select_features() {
    const std::size_t d = train_.n_features;
    if (max_features_ >= static_cast<int>(d)) return feature_order_;
    for (int i = 0; i < max_features_; ++i) {
      const std::size_t j =
          static_cast<std::size_t>(i) +
          static_cast<std::size_t>(rng_.next_below(d - static_cast<std::size_t>(i)));
      std::swap(feature_order_[static_cast<std::size_t>(i)], feature_order_[j]);
    }
    subset_.assign(feature_order_.begin(), feature_order_.begin() + max_features_);
    std::sort(subset_.begin(), subset_.end());
    return subset_;
  }

  static double child_term(double pos, double neg) {
    const double n = pos + neg;
    return (pos * pos + neg * neg) / n;
  }

  Split find_best_split(std::uint32_t lo, std::uint32_t hi) {
    Split best;
    const std::size_t n_total = train_.size();
    const std::size_t d = train_.n_features;
    for (std::uint32_t f : select_features()) {
      const std::vector<double>& values = bin_values_[f];
      if (!values.empty()) {
        // Histogram path.
        const std::size_t bins = values.size();
        std::array<std::uint32_t, kMaxBins> pos{};
        std::array<std::uint32_t, kMaxBins> neg{};
        for (std::size_t b = 0; b < bins; ++b) pos[b] = neg[b] = 0;
        const std::uint8_t* idx = bin_index_.data() + static_cast<std::size_t>(f) * n_total;
        std::uint32_t total_pos = 0;
        for (std::uint32_t i = lo; i < hi; ++i) {
          const std::uint32_t row = rows_[i];
          const std::uint8_t b = idx[row];
          const std::uint8_t t = train_.targets[row];
          pos[b] += t;
          neg[b] += 1u - t;
          total_pos += t;
        }
        const std::uint32_t n = hi - lo;
        std::uint32_t left_pos = 0, left_neg = 0;
        int last_present = -1;
        for (std::size_t b = 0; b < bins; ++b) {
          const std::uint32_t here = pos[b] + neg[b];
          if (here == 0) continue;
          if (last_present >= 0) {
            const std::uint32_t left_n = left_pos + left_neg;
            const std::uint32_t right_n = n - left_n;
            if (left_n > 0 && right_n > 0) {
              const double goodness =
                  child_term(left_pos, left_neg) +
                  child_term(total_pos - left_pos, (n - total_pos) - left_neg);
              if (goodness > best.goodness) {
                best.goodness = goodness;
                best.feature = static_cast<int>(f);
                best.threshold =
                    midpoint(values[static_cast<std::size_t>(last_present)], values[b]);
              }
            }
          }
          left_pos += pos[b];
          left_neg += neg[b];
          last_present = static_cast<int>(b);
        }
      } else {
        // Sort path for wide features.
        sort_scratch_.clear();
        std::uint32_t total_pos = 0;
        for (std::uint32_t i = lo; i < hi; ++i) {
          const std::uint32_t row = rows_[i];
          const std::uint8_t t = train_.targets[row];
          sort_scratch_.push_back({train_.features[static_cast<std::size_t>(row) * d + f], t});
          total_pos += t;
        }
        std::sort(sort_scratch_.begin(), sort_scratch_.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        const std::uint32_t n = hi - lo;
        std::uint32_t left_pos = 0, left_neg = 0;
        for (std::size_t i = 0; i + 1 < sort_scratch_.size(); ++i) {
          left_pos += sort_scratch_[i].second;
          left_neg += 1u - sort_scratch_[i].second;
          if (sort_scratch_[i].first == sort_scratch_[i + 1].first) continue;
          const double goodness =
              child_term(left_pos, left_neg) +
              child_term(total_pos - left_pos, (n - total_pos) - left_neg);
          if (goodness > best.goodness) {
            best.goodness = goodness;
            best.feature = static_cast<int>(f);
            best.threshold = midpoint(sort_scratch_[i].first, sort_scratch_[i + 1].first);
          }
        }
      }
    }
    return best;
  }

  // Stable in-place partition: rows with x[feature] <= threshold move to the
  // front, preserving relative order on both sides so the build is
  // reproducible regardless of prior buffer state.
  std::uint32_t partition(std::uint32_t lo, std::uint32_t hi, const Split& split) {
    const std::size_t d = train_.n_features;
    const auto f = static_cast<std::size_t>(split.feature);
    partition_scratch_.clear();
    std::uint32_t write = lo;
    for (std::uint32_t i = lo; i < hi; ++i) {
      const std::uint32_t row = rows_[i];
      if (train_.features[static_cast<std::size_t>(row) * d + f] <= split.threshold) {
        rows_[write++] = row;
      } else {
        partition_scratch_.push_back(row);
      }
    }
    std::copy(partition_scratch_.begin(), partition_scratch_.end(), rows_.begin() + write);
    return write;
  }

  const TrainSet& train_;
  const TreeParams& params_;
  Rng& rng_;
  int max_features_ = 0;
  std::vector<std::uint32_t> rows_;
  std::vector<std::uint32_t> feature_order_;
  std::vector<std::uint32_t> subset_;
  std::vector<std::vector<double>> bin_values_;
  std::vector<std::uint8_t> bin_index_;
  std::vector<std::pair<double, std::uint8_t>> sort_scratch_;
  std::vector<std::uint32_t> partition_scratch_;
};

}  // namespace

TreeModel fit_tree(const TrainSet& train, const std::vector<std::uint32_t>& row_indices,
                   const TreeParams& params, int max_features, Rng& rng) {
  TreeBuilder builder(train, params, max_features, rng);
  return builder.build(row_indices);
}

TreeModel fit_tree(const TrainSet& train, const TreeParams& params) {
  Rng rng(0);
  std::vector<std::uint32_t> rows(train.size());
  std::iota(rows.begin(), rows.end(), 0u);
  return fit_tree(train, rows, params, 0, rng);
}

}  // namespace helpfuse
