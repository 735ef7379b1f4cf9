#include "helpfuse/learners/model.hpp"

#include <stdexcept>

#include "helpfuse/error.hpp"
#include "json.hpp"

namespace helpfuse {

using ordered_json = nlohmann::ordered_json;

const char* to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::svm_rbf: return "svm_rbf";
    case Algorithm::logistic: return "logistic";
    case Algorithm::tree: return "tree";
    case Algorithm::gaussian_nb: return "gaussian_nb";
    case Algorithm::forest: return "forest";
    case Algorithm::random_baseline: return "random_baseline";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(const std::string& tag) {
  for (Algorithm a : {Algorithm::svm_rbf, Algorithm::logistic, Algorithm::tree,
                      Algorithm::gaussian_nb, Algorithm::forest, Algorithm::random_baseline}) {
    if (tag == to_string(a)) return a;
  }
  return std::nullopt;
}

const char* display_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::svm_rbf: return "SVM";
    case Algorithm::logistic: return "Logistic Regression";
    case Algorithm::tree: return "Decision Tree";
    case Algorithm::gaussian_nb: return "Naive Bayes";
    case Algorithm::forest: return "Random Forest";
    case Algorithm::random_baseline: return "Random (baseline)";
  }
  return "unknown";
}

void validate(const LearnerParams& params) {
  if (params.forest.n_estimators <= 0) throw data_error("forest.n_estimators must be positive");
  if (params.forest.max_depth <= 0) throw data_error("forest.max_depth must be positive");
  if (params.forest.max_features < 0) throw data_error("forest.max_features must be >= 0");
  if (params.svm.c <= 0.0) throw data_error("svm.c must be positive");
  if (params.svm.gamma < 0.0) throw data_error("svm.gamma must be >= 0");
  if (params.svm.tolerance <= 0.0) throw data_error("svm.tolerance must be positive");
  if (params.svm.max_passes <= 0) throw data_error("svm.max_passes must be positive");
  if (params.logistic.learning_rate <= 0.0)
    throw data_error("logistic.learning_rate must be positive");
  if (params.logistic.l2 < 0.0) throw data_error("logistic.l2 must be >= 0");
  if (params.logistic.max_epochs < 0) throw data_error("logistic.max_epochs must be >= 0");
  if (params.tree.max_depth <= 0) throw data_error("tree.max_depth must be positive");
  if (params.tree.min_samples_split < 2)
    throw data_error("tree.min_samples_split must be >= 2");
  if (params.nb.variance_floor <= 0.0) throw data_error("nb.variance_floor must be positive");
}

Algorithm Model::algorithm() const {
  return static_cast<Algorithm>(impl_.index());
}

std::size_t Model::feature_dim() const {
  return std::visit(
      [](const auto& m) -> std::size_t {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, SvmModel> || std::is_same_v<T, TreeModel> ||
                      std::is_same_v<T, ForestModel>) {
          return m.feature_dim;
        } else if constexpr (std::is_same_v<T, BaselineModel>) {
          return m.feature_dim;
        } else {
          return m.feature_dim();
        }
      },
      impl_);
}

double Model::score(std::span<const double> x) const {
  const std::size_t dim = feature_dim();
  if (dim != 0 && x.size() != dim)
    throw std::invalid_argument("score: input dimension " + std::to_string(x.size()) +
                                " does not match model dimension " + std::to_string(dim));
  return std::visit(
      [&x](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BaselineModel>) {
          return m.next_score();
        } else {
          return m.score(x);
        }
      },
      impl_);
}

Model fit(Algorithm algorithm, const TrainSet& train, const LearnerParams& params,
          std::uint64_t seed) {
  validate(params);
  validate(train);
  switch (algorithm) {
    case Algorithm::svm_rbf:
      return Model(fit_svm(train, params.svm, seed));
    case Algorithm::logistic: {
      bool has_pos = false, has_neg = false;
      for (std::uint8_t t : train.targets) (t != 0 ? has_pos : has_neg) = true;
      if (!has_pos || !has_neg)
        throw data_error("logistic: training data contains a single class");
      return Model(fit_logistic(train, params.logistic));
    }
    case Algorithm::tree:
      return Model(fit_tree(train, params.tree));
    case Algorithm::gaussian_nb:
      return Model(fit_gaussian_nb(train, params.nb));
    case Algorithm::forest:
      return Model(fit_forest(train, params.forest, seed));
    case Algorithm::random_baseline:
      return random_baseline(seed, train.n_features);
  }
  throw std::invalid_argument("fit: unknown algorithm");
}

Model random_baseline(std::uint64_t seed, std::size_t feature_dim) {
  return Model(BaselineModel(seed, feature_dim));
}

namespace {

ordered_json tree_to_json(const TreeModel& tree) {
  ordered_json nodes = ordered_json::array();
  for (const TreeNode& n : tree.nodes) {
    nodes.push_back({n.feature, n.threshold, n.left, n.right, n.leaf_score});
  }
  return {{"feature_dim", tree.feature_dim}, {"nodes", std::move(nodes)}};
}

TreeModel tree_from_json(const ordered_json& j) {
  TreeModel tree;
  tree.feature_dim = j.at("feature_dim").get<std::size_t>();
  for (const auto& n : j.at("nodes")) {
    TreeNode node;
    node.feature = n.at(0).get<int>();
    node.threshold = n.at(1).get<double>();
    node.left = n.at(2).get<std::int32_t>();
    node.right = n.at(3).get<std::int32_t>();
    node.leaf_score = n.at(4).get<double>();
    tree.nodes.push_back(node);
  }
  return tree;
}

}  // namespace

std::string Model::to_json() const {
  ordered_json j;
  j["format_version"] = 1;
  j["algorithm"] = to_string(algorithm());
  std::visit(
      [&j](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, SvmModel>) {
          j["model"] = {{"feature_dim", m.feature_dim},
                        {"gamma", m.gamma},
                        {"bias", m.bias},
                        {"support_vectors", m.support_vectors},
                        {"coefficients", m.coefficients}};
        } else if constexpr (std::is_same_v<T, LogisticModel>) {
          j["model"] = {{"weights", m.weights}, {"bias", m.bias}};
        } else if constexpr (std::is_same_v<T, TreeModel>) {
          j["model"] = tree_to_json(m);
        } else if constexpr (std::is_same_v<T, GaussianNbModel>) {
          j["model"] = {{"log_prior", {m.log_prior[0], m.log_prior[1]}},
                        {"class_present", {m.class_present[0], m.class_present[1]}},
                        {"mean0", m.mean[0]},
                        {"mean1", m.mean[1]},
                        {"variance0", m.variance[0]},
                        {"variance1", m.variance[1]}};
        } else if constexpr (std::is_same_v<T, ForestModel>) {
          ordered_json trees = ordered_json::array();
          for (const TreeModel& t : m.trees) trees.push_back(tree_to_json(t));
          j["model"] = {{"feature_dim", m.feature_dim}, {"trees", std::move(trees)}};
        } else {
          j["model"] = {{"seed", m.seed},
                        {"feature_dim", m.feature_dim},
                        {"position", m.position()}};
        }
      },
      impl_);
  return j.dump();
}

Model Model::from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw data_error(std::string("model: cannot parse JSON: ") + e.what());
  }
  try {
    if (j.at("format_version").get<int>() != 1)
      throw data_error("model: unsupported format_version");
    const std::string tag = j.at("algorithm").get<std::string>();
    const auto algorithm = parse_algorithm(tag);
    if (!algorithm) throw data_error("model: unknown algorithm '" + tag + "'");
    const ordered_json& m = j.at("model");
    switch (*algorithm) {
      case Algorithm::svm_rbf: {
        SvmModel svm;
        svm.feature_dim = m.at("feature_dim").get<std::size_t>();
        svm.gamma = m.at("gamma").get<double>();
        svm.bias = m.at("bias").get<double>();
        svm.support_vectors = m.at("support_vectors").get<std::vector<double>>();
        svm.coefficients = m.at("coefficients").get<std::vector<double>>();
        return Model(std::move(svm));
      }
      case Algorithm::logistic: {
        LogisticModel lm;
        lm.weights = m.at("weights").get<std::vector<double>>();
        lm.bias = m.at("bias").get<double>();
        return Model(std::move(lm));
      }
      case Algorithm::tree:
        return Model(tree_from_json(m));
      case Algorithm::gaussian_nb: {
        GaussianNbModel nb;
        nb.log_prior[0] = m.at("log_prior").at(0).get<double>();
        nb.log_prior[1] = m.at("log_prior").at(1).get<double>();
        nb.class_present[0] = m.at("class_present").at(0).get<bool>();
        nb.class_present[1] = m.at("class_present").at(1).get<bool>();
        nb.mean[0] = m.at("mean0").get<std::vector<double>>();
        nb.mean[1] = m.at("mean1").get<std::vector<double>>();
        nb.variance[0] = m.at("variance0").get<std::vector<double>>();
        nb.variance[1] = m.at("variance1").get<std::vector<double>>();
        return Model(std::move(nb));
      }
      case Algorithm::forest: {
        ForestModel forest;
        forest.feature_dim = m.at("feature_dim").get<std::size_t>();
        for (const auto& t : m.at("trees")) forest.trees.push_back(tree_from_json(t));
        return Model(std::move(forest));
      }
      case Algorithm::random_baseline: {
        BaselineModel baseline(m.at("seed").get<std::uint64_t>(),
                               m.at("feature_dim").get<std::size_t>());
        baseline.set_position(m.at("position").get<std::uint64_t>());
        return Model(std::move(baseline));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw data_error(std::string("model: malformed JSON: ") + e.what());
  }
  throw data_error("model: unknown algorithm");
}

}  // namespace helpfuse
