#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "drivesent/features.hpp"
#include "json.hpp"

namespace drivesent {

enum class Criterion { InfoGain, Gini };

Criterion parse_criterion(const std::string& name);
std::string to_string(Criterion criterion);

struct ForestParams {
  int trees = 100;
  int m_try = 0;  // 0: floor(log2(features)) + 1
  Criterion criterion = Criterion::InfoGain;
  int min_leaf = 1;
  int max_depth = 0;  // 0: unlimited
  std::uint64_t seed = 1;
  bool bootstrap = true;
  unsigned threads = 0;  // 0: hardware concurrency; never affects results

  nlohmann::json to_json() const;
  static ForestParams from_json(const nlohmann::json& j);
};

// Features per split: explicit m_try, else floor(log2(m)) + 1; clamped to m.
int effective_m_try(const ForestParams& params, std::size_t features);

// Internal nodes send rows with value <= threshold left. Leaves (feature < 0)
// hold the class counts of the training rows that reached them.
struct TreeNode {
  int feature = -1;
  double threshold = 0;
  int left = -1;
  int right = -1;
  std::vector<int> counts;

  bool is_leaf() const noexcept { return feature < 0; }
};

class DecisionTree {
 public:
  DecisionTree() = default;
  explicit DecisionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  const TreeNode& leaf_for(std::span<const double> row) const;
  // Majority class of the leaf; ties go to the lowest class index.
  int vote(std::span<const double> row) const;
  int depth() const;

  nlohmann::json to_json() const;
  static DecisionTree from_json(const nlohmann::json& j);

 private:
  std::vector<TreeNode> nodes_;
};

class ForestModel {
 public:
  ForestModel() = default;
  ForestModel(ForestParams params, std::vector<std::string> classes,
              std::vector<std::string> feature_names, std::vector<DecisionTree> trees);

  // Throws EmptyInputError for a matrix without rows or columns.
  static ForestModel train(const FeatureMatrix& matrix, const ForestParams& params);

  // Plurality of tree votes; ties go to the lowest class index.
  int predict(std::span<const double> row) const;
  std::vector<int> predict_batch(const FeatureMatrix& matrix) const;

  const ForestParams& params() const noexcept { return params_; }
  const std::vector<std::string>& classes() const noexcept { return classes_; }
  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
  const std::vector<DecisionTree>& trees() const noexcept { return trees_; }
  // Non-fatal notes from training, e.g. a clamped m_try.
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  nlohmann::json to_json() const;
  static ForestModel from_json(const nlohmann::json& j);

 private:
  ForestParams params_;
  std::vector<std::string> classes_;
  std::vector<std::string> feature_names_;
  std::vector<DecisionTree> trees_;
  std::vector<std::string> warnings_;
};

}  // namespace drivesent
