#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "drivesent/features.hpp"
#include "drivesent/forest.hpp"
#include "drivesent/select.hpp"
#include "json.hpp"

namespace drivesent {

// Disjoint row-index sets covering [0, N), each sorted ascending.
struct FoldPlan {
  std::vector<std::vector<std::size_t>> folds;

  std::size_t k() const noexcept { return folds.size(); }
  // Every row not in fold `f`, ascending.
  std::vector<std::size_t> training_rows(std::size_t f) const;
};

// Per class (ascending), indices are shuffled with one RNG seeded by `seed`
// and dealt round-robin; the dealing position carries over between classes.
FoldPlan stratified_folds(std::span<const int> labels, int k, std::uint64_t seed);

// Rows are actual classes, columns predicted.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t classes) : n_(classes), cells_(classes * classes, 0) {}
  // Throws DimensionError unless `rows` is square.
  static ConfusionMatrix from_rows(const std::vector<std::vector<std::uint64_t>>& rows);

  void add(int actual, int predicted, std::uint64_t count = 1);
  void merge(const ConfusionMatrix& other);

  std::size_t classes() const noexcept { return n_; }
  std::uint64_t at(std::size_t actual, std::size_t predicted) const {
    return cells_[actual * n_ + predicted];
  }
  std::uint64_t total() const;
  std::uint64_t trace() const;
  std::uint64_t row_sum(std::size_t c) const;
  std::uint64_t col_sum(std::size_t c) const;

  nlohmann::json to_json() const;

 private:
  std::size_t n_;
  std::vector<std::uint64_t> cells_;
};

struct ClassMetrics {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  std::uint64_t support = 0;
};

struct Metrics {
  double accuracy = 0;
  std::vector<ClassMetrics> per_class;
  ClassMetrics weighted;  // support-weighted means; weighted.recall == accuracy
  ClassMetrics macro;
};

Metrics compute_metrics(const ConfusionMatrix& confusion);

enum class SelectionMode { PerFold, Global, None };

SelectionMode parse_selection_mode(const std::string& name);
std::string to_string(SelectionMode mode);

struct SelectionConfig {
  SelectionMode mode = SelectionMode::PerFold;
  Selection rule = Selection::above(0.0);
};

struct EvalReport {
  std::vector<std::string> classes;
  ConfusionMatrix confusion{0};
  Metrics metrics;
  std::vector<double> fold_accuracies;
  std::vector<std::size_t> fold_selected_features;
  nlohmann::json config;

  nlohmann::json to_json() const;
};

// k-fold stratified cross-validation of the forest. Feature selection is
// fit on each fold's training rows (PerFold), once on all rows (Global),
// or skipped.
EvalReport cross_validate(const FeatureMatrix& matrix, const ForestParams& forest, int k,
                          std::uint64_t seed, const SelectionConfig& selection);

// Predicts each fold's training-majority class.
EvalReport majority_baseline(const FeatureMatrix& matrix, int k, std::uint64_t seed);

}  // namespace drivesent
