#pragma once

#include <optional>
#include <span>
#include <vector>

#include "drivesent/features.hpp"
#include "json.hpp"

namespace drivesent {

// Shannon entropy in bits of a label vector.
double entropy_bits(std::span<const int> labels);

// Maps column values to partition cells: distinct values when there are at
// most 32 of them, otherwise 10 equal-frequency bins.
std::vector<int> discretize(std::span<const double> column);

// H(labels) - sum_v (N_v / N) H(labels | column = v), in bits.
double information_gain(std::span<const double> column, std::span<const int> labels);

struct RankedFeature {
  FeatureSpec spec;
  std::size_t column = 0;  // index in the ranked matrix
  double gain = 0;
  int rank = 0;  // 1-based
};

// Gain descending, ties by feature name ascending.
std::vector<RankedFeature> rank_features(const FeatureMatrix& matrix);

// Either the k best columns or every column with gain > threshold.
struct Selection {
  std::optional<int> top_k;
  std::optional<double> threshold;

  static Selection keep_top(int k) { return {k, std::nullopt}; }
  static Selection above(double threshold) { return {std::nullopt, threshold}; }
};

// Surviving column indices in original column order.
std::vector<std::size_t> selected_columns(const std::vector<RankedFeature>& ranking,
                                          const Selection& selection);
std::vector<std::size_t> selected_columns(const FeatureMatrix& matrix, const Selection& selection);

FeatureMatrix select_top(const FeatureMatrix& matrix, const Selection& selection);

// [{"name", "gain_bits", "rank"}], optionally truncated to `limit` entries.
nlohmann::json ranking_json(const std::vector<RankedFeature>& ranking,
                            std::optional<std::size_t> limit = std::nullopt);

}  // namespace drivesent
