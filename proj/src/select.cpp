#include "drivesent/select.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "drivesent/error.hpp"

namespace drivesent {
namespace {

constexpr std::size_t kMaxCategories = 32;
constexpr std::size_t kBins = 10;

double entropy_of_counts(const std::vector<std::size_t>& counts, std::size_t total) {
  if (total == 0) return 0.0;
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

int class_count(std::span<const int> labels) {
  int c = 0;
  for (int y : labels) {
    if (y < 0) throw IndexError("negative class index");
    c = std::max(c, y + 1);
  }
  return c;
}

}  // namespace

double entropy_bits(std::span<const int> labels) {
  std::vector<std::size_t> counts(static_cast<std::size_t>(class_count(labels)), 0);
  for (int y : labels) ++counts[static_cast<std::size_t>(y)];
  return entropy_of_counts(counts, labels.size());
}

std::vector<int> discretize(std::span<const double> column) {
  std::vector<double> sorted(column.begin(), column.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> distinct = sorted;
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  std::vector<double> edges;
  if (distinct.size() <= kMaxCategories) {
    edges = std::move(distinct);
  } else {
    // Upper bin edges at the ceil(iN/10)-th order statistics; value v lands in
    // the first bin whose edge is >= v.
    const std::size_t n = sorted.size();
    for (std::size_t i = 1; i < kBins; ++i) {
      const std::size_t rank = (i * n + kBins - 1) / kBins;  // 1-based
      edges.push_back(sorted[rank - 1]);
    }
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  }
  std::vector<int> cells(column.size());
  for (std::size_t i = 0; i < column.size(); ++i) {
    cells[i] = static_cast<int>(std::lower_bound(edges.begin(), edges.end(), column[i]) -
                                edges.begin());
  }
  return cells;
}

double information_gain(std::span<const double> column, std::span<const int> labels) {
  if (column.size() != labels.size()) {
    throw DimensionError("column has " + std::to_string(column.size()) + " rows, labels " +
                         std::to_string(labels.size()));
  }
  if (labels.empty()) throw DimensionError("information gain needs at least one row");
  const auto C = static_cast<std::size_t>(class_count(labels));
  const auto cells = discretize(column);
  const auto n_cells = static_cast<std::size_t>(*std::max_element(cells.begin(), cells.end()) + 1);

  std::vector<std::vector<std::size_t>> joint(n_cells, std::vector<std::size_t>(C, 0));
  std::vector<std::size_t> cell_total(n_cells, 0), class_total(C, 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    ++joint[cells[i]][labels[i]];
    ++cell_total[cells[i]];
    ++class_total[labels[i]];
  }
  const double N = static_cast<double>(labels.size());
  double conditional = 0.0;
  for (std::size_t v = 0; v < n_cells; ++v) {
    if (cell_total[v] == 0) continue;
    conditional += (static_cast<double>(cell_total[v]) / N) * entropy_of_counts(joint[v], cell_total[v]);
  }
  const double gain = entropy_of_counts(class_total, labels.size()) - conditional;
  return std::max(0.0, gain);
}

std::vector<RankedFeature> rank_features(const FeatureMatrix& matrix) {
  if (matrix.rows() == 0) throw EmptyInputError("cannot rank features of an empty matrix");
  std::vector<RankedFeature> out;
  out.reserve(matrix.cols());
  for (std::size_t c = 0; c < matrix.cols(); ++c) {
    const auto col = matrix.column(c);
    out.push_back({matrix.specs()[c], c, information_gain(col, matrix.labels()), 0});
  }
  std::sort(out.begin(), out.end(), [](const RankedFeature& a, const RankedFeature& b) {
    return a.gain != b.gain ? a.gain > b.gain : a.spec.name < b.spec.name;
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = static_cast<int>(i + 1);
  return out;
}

std::vector<std::size_t> selected_columns(const std::vector<RankedFeature>& ranking,
                                          const Selection& selection) {
  if (selection.top_k.has_value() == selection.threshold.has_value()) {
    throw ParameterError("selection needs exactly one of k or threshold");
  }
  std::vector<std::size_t> keep;
  if (selection.top_k) {
    if (*selection.top_k <= 0) throw ParameterError("selection k must be positive");
    const auto k = std::min(ranking.size(), static_cast<std::size_t>(*selection.top_k));
    for (std::size_t i = 0; i < k; ++i) keep.push_back(ranking[i].column);
  } else {
    for (const auto& r : ranking) {
      if (r.gain > *selection.threshold) keep.push_back(r.column);
    }
  }
  std::sort(keep.begin(), keep.end());
  return keep;
}

std::vector<std::size_t> selected_columns(const FeatureMatrix& matrix, const Selection& selection) {
  return selected_columns(rank_features(matrix), selection);
}

FeatureMatrix select_top(const FeatureMatrix& matrix, const Selection& selection) {
  return matrix.select_columns(selected_columns(matrix, selection));
}

nlohmann::json ranking_json(const std::vector<RankedFeature>& ranking,
                            std::optional<std::size_t> limit) {
  nlohmann::json out = nlohmann::json::array();
  const auto n = std::min(ranking.size(), limit.value_or(ranking.size()));
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(
        {{"name", ranking[i].spec.name}, {"gain_bits", ranking[i].gain}, {"rank", ranking[i].rank}});
  }
  return out;
}

}  // namespace drivesent
