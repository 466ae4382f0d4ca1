#include "drivesent/eval.hpp"

#include <algorithm>
#include <numeric>

#include "drivesent/error.hpp"
#include "drivesent/rng.hpp"

namespace drivesent {
namespace {

double ratio(std::uint64_t a, std::uint64_t b) {
  return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b);
}

double harmonic(double p, double r) { return p + r == 0 ? 0.0 : 2 * p * r / (p + r); }

nlohmann::json metrics_json(const ClassMetrics& m) {
  return {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"support", m.support}};
}

template <typename Fold>
EvalReport run_folds(const FeatureMatrix& matrix, int k, std::uint64_t seed, Fold&& fold) {
  if (matrix.rows() == 0) throw EmptyInputError("cannot cross-validate an empty matrix");
  const auto plan = stratified_folds(matrix.labels(), k, seed);
  EvalReport report;
  report.classes = matrix.classes();
  report.confusion = ConfusionMatrix(matrix.class_count());
  for (std::size_t f = 0; f < plan.k(); ++f) {
    const auto train_rows = plan.training_rows(f);
    const auto& test_rows = plan.folds[f];
    const auto predicted = fold(train_rows, test_rows, report);
    ConfusionMatrix cm(matrix.class_count());
    for (std::size_t i = 0; i < test_rows.size(); ++i) {
      cm.add(matrix.labels()[test_rows[i]], predicted[i]);
    }
    report.fold_accuracies.push_back(ratio(cm.trace(), cm.total()));
    report.confusion.merge(cm);
  }
  report.metrics = compute_metrics(report.confusion);
  return report;
}

}  // namespace

std::vector<std::size_t> FoldPlan::training_rows(std::size_t f) const {
  std::vector<std::size_t> out;
  for (std::size_t g = 0; g < folds.size(); ++g) {
    if (g != f) out.insert(out.end(), folds[g].begin(), folds[g].end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

FoldPlan stratified_folds(std::span<const int> labels, int k, std::uint64_t seed) {
  if (k < 2) throw ParameterError("cross-validation needs k >= 2");
  if (static_cast<std::size_t>(k) > labels.size()) {
    throw ParameterError("k = " + std::to_string(k) + " exceeds " + std::to_string(labels.size()) +
                         " rows");
  }
  int classes = 0;
  for (int y : labels) classes = std::max(classes, y + 1);
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(classes));
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

  Rng rng(seed);
  FoldPlan plan;
  plan.folds.resize(static_cast<std::size_t>(k));
  std::size_t position = 0;
  for (auto& members : by_class) {
    rng.shuffle(std::span(members));
    for (auto idx : members) plan.folds[position++ % plan.folds.size()].push_back(idx);
  }
  for (auto& f : plan.folds) std::sort(f.begin(), f.end());
  return plan;
}

ConfusionMatrix ConfusionMatrix::from_rows(const std::vector<std::vector<std::uint64_t>>& rows) {
  ConfusionMatrix cm(rows.size());
  for (std::size_t a = 0; a < rows.size(); ++a) {
    if (rows[a].size() != rows.size()) throw DimensionError("confusion matrix must be square");
    for (std::size_t p = 0; p < rows.size(); ++p) cm.cells_[a * cm.n_ + p] = rows[a][p];
  }
  return cm;
}

void ConfusionMatrix::add(int actual, int predicted, std::uint64_t count) {
  if (actual < 0 || predicted < 0 || static_cast<std::size_t>(actual) >= n_ ||
      static_cast<std::size_t>(predicted) >= n_) {
    throw IndexError("class index out of range in confusion matrix");
  }
  cells_[static_cast<std::size_t>(actual) * n_ + static_cast<std::size_t>(predicted)] += count;
}

void ConfusionMatrix::merge(const ConfusionMatrix& other) {
  if (other.n_ != n_) throw DimensionError("confusion matrices differ in size");
  for (std::size_t i = 0; i < cells_.size(); ++i) cells_[i] += other.cells_[i];
}

std::uint64_t ConfusionMatrix::total() const {
  return std::accumulate(cells_.begin(), cells_.end(), std::uint64_t{0});
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t t = 0;
  for (std::size_t c = 0; c < n_; ++c) t += at(c, c);
  return t;
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t c) const {
  std::uint64_t s = 0;
  for (std::size_t p = 0; p < n_; ++p) s += at(c, p);
  return s;
}

std::uint64_t ConfusionMatrix::col_sum(std::size_t c) const {
  std::uint64_t s = 0;
  for (std::size_t a = 0; a < n_; ++a) s += at(a, c);
  return s;
}

nlohmann::json ConfusionMatrix::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t a = 0; a < n_; ++a) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t p = 0; p < n_; ++p) row.push_back(at(a, p));
    rows.push_back(std::move(row));
  }
  return rows;
}

Metrics compute_metrics(const ConfusionMatrix& cm) {
  Metrics m;
  const auto N = cm.total();
  m.accuracy = ratio(cm.trace(), N);
  const std::size_t C = cm.classes();
  for (std::size_t c = 0; c < C; ++c) {
    ClassMetrics k;
    const auto tp = cm.at(c, c);
    k.support = cm.row_sum(c);
    k.precision = ratio(tp, cm.col_sum(c));
    k.recall = ratio(tp, k.support);
    k.f1 = harmonic(k.precision, k.recall);
    m.per_class.push_back(k);

    const double w = ratio(k.support, N);
    m.weighted.precision += w * k.precision;
    m.weighted.recall += w * k.recall;
    m.weighted.f1 += w * k.f1;
    if (C > 0) {
      m.macro.precision += k.precision / static_cast<double>(C);
      m.macro.recall += k.recall / static_cast<double>(C);
      m.macro.f1 += k.f1 / static_cast<double>(C);
    }
  }
  m.weighted.support = N;
  m.macro.support = N;
  return m;
}

SelectionMode parse_selection_mode(const std::string& name) {
  if (name == "per_fold" || name == "per-fold") return SelectionMode::PerFold;
  if (name == "global") return SelectionMode::Global;
  if (name == "none") return SelectionMode::None;
  throw ParameterError("unknown selection mode '" + name + "' (expected per_fold|global|none)");
}

std::string to_string(SelectionMode mode) {
  switch (mode) {
    case SelectionMode::PerFold: return "per_fold";
    case SelectionMode::Global: return "global";
    case SelectionMode::None: return "none";
  }
  return "per_fold";
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json per_class = nlohmann::json::object();
  for (std::size_t c = 0; c < classes.size() && c < metrics.per_class.size(); ++c) {
    per_class[classes[c]] = metrics_json(metrics.per_class[c]);
  }
  return {{"classes", classes},
          {"confusion", confusion.to_json()},
          {"accuracy", metrics.accuracy},
          {"weighted", metrics_json(metrics.weighted)},
          {"macro", metrics_json(metrics.macro)},
          {"per_class", std::move(per_class)},
          {"fold_accuracies", fold_accuracies},
          {"fold_selected_features", fold_selected_features},
          {"config", config}};
}

EvalReport cross_validate(const FeatureMatrix& matrix, const ForestParams& forest, int k,
                          std::uint64_t seed, const SelectionConfig& selection) {
  std::vector<std::size_t> global_columns;
  if (selection.mode == SelectionMode::Global) {
    global_columns = selected_columns(matrix, selection.rule);
  }
  auto report = run_folds(matrix, k, seed, [&](const std::vector<std::size_t>& train_rows,
                                                const std::vector<std::size_t>& test_rows,
                                                EvalReport& rep) {
    FeatureMatrix train = matrix.select_rows(train_rows);
    std::vector<std::size_t> columns;
    switch (selection.mode) {
      case SelectionMode::PerFold: columns = selected_columns(train, selection.rule); break;
      case SelectionMode::Global: columns = global_columns; break;
      case SelectionMode::None:
        columns.resize(matrix.cols());
        std::iota(columns.begin(), columns.end(), 0);
        break;
    }
    rep.fold_selected_features.push_back(columns.size());
    std::vector<int> predicted;
    if (columns.empty()) {
      // Nothing informative survived: fall back to the training majority.
      std::vector<std::size_t> counts(matrix.class_count(), 0);
      for (int y : train.labels()) ++counts[static_cast<std::size_t>(y)];
      const int majority =
          static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
      predicted.assign(test_rows.size(), majority);
      return predicted;
    }
    const auto model = ForestModel::train(train.select_columns(columns), forest);
    const auto test = matrix.select_rows(test_rows).select_columns(columns);
    return model.predict_batch(test);
  });
  report.config = {{"forest", forest.to_json()},
                   {"folds", k},
                   {"cv_seed", seed},
                   {"selection_mode", to_string(selection.mode)}};
  if (selection.rule.top_k) report.config["selection_k"] = *selection.rule.top_k;
  if (selection.rule.threshold) report.config["selection_threshold"] = *selection.rule.threshold;
  return report;
}

EvalReport majority_baseline(const FeatureMatrix& matrix, int k, std::uint64_t seed) {
  auto report = run_folds(matrix, k, seed, [&](const std::vector<std::size_t>& train_rows,
                                                const std::vector<std::size_t>& test_rows,
                                                EvalReport&) {
    std::vector<std::size_t> counts(matrix.class_count(), 0);
    for (auto r : train_rows) ++counts[static_cast<std::size_t>(matrix.labels()[r])];
    const int majority =
        static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
    return std::vector<int>(test_rows.size(), majority);
  });
  report.config = {{"classifier", "majority"}, {"folds", k}, {"cv_seed", seed}};
  return report;
}

}  // namespace drivesent
