#include "drivesent/forest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "drivesent/error.hpp"
#include "drivesent/rng.hpp"

namespace drivesent {
namespace {

// Gains at or below this are treated as zero.
constexpr double kGainEpsilon = 1e-12;
// Columns whose values are all integers in [0, kSmallMax] are split by
// histogram instead of sorting.
constexpr double kSmallMax = 64;

double impurity(std::span<const int> counts, int total, Criterion criterion) {
  if (total == 0) return 0.0;
  const double n = total;
  double acc = 0.0;
  if (criterion == Criterion::InfoGain) {
    for (int c : counts) {
      if (c == 0) continue;
      const double p = c / n;
      acc -= p * std::log2(p);
    }
    return acc;
  }
  for (int c : counts) {
    const double p = c / n;
    acc += p * p;
  }
  return 1.0 - acc;
}

// Column-major copy of the training matrix.
struct TrainingData {
  std::size_t rows = 0;
  std::size_t cols = 0;
  int classes = 0;
  std::vector<double> values;  // cols x rows
  std::vector<int> labels;
  std::vector<int> small_max;  // -1 when the column needs sorting

  explicit TrainingData(const FeatureMatrix& m)
      : rows(m.rows()), cols(m.cols()), classes(static_cast<int>(m.class_count())),
        values(m.rows() * m.cols()), labels(m.labels()), small_max(m.cols(), 0) {
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) values[c * rows + r] = m.at(r, c);
    }
    for (std::size_t c = 0; c < cols; ++c) {
      const double* col = &values[c * rows];
      int hi = 0;
      for (std::size_t r = 0; r < rows; ++r) {
        const double v = col[r];
        if (!(v >= 0 && v <= kSmallMax && v == std::floor(v))) {
          hi = -1;
          break;
        }
        hi = std::max(hi, static_cast<int>(v));
      }
      small_max[c] = hi;
    }
  }

  double value(std::size_t c, int r) const { return values[c * rows + static_cast<std::size_t>(r)]; }
};

struct Split {
  int feature = -1;
  double threshold = 0;
  double gain = -1;

  // Larger gain wins; ties go to the lower feature index, then threshold.
  bool better_than(const Split& o) const {
    if (gain != o.gain) return gain > o.gain;
    if (feature != o.feature) return o.feature < 0 || feature < o.feature;
    return threshold < o.threshold;
  }
};

class TreeGrower {
 public:
  TreeGrower(const TrainingData& data, const ForestParams& params, int m_try, std::uint64_t tree)
      : data_(data), params_(params), m_try_(m_try), rng_(stream_seed(params.seed, tree)) {}

  DecisionTree grow() {
    const auto n = data_.rows;
    rows_.resize(n);
    if (params_.bootstrap) {
      for (auto& r : rows_) r = static_cast<int>(rng_.below(n));
    } else {
      std::iota(rows_.begin(), rows_.end(), 0);
    }
    features_.resize(data_.cols);
    std::iota(features_.begin(), features_.end(), 0);
    C_ = static_cast<std::size_t>(data_.classes);
    left_.resize(C_);
    right_.resize(C_);

    struct Pending {
      int node;
      std::size_t begin, end;
      int depth;
    };
    std::vector<Pending> stack{{0, 0, n, 0}};
    nodes_.emplace_back();
    while (!stack.empty()) {
      const auto p = stack.back();
      stack.pop_back();
      std::vector<int> counts(C_, 0);
      for (auto i = p.begin; i < p.end; ++i) ++counts[data_.labels[rows_[i]]];
      const int size = static_cast<int>(p.end - p.begin);
      const bool pure = std::count_if(counts.begin(), counts.end(), [](int c) { return c > 0; }) <= 1;
      const bool depth_cap = params_.max_depth > 0 && p.depth >= params_.max_depth;

      Split best;
      if (!pure && size >= 2 * params_.min_leaf && !depth_cap) {
        best = find_split(p.begin, p.end, counts);
      }
      if (best.feature < 0) {
        nodes_[p.node].counts = std::move(counts);
        continue;
      }
      const auto mid = std::partition(rows_.begin() + static_cast<std::ptrdiff_t>(p.begin),
                                      rows_.begin() + static_cast<std::ptrdiff_t>(p.end),
                                      [&](int r) { return data_.value(best.feature, r) <= best.threshold; }) -
                       rows_.begin();
      const int left = static_cast<int>(nodes_.size());
      nodes_.emplace_back();
      const int right = static_cast<int>(nodes_.size());
      nodes_.emplace_back();
      auto& node = nodes_[p.node];
      node.feature = best.feature;
      node.threshold = best.threshold;
      node.left = left;
      node.right = right;
      stack.push_back({right, static_cast<std::size_t>(mid), p.end, p.depth + 1});
      stack.push_back({left, p.begin, static_cast<std::size_t>(mid), p.depth + 1});
    }
    return DecisionTree(std::move(nodes_));
  }

 private:
  // Best split over m_try features drawn without replacement. A split with
  // zero gain is still taken when nothing better exists, so impure nodes keep
  // splitting while any drawn feature separates their rows.
  Split find_split(std::size_t begin, std::size_t end, const std::vector<int>& counts) {
    const int n = static_cast<int>(end - begin);
    const double parent = impurity(counts, n, params_.criterion);
    Split best;
    const std::size_t m = features_.size();
    for (int i = 0; i < m_try_; ++i) {
      const std::size_t j = static_cast<std::size_t>(i) + rng_.below(m - static_cast<std::size_t>(i));
      std::swap(features_[static_cast<std::size_t>(i)], features_[j]);
      const int f = features_[static_cast<std::size_t>(i)];
      if (data_.small_max[f] >= 0) {
        split_small(f, begin, end, counts, parent, best);
      } else {
        split_sorted(f, begin, end, counts, parent, best);
      }
    }
    if (best.feature >= 0 && best.gain <= kGainEpsilon) best.gain = 0;
    return best;
  }

  void consider(int f, double threshold, int n_left, int n, double parent, Split& best) {
    const int n_right = n - n_left;
    if (n_left < params_.min_leaf || n_right < params_.min_leaf) return;
    const double child = (n_left * impurity(left_, n_left, params_.criterion) +
                          n_right * impurity(right_, n_right, params_.criterion)) /
                         n;
    Split s{f, threshold, std::max(0.0, parent - child)};
    if (s.gain <= kGainEpsilon) s.gain = 0;
    if (best.feature < 0 || s.better_than(best)) best = s;
  }

  void split_small(int f, std::size_t begin, std::size_t end, const std::vector<int>& counts,
                   double parent, Split& best) {
    const auto V = static_cast<std::size_t>(data_.small_max[f]) + 1;
    hist_.assign(V * C_, 0);
    totals_.assign(V, 0);
    for (auto i = begin; i < end; ++i) {
      const int r = rows_[i];
      const auto v = static_cast<std::size_t>(data_.value(f, r));
      ++hist_[v * C_ + static_cast<std::size_t>(data_.labels[r])];
      ++totals_[v];
    }
    const int n = static_cast<int>(end - begin);
    std::fill(left_.begin(), left_.end(), 0);
    int n_left = 0;
    int prev = -1;
    for (std::size_t v = 0; v < V; ++v) {
      if (totals_[v] == 0) continue;
      if (prev >= 0) {
        for (std::size_t c = 0; c < C_; ++c) right_[c] = counts[c] - left_[c];
        consider(f, (prev + static_cast<double>(v)) / 2.0, n_left, n, parent, best);
      }
      for (std::size_t c = 0; c < C_; ++c) left_[c] += hist_[v * C_ + c];
      n_left += totals_[v];
      prev = static_cast<int>(v);
    }
  }

  void split_sorted(int f, std::size_t begin, std::size_t end, const std::vector<int>& counts,
                    double parent, Split& best) {
    pairs_.clear();
    for (auto i = begin; i < end; ++i) {
      const int r = rows_[i];
      pairs_.emplace_back(data_.value(f, r), data_.labels[r]);
    }
    std::sort(pairs_.begin(), pairs_.end());
    const int n = static_cast<int>(pairs_.size());
    std::fill(left_.begin(), left_.end(), 0);
    for (int i = 0; i + 1 < n; ++i) {
      ++left_[static_cast<std::size_t>(pairs_[i].second)];
      if (pairs_[i].first == pairs_[i + 1].first) continue;
      for (std::size_t c = 0; c < C_; ++c) right_[c] = counts[c] - left_[c];
      consider(f, (pairs_[i].first + pairs_[i + 1].first) / 2.0, i + 1, n, parent, best);
    }
  }

  const TrainingData& data_;
  const ForestParams& params_;
  int m_try_;
  Rng rng_;
  std::size_t C_ = 0;
  std::vector<int> rows_;
  std::vector<int> features_;
  std::vector<TreeNode> nodes_;
  std::vector<int> left_, right_, hist_, totals_;
  std::vector<std::pair<double, int>> pairs_;
};

int argmax_lowest(std::span<const int> counts) {
  int best = 0;
  for (std::size_t c = 1; c < counts.size(); ++c) {
    if (counts[c] > counts[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
  }
  return best;
}

nlohmann::json node_json(const std::vector<TreeNode>& nodes, int id) {
  const auto& n = nodes.at(static_cast<std::size_t>(id));
  if (n.is_leaf()) return {{"counts", n.counts}};
  return {{"feature", n.feature},
          {"threshold", n.threshold},
          {"left", node_json(nodes, n.left)},
          {"right", node_json(nodes, n.right)}};
}

int node_from_json(const nlohmann::json& j, std::vector<TreeNode>& nodes) {
  const int id = static_cast<int>(nodes.size());
  nodes.emplace_back();
  if (j.contains("counts")) {
    nodes[id].counts = j.at("counts").get<std::vector<int>>();
    return id;
  }
  nodes[id].feature = j.at("feature").get<int>();
  nodes[id].threshold = j.at("threshold").get<double>();
  const int left = node_from_json(j.at("left"), nodes);
  const int right = node_from_json(j.at("right"), nodes);
  nodes[id].left = left;
  nodes[id].right = right;
  return id;
}

}  // namespace

Criterion parse_criterion(const std::string& name) {
  if (name == "info_gain" || name == "entropy" || name == "infogain") return Criterion::InfoGain;
  if (name == "gini") return Criterion::Gini;
  throw ParameterError("unknown split criterion '" + name + "' (expected info_gain|gini)");
}

std::string to_string(Criterion criterion) {
  return criterion == Criterion::InfoGain ? "info_gain" : "gini";
}

nlohmann::json ForestParams::to_json() const {
  return {{"trees", trees},         {"m_try", m_try},         {"criterion", drivesent::to_string(criterion)},
          {"min_leaf", min_leaf},   {"max_depth", max_depth}, {"seed", seed},
          {"bootstrap", bootstrap}};
}

ForestParams ForestParams::from_json(const nlohmann::json& j) {
  ForestParams p;
  p.trees = j.at("trees").get<int>();
  p.m_try = j.at("m_try").get<int>();
  p.criterion = parse_criterion(j.at("criterion").get<std::string>());
  p.min_leaf = j.at("min_leaf").get<int>();
  p.max_depth = j.at("max_depth").get<int>();
  p.seed = j.at("seed").get<std::uint64_t>();
  p.bootstrap = j.at("bootstrap").get<bool>();
  return p;
}

int effective_m_try(const ForestParams& params, std::size_t features) {
  const int m = static_cast<int>(features);
  int k = params.m_try > 0 ? params.m_try
                           : static_cast<int>(std::floor(std::log2(static_cast<double>(m)))) + 1;
  return std::clamp(k, 1, std::max(m, 1));
}

const TreeNode& DecisionTree::leaf_for(std::span<const double> row) const {
  const TreeNode* n = &nodes_.at(0);
  while (!n->is_leaf()) {
    n = &nodes_[static_cast<std::size_t>(row[static_cast<std::size_t>(n->feature)] <= n->threshold
                                             ? n->left
                                             : n->right)];
  }
  return *n;
}

int DecisionTree::vote(std::span<const double> row) const { return argmax_lowest(leaf_for(row).counts); }

int DecisionTree::depth() const {
  int deepest = 0;
  std::vector<std::pair<int, int>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [id, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    const auto& n = nodes_[static_cast<std::size_t>(id)];
    if (!n.is_leaf()) {
      stack.emplace_back(n.left, d + 1);
      stack.emplace_back(n.right, d + 1);
    }
  }
  return deepest;
}

nlohmann::json DecisionTree::to_json() const { return node_json(nodes_, 0); }

DecisionTree DecisionTree::from_json(const nlohmann::json& j) {
  std::vector<TreeNode> nodes;
  node_from_json(j, nodes);
  return DecisionTree(std::move(nodes));
}

ForestModel::ForestModel(ForestParams params, std::vector<std::string> classes,
                         std::vector<std::string> feature_names, std::vector<DecisionTree> trees)
    : params_(params), classes_(std::move(classes)), feature_names_(std::move(feature_names)),
      trees_(std::move(trees)) {}

ForestModel ForestModel::train(const FeatureMatrix& matrix, const ForestParams& params) {
  if (matrix.rows() == 0 || matrix.cols() == 0) {
    throw EmptyInputError("cannot train a forest on an empty matrix");
  }
  if (params.trees < 1) throw ParameterError("forest needs at least one tree");
  if (params.min_leaf < 1) throw ParameterError("min_leaf must be >= 1");
  if (params.max_depth < 0) throw ParameterError("max_depth must be >= 0");

  ForestModel model;
  model.params_ = params;
  model.classes_ = matrix.classes();
  for (const auto& s : matrix.specs()) model.feature_names_.push_back(s.name);
  if (params.m_try > static_cast<int>(matrix.cols())) {
    model.warnings_.push_back("m_try " + std::to_string(params.m_try) + " exceeds " +
                              std::to_string(matrix.cols()) + " features; clamped");
  }
  const int m_try = effective_m_try(params, matrix.cols());
  const TrainingData data(matrix);

  model.trees_.resize(static_cast<std::size_t>(params.trees));
  unsigned workers = params.threads ? params.threads : std::thread::hardware_concurrency();
  workers = std::clamp(workers, 1u, static_cast<unsigned>(params.trees));
  std::atomic<int> next{0};
  auto work = [&] {
    for (int t; (t = next.fetch_add(1)) < params.trees;) {
      model.trees_[static_cast<std::size_t>(t)] =
          TreeGrower(data, params, m_try, static_cast<std::uint64_t>(t)).grow();
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
  }
  return model;
}

int ForestModel::predict(std::span<const double> row) const {
  if (row.size() != feature_names_.size()) {
    throw DimensionError("row has " + std::to_string(row.size()) + " features, model expects " +
                         std::to_string(feature_names_.size()));
  }
  std::vector<int> votes(classes_.size(), 0);
  for (const auto& tree : trees_) ++votes[static_cast<std::size_t>(tree.vote(row))];
  return argmax_lowest(votes);
}

std::vector<int> ForestModel::predict_batch(const FeatureMatrix& matrix) const {
  std::vector<int> out;
  out.reserve(matrix.rows());
  for (std::size_t r = 0; r < matrix.rows(); ++r) out.push_back(predict(matrix.row(r)));
  return out;
}

nlohmann::json ForestModel::to_json() const {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& t : trees_) trees.push_back(t.to_json());
  return {{"params", params_.to_json()},
          {"classes", classes_},
          {"features", feature_names_},
          {"trees", std::move(trees)}};
}

ForestModel ForestModel::from_json(const nlohmann::json& j) {
  std::vector<DecisionTree> trees;
  for (const auto& t : j.at("trees")) trees.push_back(DecisionTree::from_json(t));
  return ForestModel(ForestParams::from_json(j.at("params")),
                     j.at("classes").get<std::vector<std::string>>(),
                     j.at("features").get<std::vector<std::string>>(), std::move(trees));
}

}  // namespace drivesent
