#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "drivesent/corpus.hpp"
#include "drivesent/eval.hpp"
#include "drivesent/features.hpp"
#include "drivesent/forest.hpp"
#include "drivesent/lexicon.hpp"
#include "json.hpp"

namespace drivesent {

struct PipelineConfig {
  std::filesystem::path dataset;
  ColumnMapping columns;
  LabelScheme scheme = LabelScheme::FiveClass;
  LexiconPaths lexicons = LexiconPaths::bundled();
  FeatureConfig features;
  int topic_words = 10;  // words per topic in topic reports and word clouds
  ForestParams forest;
  int folds = 10;
  std::uint64_t cv_seed = 1;
  SelectionConfig selection;
  int attributes_top = 10;
  std::filesystem::path output_dir = "out";

  // Throws ParameterError when a value is outside its operation's domain.
  void validate() const;
  nlohmann::json to_json() const;
};

using LogFn = std::function<void(const std::string&)>;

// Writes stats.json.
nlohmann::json cmd_stats(const PipelineConfig& config);

struct TopicsResult {
  nlohmann::json positive;  // null when the split was empty
  nlohmann::json negative;
  std::vector<std::string> warnings;
};

// Fits one topic model per polarity split; writes topics_{positive,negative}.json
// and wordcloud_{positive,negative}.svg.
TopicsResult cmd_topics(const PipelineConfig& config, const LogFn& log = {});

struct ComboResult {
  FeatureCombo combo;
  std::size_t features = 0;
  EvalReport report;
};

struct EvaluationResult {
  std::vector<ComboResult> combos;
  EvalReport baseline;
  nlohmann::json json;
  std::string table;
};

// Cross-validates each combination; writes evaluation.json and
// evaluation.txt (rewritten after every combination).
EvaluationResult cmd_evaluate(const PipelineConfig& config, const std::vector<FeatureCombo>& combos,
                              const LogFn& log = {});

// Ranks every feature of the combination on the full corpus and writes the
// top `attributes_top` to attributes_<combo>.json.
nlohmann::json cmd_attributes(const PipelineConfig& config, const FeatureCombo& combo);

// Writes features_<combo>.csv and features_<combo>.json (manifest).
FeatureMatrix cmd_features(const PipelineConfig& config, const FeatureCombo& combo);

// Selects features on the full corpus, trains one forest, writes it to `model_path`.
ForestModel cmd_train(const PipelineConfig& config, const FeatureCombo& combo,
                      const std::filesystem::path& model_path);

// Predicts every tweet of the dataset with a saved model; writes
// predictions.csv (id, predicted, actual) and returns the accuracy report.
nlohmann::json cmd_predict(const PipelineConfig& config, const std::filesystem::path& model_path);

// Fixed-width results table: Precision, Recall, F-Measure, Accuracy(%).
std::string format_results_table(const std::vector<ComboResult>& combos, const EvalReport* baseline);

// File-name safe combination id ("U-L-M").
std::string combo_file_id(const FeatureCombo& combo);

}  // namespace drivesent
