#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "drivesent/error.hpp"
#include "drivesent/pipeline.hpp"
#include "json.hpp"

using namespace drivesent;

namespace {

struct Options {
  PipelineConfig config;
  std::string scheme = "five";
  std::string criterion = "info_gain";
  std::string selection = "per_fold";
  std::string tweet_length = "tokens";
  std::optional<int> select_k;
  std::optional<double> select_threshold;
  std::optional<std::uint64_t> seed;
  bool no_bootstrap = false;
  bool quiet = false;
};

void add_config_options(CLI::App& app, Options& o) {
  auto& c = o.config;
  app.set_config("--config", "", "Flat key = value config file; keys are the long option names");

  app.add_option("--dataset", c.dataset, "Labeled tweet CSV")->group("Data");
  app.add_option("--id-col", c.columns.id, "Tweet id column")->capture_default_str()->group("Data");
  app.add_option("--sentiment-col", c.columns.sentiment, "Sentiment column")
      ->capture_default_str()->group("Data");
  app.add_option("--text-col", c.columns.text, "Tweet text column")->capture_default_str()->group("Data");
  app.add_option("--retweet-col", c.columns.retweet, "Retweet flag column (empty: derive from text)")
      ->group("Data");
  app.add_option("--followers-col", c.columns.followers, "Follower count column")->group("Data");
  app.add_option("--followees-col", c.columns.followees, "Followee count column")->group("Data");
  app.add_option("--scheme", o.scheme, "Label scheme")
      ->check(CLI::IsMember({"five", "three"}))->capture_default_str()->group("Data");

  app.add_option("--stopwords", c.lexicons.stopwords, "Stopword list")->capture_default_str()->group("Lexicons");
  app.add_option("--emoticons", c.lexicons.emoticons, "Emoticon list")->capture_default_str()->group("Lexicons");
  app.add_option("--emphatic", c.lexicons.emphatic, "Intensifier list")->capture_default_str()->group("Lexicons");
  app.add_option("--pos-lexicon", c.lexicons.pos, "Word to POS tag table")->capture_default_str()->group("Lexicons");
  app.add_option("--polarity", c.lexicons.polarity, "Word polarity table")->capture_default_str()->group("Lexicons");
  app.add_option("--hashtag-overrides", c.lexicons.hashtag_overrides, "Hashtag polarity overrides")
      ->capture_default_str()->group("Lexicons");

  auto& lda = c.features.lda;
  app.add_option("--lda-topics", lda.topics, "Number of topics K")->capture_default_str()->group("Topics");
  app.add_option("--lda-alpha", lda.alpha, "Document-topic prior")->capture_default_str()->group("Topics");
  app.add_option("--lda-beta", lda.beta, "Topic-word prior")->capture_default_str()->group("Topics");
  app.add_option("--lda-iters", lda.iterations, "Gibbs sweeps")->capture_default_str()->group("Topics");
  app.add_option("--lda-seed", lda.seed, "Sampler seed")->capture_default_str()->group("Topics");
  app.add_option("--topic-words", c.topic_words, "Words per topic in reports and clouds")
      ->capture_default_str()->group("Topics");

  app.add_option("--unigrams", c.features.unigrams, "Top TF-IDF unigrams")->capture_default_str()->group("Features");
  app.add_option("--per-topic", c.features.topic_words_per_topic, "Topic words added to the unigram list")
      ->capture_default_str()->group("Features");
  app.add_option("--hashtag-min-freq", c.features.hashtag_min_frequency, "Minimum count for per-hashtag features")
      ->capture_default_str()->group("Features");
  app.add_option("--tweet-length", o.tweet_length, "Tweet length unit")
      ->check(CLI::IsMember({"tokens", "chars"}))->capture_default_str()->group("Features");

  auto& f = c.forest;
  app.add_option("--trees", f.trees, "Trees per forest")->capture_default_str()->group("Forest");
  app.add_option("--m-try", f.m_try, "Features tried per split (0: floor(log2 m)+1)")
      ->capture_default_str()->group("Forest");
  app.add_option("--criterion", o.criterion, "Split criterion")
      ->check(CLI::IsMember({"info_gain", "gini"}))->capture_default_str()->group("Forest");
  app.add_option("--min-leaf", f.min_leaf, "Minimum rows per leaf")->capture_default_str()->group("Forest");
  app.add_option("--max-depth", f.max_depth, "Maximum depth (0: unlimited)")->capture_default_str()->group("Forest");
  app.add_option("--forest-seed", f.seed, "Bagging and feature sampling seed")->capture_default_str()->group("Forest");
  app.add_flag("--no-bootstrap", o.no_bootstrap, "Grow every tree on all rows")->group("Forest");
  app.add_option("--threads", f.threads, "Worker threads (0: hardware)")->capture_default_str()->group("Forest");

  app.add_option("--folds", c.folds, "Cross-validation folds")->capture_default_str()->group("Evaluation");
  app.add_option("--cv-seed", c.cv_seed, "Fold assignment seed")->capture_default_str()->group("Evaluation");
  app.add_option("--selection", o.selection, "Feature selection mode")
      ->check(CLI::IsMember({"per_fold", "global", "none"}))->capture_default_str()->group("Evaluation");
  app.add_option("--select-k", o.select_k, "Keep the top k features by gain")->group("Evaluation");
  app.add_option("--select-threshold", o.select_threshold, "Keep features with gain above this (default 0)")
      ->group("Evaluation");
  app.add_option("--attributes-top", c.attributes_top, "Attributes listed by 'attributes'")
      ->capture_default_str()->group("Evaluation");

  app.add_option("--seed", o.seed, "Overrides the LDA, forest and CV seeds");
  app.add_option("--out", c.output_dir, "Output directory")->capture_default_str();
  app.add_flag("-q,--quiet", o.quiet, "No progress messages");
}

PipelineConfig finish(Options& o) {
  auto c = o.config;
  c.scheme = parse_label_scheme(o.scheme);
  c.forest.criterion = parse_criterion(o.criterion);
  c.forest.bootstrap = !o.no_bootstrap;
  c.features.tweet_length_in_chars = o.tweet_length == "chars";
  c.selection.mode = parse_selection_mode(o.selection);
  if (o.select_k && o.select_threshold) {
    throw ParameterError("--select-k and --select-threshold are exclusive");
  }
  if (o.select_k) c.selection.rule = Selection::keep_top(*o.select_k);
  if (o.select_threshold) c.selection.rule = Selection::above(*o.select_threshold);
  if (o.seed) {
    c.features.lda.seed = *o.seed;
    c.forest.seed = *o.seed;
    c.cv_seed = *o.seed;
  }
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topic modeling and sentiment classification of labeled tweets"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opts;
  add_config_options(app, opts);

  std::vector<std::string> eval_combos;
  std::string combo = "U+L";
  std::string model_path = "model.json";

  auto* stats = app.add_subcommand("stats", "Label histogram of the dataset");
  auto* topics = app.add_subcommand("topics", "Topic models and word clouds per polarity split");
  auto* evaluate = app.add_subcommand("evaluate", "Cross-validated results per feature combination");
  evaluate->add_option("--combo", eval_combos, "Combination such as U, U+L, L+M (repeatable)")
      ->default_str("U U+L L+M U+L+M");
  auto* attributes = app.add_subcommand("attributes", "Top features by information gain");
  auto* features = app.add_subcommand("features", "Write the feature matrix");
  auto* train = app.add_subcommand("train", "Train one forest on the full dataset");
  auto* predict = app.add_subcommand("predict", "Label the dataset with a saved forest");
  for (auto* sub : {attributes, features, train}) {
    sub->add_option("--combo", combo, "Feature combination")->capture_default_str();
  }
  for (auto* sub : {train, predict}) {
    sub->add_option("--model", model_path, "Model JSON path")->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const auto config = finish(opts);
    LogFn log;
    if (!opts.quiet) log = [](const std::string& m) { std::cerr << m << "\n"; };

    if (stats->parsed()) {
      std::cout << cmd_stats(config).dump(2) << "\n";
    } else if (topics->parsed()) {
      const auto r = cmd_topics(config, log);
      for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
    } else if (evaluate->parsed()) {
      std::vector<FeatureCombo> combos;
      for (const auto& text : eval_combos) combos.push_back(FeatureCombo::parse(text));
      if (combos.empty()) combos = FeatureCombo::standard_set();
      std::cout << cmd_evaluate(config, combos, log).table;
    } else if (attributes->parsed()) {
      std::cout << cmd_attributes(config, FeatureCombo::parse(combo)).dump(2) << "\n";
    } else if (features->parsed()) {
      const auto m = cmd_features(config, FeatureCombo::parse(combo));
      std::cout << m.rows() << " rows, " << m.cols() << " features\n";
    } else if (train->parsed()) {
      const auto model = cmd_train(config, FeatureCombo::parse(combo), model_path);
      for (const auto& w : model.warnings()) std::cerr << "warning: " << w << "\n";
    } else if (predict->parsed()) {
      std::cout << cmd_predict(config, model_path).dump(2) << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
