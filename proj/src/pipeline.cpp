#include "drivesent/pipeline.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <unordered_map>

#include "drivesent/csv.hpp"
#include "drivesent/error.hpp"
#include "drivesent/select.hpp"
#include "drivesent/stemmer.hpp"
#include "drivesent/wordcloud.hpp"

namespace drivesent {
namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

Corpus load_corpus(const PipelineConfig& config) {
  if (config.dataset.empty()) throw ParameterError("no dataset path configured");
  return load_csv(config.dataset, config.columns);
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

nlohmann::json row_json(const std::string& label, const std::string& id, std::size_t features,
                        const EvalReport& r) {
  return {{"label", label},
          {"combo", id},
          {"features", features},
          {"precision", r.metrics.weighted.precision},
          {"recall", r.metrics.weighted.recall},
          {"f_measure", r.metrics.weighted.f1},
          {"accuracy", r.metrics.accuracy},
          {"report", r.to_json()}};
}

struct SplitTopics {
  nlohmann::json json;
  std::string svg;
};

// Topic model and word cloud for one polarity split.
SplitTopics split_topics(const Corpus& split, const PipelineConfig& config, const Lexicons& lex,
                         const std::string& title) {
  std::vector<std::vector<std::string>> docs;
  std::unordered_map<std::string, std::map<std::string, int>> surfaces;  // stem -> form -> n
  for (const auto& tweet : split.tweets()) {
    const auto doc = tokenize(tweet.text, lex.emoticons);
    for (const auto& t : doc.tokens) {
      if (t.kind == TokenKind::Word && !lex.stopwords.contains(t.normalized)) {
        ++surfaces[t.stem][t.normalized];
      } else if (t.kind == TokenKind::Hashtag && !lex.stopwords.contains(t.normalized)) {
        ++surfaces[porter_stem(t.normalized)]["#" + t.normalized];
      }
    }
    docs.push_back(content_terms(doc, lex.stopwords));
  }
  const auto model = fit_topics(docs, config.features.lda);
  if (!model) return {};

  std::map<std::string, double> weight;  // term -> max phi over topics
  for (int k = 0; k < model->topics(); ++k) {
    for (const auto& tw : model->top_words(k, config.topic_words)) {
      auto& w = weight[tw.term];
      w = std::max(w, tw.weight);
    }
  }
  std::vector<CloudWord> words;
  for (const auto& [term, w] : weight) {
    std::string shown = term;
    if (const auto it = surfaces.find(term); it != surfaces.end()) {
      int best = 0;
      for (const auto& [form, n] : it->second) {
        if (n > best) {
          best = n;
          shown = form;
        }
      }
    }
    words.push_back({shown, w});
  }
  CloudStyle style;
  style.title = title;
  return {model->to_json(config.topic_words), render_word_cloud(std::move(words), style)};
}

}  // namespace

void PipelineConfig::validate() const {
  if (features.unigrams < 1) throw ParameterError("unigrams must be >= 1");
  if (features.topic_words_per_topic < 0) throw ParameterError("per_topic must be >= 0");
  if (features.hashtag_min_frequency < 1) throw ParameterError("hashtag_min_freq must be >= 1");
  if (features.lda.topics < 1) throw ParameterError("lda topics must be >= 1");
  if (features.lda.iterations < 1) throw ParameterError("lda iterations must be >= 1");
  if (!(features.lda.alpha > 0) || !(features.lda.beta > 0)) {
    throw ParameterError("lda alpha and beta must be positive");
  }
  if (topic_words < 1) throw ParameterError("topic_words must be >= 1");
  if (forest.trees < 1) throw ParameterError("trees must be >= 1");
  if (forest.m_try < 0) throw ParameterError("m_try must be >= 0");
  if (forest.min_leaf < 1) throw ParameterError("min_leaf must be >= 1");
  if (forest.max_depth < 0) throw ParameterError("max_depth must be >= 0");
  if (folds < 2) throw ParameterError("folds must be >= 2");
  if (selection.rule.top_k && *selection.rule.top_k <= 0) {
    throw ParameterError("select_k must be positive");
  }
  if (attributes_top < 1) throw ParameterError("attributes_top must be >= 1");
}

nlohmann::json PipelineConfig::to_json() const {
  nlohmann::json sel = {{"mode", to_string(selection.mode)}};
  if (selection.rule.top_k) sel["k"] = *selection.rule.top_k;
  if (selection.rule.threshold) sel["threshold"] = *selection.rule.threshold;
  return {{"dataset", dataset.filename().string()},
          {"label_scheme", to_string(scheme)},
          {"unigrams", features.unigrams},
          {"per_topic", features.topic_words_per_topic},
          {"hashtag_min_freq", features.hashtag_min_frequency},
          {"tweet_length_unit", features.tweet_length_in_chars ? "chars" : "tokens"},
          {"lda",
           {{"K", features.lda.topics},
            {"alpha", features.lda.alpha},
            {"beta", features.lda.beta},
            {"iters", features.lda.iterations},
            {"seed", features.lda.seed}}},
          {"forest", forest.to_json()},
          {"folds", folds},
          {"cv_seed", cv_seed},
          {"selection", sel}};
}

std::string combo_file_id(const FeatureCombo& combo) {
  auto id = combo.id();
  for (auto& c : id) {
    if (c == '+') c = '-';
  }
  return id;
}

nlohmann::json cmd_stats(const PipelineConfig& config) {
  const auto corpus = load_corpus(config);
  auto stats = corpus.stats_json();
  write_json(config.output_dir / "stats.json", stats);
  return stats;
}

TopicsResult cmd_topics(const PipelineConfig& config, const LogFn& log) {
  config.validate();
  const auto corpus = load_corpus(config);
  const auto lex = Lexicons::load(config.lexicons);
  const auto split = split_polar(corpus);
  TopicsResult result;
  const std::pair<const Corpus*, const char*> parts[] = {{&split.positive, "positive"},
                                                         {&split.negative, "negative"}};
  for (const auto& [part, name] : parts) {
    auto topics = part->empty() ? SplitTopics{}
                                : split_topics(*part, config, lex,
                                               std::string("Top topic words, ") + name + " tweets");
    if (topics.json.is_null()) {
      result.warnings.push_back(std::string(name) + " split has no content words; skipped");
      if (log) log(result.warnings.back());
      continue;
    }
    write_json(config.output_dir / (std::string("topics_") + name + ".json"), topics.json);
    write_text(config.output_dir / (std::string("wordcloud_") + name + ".svg"), topics.svg);
    if (log) log(std::string("wrote topics for ") + name + " split (" +
                 std::to_string(part->size()) + " tweets)");
    (std::string(name) == "positive" ? result.positive : result.negative) = std::move(topics.json);
  }
  return result;
}

std::string format_results_table(const std::vector<ComboResult>& combos, const EvalReport* baseline) {
  std::string out;
  auto line = [&](const std::string& label, const EvalReport& r) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-34s %9.3f %7.3f %10.3f %12.2f\n", label.c_str(),
                  r.metrics.weighted.precision, r.metrics.weighted.recall, r.metrics.weighted.f1,
                  100.0 * r.metrics.accuracy);
    out += buf;
  };
  char head[160];
  std::snprintf(head, sizeof head, "%-34s %9s %7s %10s %12s\n", "Feature set", "Precision", "Recall",
                "F-Measure", "Accuracy(%)");
  out += head;
  for (const auto& c : combos) line(c.combo.label(), c.report);
  if (baseline) line("Majority class", *baseline);
  return out;
}

EvaluationResult cmd_evaluate(const PipelineConfig& config, const std::vector<FeatureCombo>& combos,
                              const LogFn& log) {
  config.validate();
  if (combos.empty()) throw ParameterError("no feature combinations to evaluate");
  const auto corpus = load_corpus(config);
  const auto lex = Lexicons::load(config.lexicons);
  const FeatureBuilder builder(corpus, config.features, lex);
  if (log) log("preprocessed " + std::to_string(corpus.size()) + " tweets, " +
               std::to_string(builder.unigram_terms().size()) + " unigram terms, " +
               std::to_string(builder.tag_vocab().size()) + " frequent hashtags");

  EvaluationResult result;
  nlohmann::json rows = nlohmann::json::array();
  auto flush = [&] {
    result.json = {{"config", config.to_json()}, {"results", rows}};
    if (!result.baseline.classes.empty()) {
      result.json["baseline"] = row_json("Majority class", "majority", 0, result.baseline);
    }
    result.table = format_results_table(result.combos,
                                        result.baseline.classes.empty() ? nullptr : &result.baseline);
    write_json(config.output_dir / "evaluation.json", result.json);
    write_text(config.output_dir / "evaluation.txt", result.table);
  };

  for (const auto& combo : combos) {
    const auto matrix = builder.assemble(combo, config.scheme);
    auto report = cross_validate(matrix, config.forest, config.folds, config.cv_seed, config.selection);
    if (log) log(combo.label() + ": accuracy " + fmt("%.4f", report.metrics.accuracy));
    rows.push_back(row_json(combo.label(), combo.id(), matrix.cols(), report));
    result.combos.push_back({combo, matrix.cols(), std::move(report)});
    flush();
  }
  const auto any = builder.assemble(combos.front(), config.scheme);
  result.baseline = majority_baseline(any, config.folds, config.cv_seed);
  flush();
  return result;
}

nlohmann::json cmd_attributes(const PipelineConfig& config, const FeatureCombo& combo) {
  config.validate();
  const auto corpus = load_corpus(config);
  const auto lex = Lexicons::load(config.lexicons);
  const FeatureBuilder builder(corpus, config.features, lex);
  const auto ranking = rank_features(builder.assemble(combo, config.scheme));
  auto top = ranking_json(ranking, static_cast<std::size_t>(config.attributes_top));
  write_json(config.output_dir / ("attributes_" + combo_file_id(combo) + ".json"), top);
  return top;
}

FeatureMatrix cmd_features(const PipelineConfig& config, const FeatureCombo& combo) {
  config.validate();
  const auto corpus = load_corpus(config);
  const auto lex = Lexicons::load(config.lexicons);
  auto matrix = FeatureBuilder(corpus, config.features, lex).assemble(combo, config.scheme);
  const auto stem = "features_" + combo_file_id(combo);
  std::filesystem::create_directories(config.output_dir);
  std::ofstream csv_out(config.output_dir / (stem + ".csv"), std::ios::binary);
  if (!csv_out) throw DataError("cannot write feature CSV");
  matrix.write_csv(csv_out);
  write_json(config.output_dir / (stem + ".json"), matrix.manifest());
  return matrix;
}

ForestModel cmd_train(const PipelineConfig& config, const FeatureCombo& combo,
                      const std::filesystem::path& model_path) {
  config.validate();
  const auto corpus = load_corpus(config);
  const auto lex = Lexicons::load(config.lexicons);
  auto matrix = FeatureBuilder(corpus, config.features, lex).assemble(combo, config.scheme);
  if (config.selection.mode != SelectionMode::None) {
    matrix = select_top(matrix, config.selection.rule);
  }
  auto model = ForestModel::train(matrix, config.forest);
  write_json(model_path, model.to_json());
  return model;
}

nlohmann::json cmd_predict(const PipelineConfig& config, const std::filesystem::path& model_path) {
  config.validate();
  std::ifstream in(model_path);
  if (!in) throw DataError("cannot open model " + model_path.string());
  const auto model = ForestModel::from_json(nlohmann::json::parse(in));

  const auto corpus = load_corpus(config);
  const auto lex = Lexicons::load(config.lexicons);
  const FeatureBuilder builder(corpus, config.features, lex);
  const auto full = builder.assemble(FeatureCombo(true, true, true), config.scheme);
  if (full.classes() != model.classes()) {
    throw DataError("model classes do not match the configured label scheme");
  }

  // Features the current corpus vocabulary lacks are recomputed by name.
  std::vector<std::vector<double>> columns;
  for (const auto& name : model.feature_names()) {
    if (const auto c = full.find(name)) {
      columns.push_back(full.column(*c));
      continue;
    }
    std::vector<double> col(corpus.size(), 0.0);
    if (name.starts_with("uni:")) {
      const auto term = name.substr(4);
      for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& terms = builder.terms()[i];
        col[i] = std::find(terms.begin(), terms.end(), term) != terms.end() ? 1.0 : 0.0;
      }
    } else if (name.starts_with("meta:tag:")) {
      const auto tag = name.substr(9);
      for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto tags = extract_hashtags(builder.docs()[i]);
        col[i] = std::find(tags.begin(), tags.end(), tag) != tags.end() ? 1.0 : 0.0;
      }
    } else {
      throw DataError("model feature '" + name + "' cannot be computed");
    }
    columns.push_back(std::move(col));
  }

  std::filesystem::create_directories(config.output_dir);
  std::ofstream out(config.output_dir / "predictions.csv", std::ios::binary);
  csv::write_record(out, {"id", "predicted", "actual"});
  ConfusionMatrix cm(model.classes().size());
  std::vector<double> row(columns.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (std::size_t c = 0; c < columns.size(); ++c) row[c] = columns[c][i];
    const int predicted = model.predict(row);
    cm.add(full.labels()[i], predicted);
    csv::write_record(out, {corpus.tweets()[i].id, model.classes()[predicted],
                            model.classes()[full.labels()[i]]});
  }
  const auto metrics = compute_metrics(cm);
  return {{"rows", corpus.size()},
          {"accuracy", metrics.accuracy},
          {"weighted_f1", metrics.weighted.f1},
          {"confusion", cm.to_json()}};
}

}  // namespace drivesent
