#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"
#include "drivesent/error.hpp"
#include "drivesent/pipeline.hpp"
#include "support/synthetic.hpp"

using namespace drivesent;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("drivesent_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_dataset(const fs::path& dir, const Corpus& corpus) {
  const auto path = dir / "tweets.csv";
  std::ofstream out(path, std::ios::binary);
  write_csv(out, corpus, ColumnMapping{});
  return path;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

PipelineConfig small_config(const fs::path& dir) {
  PipelineConfig c;
  c.dataset = write_dataset(dir, synth::make_small_corpus(21, 10));
  c.output_dir = dir / "out";
  c.features.lda.iterations = 30;
  c.features.unigrams = 40;
  c.features.topic_words_per_topic = 3;
  c.features.lda.topics = 4;
  c.forest.trees = 10;
  c.folds = 5;
  return c;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(DRIVESENT_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("stats") {
    const auto dir = scratch("stats");
    auto c = small_config(dir);
    const auto j = cmd_stats(c);
    CHECK(j["total"] == 692);
    CHECK(fs::exists(c.output_dir / "stats.json"));
  }

  TEST_CASE("topics write json and svg deterministically") {
    const auto dir = scratch("topics");
    auto c = small_config(dir);
    const auto r = cmd_topics(c);
    CHECK(r.warnings.empty());
    CHECK(r.positive["topics"].size() == 4);
    const auto svg = slurp(c.output_dir / "wordcloud_positive.svg");
    CHECK(svg.find("</svg>") != std::string::npos);
    const auto json = slurp(c.output_dir / "topics_negative.json");
    cmd_topics(c);
    CHECK(slurp(c.output_dir / "wordcloud_positive.svg") == svg);
    CHECK(slurp(c.output_dir / "topics_negative.json") == json);
  }

  TEST_CASE("an empty split is skipped with a warning") {
    const auto dir = scratch("topics_empty");
    auto c = small_config(dir);
    c.dataset = write_dataset(dir, synth::make_corpus(2, {0, 0, 30, 20, 5}));
    const auto r = cmd_topics(c);
    CHECK(r.warnings.size() == 1);
    CHECK(r.negative.is_null());
    CHECK(fs::exists(c.output_dir / "topics_positive.json"));
    CHECK_FALSE(fs::exists(c.output_dir / "topics_negative.json"));
  }

  TEST_CASE("evaluate is byte-identical across runs") {
    const auto dir = scratch("evaluate");
    auto c = small_config(dir);
    const auto combos = FeatureCombo::standard_set();
    const auto r = cmd_evaluate(c, combos);
    CHECK(r.combos.size() == 4);
    CHECK(r.json["results"].size() == 4);
    CHECK(r.json.contains("baseline"));
    const auto first = slurp(c.output_dir / "evaluation.json");
    cmd_evaluate(c, combos);
    CHECK(slurp(c.output_dir / "evaluation.json") == first);
    const auto table = slurp(c.output_dir / "evaluation.txt");
    CHECK(table.find("Unigrams (Baseline)") != std::string::npos);
    CHECK(table.find("Majority class") != std::string::npos);
    for (const auto& row : r.combos) {
      CHECK(std::abs(row.report.metrics.weighted.recall - row.report.metrics.accuracy) < 1e-9);
    }
  }

  TEST_CASE("attributes, features, train and predict") {
    const auto dir = scratch("model");
    auto c = small_config(dir);
    const auto combo = FeatureCombo::parse("U+L");
    const auto attrs = cmd_attributes(c, combo);
    CHECK(attrs.size() == 10);
    CHECK(fs::exists(c.output_dir / "attributes_U-L.json"));
    const auto m = cmd_features(c, combo);
    CHECK(fs::exists(c.output_dir / "features_U-L.csv"));
    CHECK(fs::exists(c.output_dir / "features_U-L.json"));
    const auto model_path = dir / "model.json";
    const auto model = cmd_train(c, combo, model_path);
    CHECK(model.feature_names().size() <= m.cols());
    const auto report = cmd_predict(c, model_path);
    CHECK(report["rows"] == m.rows());
    CHECK(report["accuracy"].get<double>() > 0.6);
    CHECK(fs::exists(c.output_dir / "predictions.csv"));
  }

  TEST_CASE("config validation") {
    PipelineConfig c;
    c.folds = 1;
    CHECK_THROWS_AS(c.validate(), ParameterError);
    c = {};
    c.features.lda.topics = 0;
    CHECK_THROWS_AS(c.validate(), ParameterError);
    c = {};
    CHECK_NOTHROW(c.validate());
    CHECK(combo_file_id(FeatureCombo::parse("U+L+M")) == "U-L-M");
  }

  TEST_CASE("cli exit codes") {
    const auto dir = scratch("cli");
    const auto data = write_dataset(dir, synth::make_small_corpus(5, 40));
    const auto out = (dir / "out").string();
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("") == 2);
    CHECK(run_cli("stats --dataset " + data.string() + " --out " + out) == 0);
    CHECK(fs::exists(dir / "out" / "stats.json"));
    CHECK(run_cli("evaluate --combo U+Q --dataset " + data.string() + " --out " + out) == 2);
    CHECK(run_cli("stats --folds 1 --dataset " + data.string()) == 2);
    {
      std::ofstream bad(dir / "bad.csv");
      bad << "_unit_id,sentiment,text\n1,7,x\n";
    }
    CHECK(run_cli("stats --dataset " + (dir / "bad.csv").string() + " --out " + out) == 3);
    {
      std::ofstream bad(dir / "nocol.csv");
      bad << "_unit_id,text\n1,x\n";
    }
    CHECK(run_cli("stats --dataset " + (dir / "nocol.csv").string() + " --out " + out) == 2);
    {
      std::ofstream empty(dir / "empty.csv");
      empty << "_unit_id,sentiment,text\n1,not_relevant,x\n";
    }
    CHECK(run_cli("stats --dataset " + (dir / "empty.csv").string() + " --out " + out) == 2);
    {
      std::ofstream cfg(dir / "run.ini");
      cfg << "dataset = " << data.string() << "\nout = " << out << "\ntrees = 3\nfolds = 3\n"
          << "lda-iters = 5\n";
    }
    CHECK(run_cli("--config " + (dir / "run.ini").string() + " evaluate --combo L -q") == 0);
    CHECK(fs::exists(dir / "out" / "evaluation.json"));
    {
      std::ofstream junk(dir / "model.json");
      junk << "{not json";
    }
    CHECK(run_cli("predict --model " + (dir / "model.json").string() + " --dataset " + data.string() +
                  " --out " + out) == 3);
  }
}
