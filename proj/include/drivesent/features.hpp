#pragma once

#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "drivesent/corpus.hpp"
#include "drivesent/lexicon.hpp"
#include "drivesent/textproc.hpp"
#include "drivesent/topics.hpp"
#include "json.hpp"

namespace drivesent {

enum class FeatureSet { Unigrams, Linguistic, Metadata };
enum class FeatureKind { Binary, Count };

std::string_view to_string(FeatureSet set);
std::string_view to_string(FeatureKind kind);

struct FeatureSpec {
  std::string name;  // "uni:<stem>", "ling:<name>", "meta:<name>", "meta:tag:<hashtag>"
  FeatureSet set = FeatureSet::Unigrams;
  FeatureKind kind = FeatureKind::Count;
  bool operator==(const FeatureSpec&) const = default;
};

// A non-empty subset of the three feature sets, e.g. "U+L".
class FeatureCombo {
 public:
  FeatureCombo() = default;
  FeatureCombo(bool unigrams, bool linguistic, bool metadata);

  // Accepts '+'/','-joined tokens: U|L|M or unigrams|linguistic|metadata
  // (case-insensitive). Throws ParameterError on anything else.
  static FeatureCombo parse(const std::string& text);
  // {U}, {U,L}, {L,M}, {U,L,M}
  static std::vector<FeatureCombo> standard_set();

  bool has(FeatureSet set) const;
  bool empty() const { return !unigrams_ && !linguistic_ && !metadata_; }
  std::string id() const;     // "U+L+M"
  std::string label() const;  // "Unigram + Meta-Data + Linguistic"
  bool operator==(const FeatureCombo&) const = default;

 private:
  bool unigrams_ = false;
  bool linguistic_ = false;
  bool metadata_ = false;
};

// Row-major N x m matrix of nonnegative feature values plus class labels.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  // Throws ParameterError on duplicate feature names.
  FeatureMatrix(std::vector<FeatureSpec> specs, std::vector<std::string> classes);

  void add_row(std::string id, std::span<const double> values, int label);

  std::size_t rows() const noexcept { return labels_.size(); }
  std::size_t cols() const noexcept { return specs_.size(); }
  double at(std::size_t r, std::size_t c) const { return values_[r * cols() + c]; }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols(), cols()};
  }
  std::vector<double> column(std::size_t c) const;

  const std::vector<FeatureSpec>& specs() const noexcept { return specs_; }
  const std::vector<int>& labels() const noexcept { return labels_; }
  const std::vector<std::string>& classes() const noexcept { return classes_; }
  const std::vector<std::string>& row_ids() const noexcept { return row_ids_; }
  std::size_t class_count() const noexcept { return classes_.size(); }
  std::optional<std::size_t> find(const std::string& name) const;

  FeatureMatrix select_columns(std::span<const std::size_t> columns) const;
  FeatureMatrix select_rows(std::span<const std::size_t> rows) const;

  // Header of feature names plus a final "label" column.
  void write_csv(std::ostream& out) const;
  nlohmann::json manifest() const;

 private:
  std::vector<FeatureSpec> specs_;
  std::vector<std::string> classes_;
  std::vector<double> values_;
  std::vector<int> labels_;
  std::vector<std::string> row_ids_;
};

struct FeatureConfig {
  int unigrams = 100;
  int topic_words_per_topic = 10;
  int hashtag_min_frequency = 10;
  bool tweet_length_in_chars = false;
  LdaParams lda;
};

// Stemmed, stopword-free content words of a tweet: WORD stems plus stemmed
// hashtag bodies. URLs, mentions, numbers and punctuation are dropped.
std::vector<std::string> content_terms(const TokenizedDoc& doc, const WordList& stopwords);

// score(t) = sum_d tf(t,d) * ln(N / df(t)); top n, ties by term.
std::vector<std::string> top_tfidf_unigrams(const std::vector<std::vector<std::string>>& docs,
                                            int n);

// Appends each model's per-topic top words (model, topic, rank order) that
// are not already present. Null models are skipped.
std::vector<std::string> augment_with_topic_words(std::vector<std::string> unigrams,
                                                  std::span<const LdaModel* const> models,
                                                  int per_topic);

std::vector<double> unigram_features(std::span<const std::string> doc_terms,
                                     std::span<const std::string> terms);

inline constexpr std::size_t kLinguisticFeatures = 6;
inline constexpr std::size_t kMetadataBaseFeatures = 7;

// [noun, verb, adjective, adverb, emphatics, tweet_length]. `doc` must be
// POS-tagged. With `length_in_chars`, tweet_length counts code points of
// `text` instead of tokens.
std::vector<double> linguistic_features(const TokenizedDoc& doc, const EmphaticLexicon& emphatic,
                                        bool length_in_chars = false,
                                        std::string_view text = {});

// +1, 0 or -1 for a lowercase hashtag body.
int classify_hashtag(const std::string& tag, const PolarityLexicon& lexicon);

// [retweet, url_count, hashtag_pos, hashtag_neu, hashtag_neg, followers,
//  followees] followed by one presence flag per entry of `tag_vocab`.
std::vector<double> metadata_features(const LabeledTweet& tweet, const TokenizedDoc& doc,
                                      const PolarityLexicon& lexicon,
                                      std::span<const std::string> tag_vocab);

// Corpus-wide preprocessing shared by every feature combination: tokenized
// and tagged tweets, the unigram vocabulary (TF-IDF plus topic words) and
// the frequent-hashtag vocabulary.
class FeatureBuilder {
 public:
  FeatureBuilder(const Corpus& corpus, FeatureConfig config, const Lexicons& lexicons);

  const Corpus& corpus() const noexcept { return corpus_; }
  const FeatureConfig& config() const noexcept { return config_; }
  const std::vector<TokenizedDoc>& docs() const noexcept { return docs_; }
  const std::vector<std::vector<std::string>>& terms() const noexcept { return terms_; }
  const std::vector<std::string>& tfidf_terms() const noexcept { return tfidf_terms_; }
  const std::vector<std::string>& unigram_terms() const noexcept { return unigram_terms_; }
  const std::vector<std::string>& tag_vocab() const noexcept { return tag_vocab_; }
  // Null when the split had no content words.
  const LdaModel* positive_topics() const noexcept { return positive_.get(); }
  const LdaModel* negative_topics() const noexcept { return negative_.get(); }

  // Column blocks in the order unigrams, linguistic, metadata.
  FeatureMatrix assemble(const FeatureCombo& combo, LabelScheme scheme) const;

 private:
  const Corpus& corpus_;
  FeatureConfig config_;
  const Lexicons& lexicons_;
  std::vector<TokenizedDoc> docs_;
  std::vector<std::vector<std::string>> terms_;
  std::vector<std::string> tfidf_terms_;
  std::vector<std::string> unigram_terms_;
  std::vector<std::string> tag_vocab_;
  std::unique_ptr<LdaModel> positive_;
  std::unique_ptr<LdaModel> negative_;
};

// Fits a topic model on the content terms of `docs`; null if there are none.
std::unique_ptr<LdaModel> fit_topics(const std::vector<std::vector<std::string>>& docs,
                                     const LdaParams& params);

FeatureMatrix assemble(const Corpus& corpus, const FeatureCombo& combo, LabelScheme scheme,
                       const FeatureConfig& config, const Lexicons& lexicons);

}  // namespace drivesent
