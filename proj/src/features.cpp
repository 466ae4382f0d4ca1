#include "drivesent/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "drivesent/csv.hpp"
#include "drivesent/error.hpp"
#include "drivesent/stemmer.hpp"

namespace drivesent {
namespace {

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::size_t code_points(std::string_view s) {
  return static_cast<std::size_t>(std::count_if(
      s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

std::string format_value(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

std::string_view to_string(FeatureSet set) {
  switch (set) {
    case FeatureSet::Unigrams: return "UNIGRAMS";
    case FeatureSet::Linguistic: return "LINGUISTIC";
    case FeatureSet::Metadata: return "METADATA";
  }
  return "UNIGRAMS";
}

std::string_view to_string(FeatureKind kind) {
  return kind == FeatureKind::Binary ? "BINARY" : "COUNT";
}

FeatureCombo::FeatureCombo(bool unigrams, bool linguistic, bool metadata)
    : unigrams_(unigrams), linguistic_(linguistic), metadata_(metadata) {}

FeatureCombo FeatureCombo::parse(const std::string& text) {
  FeatureCombo combo;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find_first_of("+,", start);
    const auto token = lower(text.substr(start, end == std::string::npos ? end : end - start));
    if (token == "u" || token == "unigrams" || token == "unigram") combo.unigrams_ = true;
    else if (token == "l" || token == "linguistic") combo.linguistic_ = true;
    else if (token == "m" || token == "metadata" || token == "meta") combo.metadata_ = true;
    else throw ParameterError("unknown feature set '" + token + "' in combo '" + text + "'");
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return combo;
}

std::vector<FeatureCombo> FeatureCombo::standard_set() {
  return {{true, false, false}, {true, true, false}, {false, true, true}, {true, true, true}};
}

bool FeatureCombo::has(FeatureSet set) const {
  switch (set) {
    case FeatureSet::Unigrams: return unigrams_;
    case FeatureSet::Linguistic: return linguistic_;
    case FeatureSet::Metadata: return metadata_;
  }
  return false;
}

std::string FeatureCombo::id() const {
  std::string out;
  auto add = [&](bool on, const char* s) {
    if (!on) return;
    if (!out.empty()) out += '+';
    out += s;
  };
  add(unigrams_, "U");
  add(linguistic_, "L");
  add(metadata_, "M");
  return out;
}

std::string FeatureCombo::label() const {
  if (unigrams_ && !linguistic_ && !metadata_) return "Unigrams (Baseline)";
  if (unigrams_ && linguistic_ && metadata_) return "Unigram + Meta-Data + Linguistic";
  std::string out;
  auto add = [&](bool on, const char* s) {
    if (!on) return;
    if (!out.empty()) out += " + ";
    out += s;
  };
  add(unigrams_, "Unigram");
  add(linguistic_, "Linguistic");
  add(metadata_, "Meta-Data");
  return out;
}

FeatureMatrix::FeatureMatrix(std::vector<FeatureSpec> specs, std::vector<std::string> classes)
    : specs_(std::move(specs)), classes_(std::move(classes)) {
  std::unordered_set<std::string> seen;
  for (const auto& s : specs_) {
    if (!seen.insert(s.name).second) throw ParameterError("duplicate feature name " + s.name);
  }
}

void FeatureMatrix::add_row(std::string id, std::span<const double> values, int label) {
  if (values.size() != cols()) {
    throw DimensionError("row has " + std::to_string(values.size()) + " values, expected " +
                         std::to_string(cols()));
  }
  if (label < 0 || static_cast<std::size_t>(label) >= classes_.size()) {
    throw IndexError("class index " + std::to_string(label) + " out of range");
  }
  values_.insert(values_.end(), values.begin(), values.end());
  labels_.push_back(label);
  row_ids_.push_back(std::move(id));
}

std::vector<double> FeatureMatrix::column(std::size_t c) const {
  std::vector<double> out(rows());
  for (std::size_t r = 0; r < rows(); ++r) out[r] = at(r, c);
  return out;
}

std::optional<std::size_t> FeatureMatrix::find(const std::string& name) const {
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    if (specs_[i].name == name) return i;
  }
  return std::nullopt;
}

FeatureMatrix FeatureMatrix::select_columns(std::span<const std::size_t> columns) const {
  std::vector<FeatureSpec> specs;
  for (auto c : columns) specs.push_back(specs_.at(c));
  FeatureMatrix out(std::move(specs), classes_);
  out.values_.reserve(rows() * columns.size());
  for (std::size_t r = 0; r < rows(); ++r) {
    for (auto c : columns) out.values_.push_back(at(r, c));
  }
  out.labels_ = labels_;
  out.row_ids_ = row_ids_;
  return out;
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> rows) const {
  FeatureMatrix out(specs_, classes_);
  for (auto r : rows) out.add_row(row_ids_.at(r), row(r), labels_[r]);
  return out;
}

void FeatureMatrix::write_csv(std::ostream& out) const {
  csv::Record header;
  for (const auto& s : specs_) header.push_back(s.name);
  header.push_back("label");
  csv::write_record(out, header);
  csv::Record rec;
  for (std::size_t r = 0; r < rows(); ++r) {
    rec.clear();
    for (std::size_t c = 0; c < cols(); ++c) rec.push_back(format_value(at(r, c)));
    rec.push_back(classes_[labels_[r]]);
    csv::write_record(out, rec);
  }
}

nlohmann::json FeatureMatrix::manifest() const {
  nlohmann::json features = nlohmann::json::array();
  for (const auto& s : specs_) {
    features.push_back({{"name", s.name}, {"set", to_string(s.set)}, {"kind", to_string(s.kind)}});
  }
  return {{"features", std::move(features)}, {"classes", classes_}, {"rows", rows()}};
}

std::vector<std::string> content_terms(const TokenizedDoc& doc, const WordList& stopwords) {
  std::vector<std::string> out;
  for (const auto& t : doc.tokens) {
    if (t.kind == TokenKind::Word) {
      if (!stopwords.contains(t.normalized)) out.push_back(t.stem);
    } else if (t.kind == TokenKind::Hashtag) {
      if (!stopwords.contains(t.normalized)) out.push_back(porter_stem(t.normalized));
    }
  }
  return out;
}

std::vector<std::string> top_tfidf_unigrams(const std::vector<std::vector<std::string>>& docs,
                                            int n) {
  if (n < 1) throw ParameterError("unigram count must be >= 1");
  if (docs.empty()) throw EmptyInputError("no documents for TF-IDF");
  std::map<std::string, std::pair<double, double>> stats;  // term -> (tf sum, df)
  for (const auto& doc : docs) {
    std::unordered_set<std::string_view> seen;
    for (const auto& t : doc) {
      auto& s = stats[t];
      s.first += 1;
      if (seen.insert(t).second) s.second += 1;
    }
  }
  const double N = static_cast<double>(docs.size());
  std::vector<std::pair<std::string, double>> scored;
  scored.reserve(stats.size());
  for (const auto& [term, s] : stats) scored.emplace_back(term, s.first * std::log(N / s.second));
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < scored.size() && out.size() < static_cast<std::size_t>(n); ++i) {
    out.push_back(scored[i].first);
  }
  return out;
}

std::vector<std::string> augment_with_topic_words(std::vector<std::string> unigrams,
                                                  std::span<const LdaModel* const> models,
                                                  int per_topic) {
  if (per_topic <= 0) return unigrams;
  std::unordered_set<std::string> present(unigrams.begin(), unigrams.end());
  for (const LdaModel* model : models) {
    if (!model) continue;
    for (int k = 0; k < model->topics(); ++k) {
      for (const auto& tw : model->top_words(k, per_topic)) {
        if (present.insert(tw.term).second) unigrams.push_back(tw.term);
      }
    }
  }
  return unigrams;
}

std::vector<double> unigram_features(std::span<const std::string> doc_terms,
                                     std::span<const std::string> terms) {
  std::unordered_set<std::string_view> have(doc_terms.begin(), doc_terms.end());
  std::vector<double> out(terms.size(), 0.0);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (have.contains(terms[i])) out[i] = 1.0;
  }
  return out;
}

std::vector<double> linguistic_features(const TokenizedDoc& doc, const EmphaticLexicon& emphatic,
                                        bool length_in_chars, std::string_view text) {
  std::vector<double> out(kLinguisticFeatures, 0.0);
  for (const auto& t : doc.tokens) {
    if (t.kind != TokenKind::Word) continue;
    switch (t.pos) {
      case Pos::Noun: out[0] += 1; break;
      case Pos::Verb: out[1] += 1; break;
      case Pos::Adj: out[2] += 1; break;
      case Pos::Adv: out[3] += 1; break;
      case Pos::Other: break;
    }
  }
  out[4] = static_cast<double>(count_emphatics(doc, emphatic));
  out[5] = static_cast<double>(length_in_chars ? code_points(text) : doc.tokens.size());
  return out;
}

int classify_hashtag(const std::string& tag, const PolarityLexicon& lexicon) {
  if (const int* p = lexicon.override_for(tag)) return *p;
  int sum = 0;
  for (std::size_t i = 0; i < tag.size();) {
    std::size_t len = std::min(lexicon.longest_word(), tag.size() - i);
    for (; len > 0; --len) {
      if (lexicon.in_vocabulary(tag.substr(i, len))) break;
    }
    if (len == 0) return 0;  // unsegmentable
    sum += lexicon.word_polarity(tag.substr(i, len));
    i += len;
  }
  return (sum > 0) - (sum < 0);
}

std::vector<double> metadata_features(const LabeledTweet& tweet, const TokenizedDoc& doc,
                                      const PolarityLexicon& lexicon,
                                      std::span<const std::string> tag_vocab) {
  std::vector<double> out(kMetadataBaseFeatures + tag_vocab.size(), 0.0);
  out[0] = tweet.is_retweet ? 1.0 : 0.0;
  out[1] = static_cast<double>(extract_urls(doc).size());
  const auto tags = extract_hashtags(doc);
  for (const auto& tag : tags) {
    const int p = classify_hashtag(tag, lexicon);
    out[p > 0 ? 2 : (p == 0 ? 3 : 4)] += 1;
  }
  out[5] = static_cast<double>(tweet.followers.value_or(0));
  out[6] = static_cast<double>(tweet.followees.value_or(0));
  for (std::size_t i = 0; i < tag_vocab.size(); ++i) {
    if (std::find(tags.begin(), tags.end(), tag_vocab[i]) != tags.end()) {
      out[kMetadataBaseFeatures + i] = 1.0;
    }
  }
  return out;
}

std::unique_ptr<LdaModel> fit_topics(const std::vector<std::vector<std::string>>& docs,
                                     const LdaParams& params) {
  const bool any = std::any_of(docs.begin(), docs.end(), [](const auto& d) { return !d.empty(); });
  if (!any) return nullptr;
  return std::make_unique<LdaModel>(LdaModel::fit(docs, params));
}

FeatureBuilder::FeatureBuilder(const Corpus& corpus, FeatureConfig config,
                               const Lexicons& lexicons)
    : corpus_(corpus), config_(std::move(config)), lexicons_(lexicons) {
  if (corpus.empty()) throw EmptyInputError("cannot build features for an empty corpus");
  docs_.reserve(corpus.size());
  terms_.reserve(corpus.size());
  std::vector<std::vector<std::string>> pos_docs, neg_docs;
  std::map<std::string, int> tag_freq;
  for (const auto& tweet : corpus.tweets()) {
    auto doc = tokenize(tweet.text, lexicons.emoticons);
    doc.tweet_id = tweet.id;
    pos_tag(doc.tokens, lexicons.pos);
    for (const auto& tag : extract_hashtags(doc)) ++tag_freq[tag];
    auto terms = content_terms(doc, lexicons.stopwords);
    if (tweet.label.value() >= 4) pos_docs.push_back(terms);
    else if (tweet.label.value() <= 2) neg_docs.push_back(terms);
    docs_.push_back(std::move(doc));
    terms_.push_back(std::move(terms));
  }
  for (const auto& [tag, freq] : tag_freq) {
    if (freq >= config_.hashtag_min_frequency) tag_vocab_.push_back(tag);
  }

  tfidf_terms_ = top_tfidf_unigrams(terms_, config_.unigrams);
  if (config_.topic_words_per_topic > 0) {
    positive_ = fit_topics(pos_docs, config_.lda);
    negative_ = fit_topics(neg_docs, config_.lda);
  }
  const std::array<const LdaModel*, 2> models{positive_.get(), negative_.get()};
  unigram_terms_ = augment_with_topic_words(tfidf_terms_, models, config_.topic_words_per_topic);
}

FeatureMatrix FeatureBuilder::assemble(const FeatureCombo& combo, LabelScheme scheme) const {
  if (combo.empty()) throw ParameterError("feature combination is empty");
  std::vector<FeatureSpec> specs;
  if (combo.has(FeatureSet::Unigrams)) {
    for (const auto& t : unigram_terms_) {
      specs.push_back({"uni:" + t, FeatureSet::Unigrams, FeatureKind::Binary});
    }
  }
  if (combo.has(FeatureSet::Linguistic)) {
    for (const char* n : {"noun", "verb", "adjective", "adverb", "emphatics", "tweet_length"}) {
      specs.push_back({std::string("ling:") + n, FeatureSet::Linguistic, FeatureKind::Count});
    }
  }
  if (combo.has(FeatureSet::Metadata)) {
    specs.push_back({"meta:retweet", FeatureSet::Metadata, FeatureKind::Binary});
    for (const char* n : {"url_count", "hashtag_pos", "hashtag_neu", "hashtag_neg", "followers",
                          "followees"}) {
      specs.push_back({std::string("meta:") + n, FeatureSet::Metadata, FeatureKind::Count});
    }
    for (const auto& tag : tag_vocab_) {
      specs.push_back({"meta:tag:" + tag, FeatureSet::Metadata, FeatureKind::Binary});
    }
  }

  const auto labels = binarize_labels(corpus_, scheme);
  FeatureMatrix m(std::move(specs), labels.classes);
  std::vector<double> row;
  for (std::size_t i = 0; i < corpus_.size(); ++i) {
    const auto& tweet = corpus_.tweets()[i];
    row.clear();
    if (combo.has(FeatureSet::Unigrams)) {
      const auto v = unigram_features(terms_[i], unigram_terms_);
      row.insert(row.end(), v.begin(), v.end());
    }
    if (combo.has(FeatureSet::Linguistic)) {
      const auto v = linguistic_features(docs_[i], lexicons_.emphatic,
                                         config_.tweet_length_in_chars, tweet.text);
      row.insert(row.end(), v.begin(), v.end());
    }
    if (combo.has(FeatureSet::Metadata)) {
      const auto v = metadata_features(tweet, docs_[i], lexicons_.polarity, tag_vocab_);
      row.insert(row.end(), v.begin(), v.end());
    }
    m.add_row(tweet.id, row, labels.y[i]);
  }
  return m;
}

FeatureMatrix assemble(const Corpus& corpus, const FeatureCombo& combo, LabelScheme scheme,
                       const FeatureConfig& config, const Lexicons& lexicons) {
  return FeatureBuilder(corpus, config, lexicons).assemble(combo, scheme);
}

}  // namespace drivesent
