#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace drivesent {

// Ordinal annotation 1 (most negative) .. 5 (most positive).
class SentimentLabel {
 public:
  static constexpr int kMin = 1;
  static constexpr int kMax = 5;

  // Throws ParameterError outside [1, 5].
  explicit SentimentLabel(int value);

  int value() const noexcept { return value_; }
  auto operator<=>(const SentimentLabel&) const = default;

 private:
  int value_;
};

struct LabeledTweet {
  std::string id;
  std::string text;  // byte-exact from the source file
  SentimentLabel label{3};
  std::optional<std::uint64_t> followers;
  std::optional<std::uint64_t> followees;
  bool is_retweet = false;

  bool operator==(const LabeledTweet&) const = default;
};

// Which header names hold which fields. Optional columns left empty are
// treated as absent from the file.
struct ColumnMapping {
  std::string id = "_unit_id";
  std::string sentiment = "sentiment";
  std::string text = "text";
  std::string retweet;
  std::string followers;
  std::string followees;
  std::string not_relevant_marker = "not_relevant";
};

class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<LabeledTweet> tweets);

  const std::vector<LabeledTweet>& tweets() const noexcept { return tweets_; }
  std::size_t size() const noexcept { return tweets_.size(); }
  bool empty() const noexcept { return tweets_.empty(); }

  std::size_t count(SentimentLabel label) const noexcept {
    return histogram_[label.value() - SentimentLabel::kMin];
  }
  // Share of the most frequent label; 0 for an empty corpus.
  double majority_rate() const noexcept;

  // {"total": int, "histogram": {"1": n, ...}, "majority_rate": float}
  nlohmann::json stats_json() const;

  bool operator==(const Corpus& other) const { return tweets_ == other.tweets_; }

 private:
  std::vector<LabeledTweet> tweets_;
  std::array<std::size_t, 5> histogram_{};
};

Corpus load_csv(const std::filesystem::path& path, const ColumnMapping& schema);
Corpus load_csv(std::istream& in, const ColumnMapping& schema);

// Writes the columns named in `schema` (id, sentiment, text and any mapped
// optional columns), so that load_csv(write_csv(c)) == c.
void write_csv(std::ostream& out, const Corpus& corpus, const ColumnMapping& schema);

struct PolarSplit {
  Corpus positive;  // labels 4, 5
  Corpus negative;  // labels 1, 2
};

PolarSplit split_polar(const Corpus& corpus);

enum class LabelScheme { FiveClass, ThreeClass };

LabelScheme parse_label_scheme(const std::string& name);
std::string to_string(LabelScheme scheme);

// Class names in index order: "1".."5" or "NEG","NEU","POS".
std::vector<std::string> class_names(LabelScheme scheme);
int class_index(SentimentLabel label, LabelScheme scheme);

struct LabeledClasses {
  std::vector<std::string> classes;
  std::vector<int> y;  // index into `classes`, one per tweet
};

LabeledClasses binarize_labels(const Corpus& corpus, LabelScheme scheme);

}  // namespace drivesent
