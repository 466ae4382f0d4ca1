#include "drivesent/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <unordered_map>

#include "drivesent/csv.hpp"
#include "drivesent/error.hpp"

namespace drivesent {
namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::optional<std::uint64_t> parse_count(std::string_view cell, std::size_t row,
                                         const std::string& column) {
  cell = trim(cell);
  if (cell.empty()) return std::nullopt;
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
    throw RowError(row, "column '" + column + "' is not a nonnegative integer: '" +
                            std::string(cell) + "'");
  }
  return v;
}

bool parse_flag(std::string_view cell) {
  const std::string v = lower(trim(cell));
  return v == "1" || v == "true" || v == "yes" || v == "y" || v == "t";
}

// Used when no retweet column is mapped.
bool looks_like_retweet(std::string_view text) {
  text = trim(text);
  return text.starts_with("RT @") || text.find(" RT @") != std::string_view::npos;
}

}  // namespace

SentimentLabel::SentimentLabel(int value) : value_(value) {
  if (value < kMin || value > kMax) {
    throw ParameterError("sentiment label out of range [1,5]: " + std::to_string(value));
  }
}

Corpus::Corpus(std::vector<LabeledTweet> tweets) : tweets_(std::move(tweets)) {
  for (const auto& t : tweets_) ++histogram_[t.label.value() - SentimentLabel::kMin];
}

double Corpus::majority_rate() const noexcept {
  if (tweets_.empty()) return 0.0;
  const auto top = *std::max_element(histogram_.begin(), histogram_.end());
  return static_cast<double>(top) / static_cast<double>(tweets_.size());
}

nlohmann::json Corpus::stats_json() const {
  nlohmann::json hist = nlohmann::json::object();
  for (int l = SentimentLabel::kMin; l <= SentimentLabel::kMax; ++l) {
    hist[std::to_string(l)] = histogram_[l - SentimentLabel::kMin];
  }
  return {{"total", tweets_.size()}, {"histogram", hist}, {"majority_rate", majority_rate()}};
}

Corpus load_csv(const std::filesystem::path& path, const ColumnMapping& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return load_csv(in, schema);
}

Corpus load_csv(std::istream& in, const ColumnMapping& schema) {
  csv::Reader reader(in);
  csv::Record header;
  if (!reader.next(header)) throw EmptyInputError("empty file: no header row");

  std::unordered_map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) {
    column.emplace(std::string(trim(header[i])), i);
  }
  auto required = [&](const std::string& name) {
    const auto it = column.find(name);
    if (name.empty() || it == column.end()) {
      throw SchemaError("missing required column '" + name + "'");
    }
    return it->second;
  };
  auto optional = [&](const std::string& name) -> std::optional<std::size_t> {
    if (name.empty()) return std::nullopt;
    const auto it = column.find(name);
    if (it == column.end()) throw SchemaError("mapped column '" + name + "' not in header");
    return it->second;
  };

  const std::size_t sentiment_col = required(schema.sentiment);
  const std::size_t text_col = required(schema.text);
  std::optional<std::size_t> id_col;
  if (!schema.id.empty() && column.contains(schema.id)) id_col = column.at(schema.id);
  const auto retweet_col = optional(schema.retweet);
  const auto followers_col = optional(schema.followers);
  const auto followees_col = optional(schema.followees);

  std::vector<LabeledTweet> tweets;
  csv::Record rec;
  std::size_t data_row = 0;
  while (reader.next(rec)) {
    if (rec.size() == 1 && trim(rec[0]).empty()) continue;
    ++data_row;
    const std::size_t line = reader.line();
    auto cell = [&](std::size_t i) -> std::string_view {
      return i < rec.size() ? std::string_view(rec[i]) : std::string_view();
    };

    const auto sentiment = trim(cell(sentiment_col));
    if (sentiment == schema.not_relevant_marker) continue;
    int value = 0;
    const auto [ptr, ec] =
        std::from_chars(sentiment.data(), sentiment.data() + sentiment.size(), value);
    if (sentiment.empty() || ec != std::errc{} || ptr != sentiment.data() + sentiment.size() ||
        value < SentimentLabel::kMin || value > SentimentLabel::kMax) {
      throw RowError(line, "unparseable sentiment value '" + std::string(sentiment) + "'");
    }

    LabeledTweet t;
    t.label = SentimentLabel(value);
    t.text = std::string(cell(text_col));
    if (trim(t.text).empty()) throw RowError(line, "empty tweet text");
    t.id = id_col ? std::string(cell(*id_col)) : std::to_string(data_row);
    if (followers_col) t.followers = parse_count(cell(*followers_col), line, schema.followers);
    if (followees_col) t.followees = parse_count(cell(*followees_col), line, schema.followees);
    t.is_retweet = retweet_col ? parse_flag(cell(*retweet_col)) : looks_like_retweet(t.text);
    tweets.push_back(std::move(t));
  }
  if (tweets.empty()) throw EmptyInputError("corpus is empty after filtering");
  return Corpus(std::move(tweets));
}

void write_csv(std::ostream& out, const Corpus& corpus, const ColumnMapping& schema) {
  csv::Record header{schema.id, schema.sentiment, schema.text};
  if (!schema.retweet.empty()) header.push_back(schema.retweet);
  if (!schema.followers.empty()) header.push_back(schema.followers);
  if (!schema.followees.empty()) header.push_back(schema.followees);
  csv::write_record(out, header);
  auto count = [](const std::optional<std::uint64_t>& v) {
    return v ? std::to_string(*v) : std::string();
  };
  for (const auto& t : corpus.tweets()) {
    csv::Record rec{t.id, std::to_string(t.label.value()), t.text};
    if (!schema.retweet.empty()) rec.push_back(t.is_retweet ? "1" : "0");
    if (!schema.followers.empty()) rec.push_back(count(t.followers));
    if (!schema.followees.empty()) rec.push_back(count(t.followees));
    csv::write_record(out, rec);
  }
}

PolarSplit split_polar(const Corpus& corpus) {
  std::vector<LabeledTweet> pos, neg;
  for (const auto& t : corpus.tweets()) {
    if (t.label.value() >= 4) pos.push_back(t);
    else if (t.label.value() <= 2) neg.push_back(t);
  }
  return {Corpus(std::move(pos)), Corpus(std::move(neg))};
}

LabelScheme parse_label_scheme(const std::string& name) {
  const auto v = lower(name);
  if (v == "five" || v == "fiveclass" || v == "5") return LabelScheme::FiveClass;
  if (v == "three" || v == "threeclass" || v == "3") return LabelScheme::ThreeClass;
  throw ParameterError("unknown label scheme '" + name + "' (expected five|three)");
}

std::string to_string(LabelScheme scheme) {
  return scheme == LabelScheme::FiveClass ? "five" : "three";
}

std::vector<std::string> class_names(LabelScheme scheme) {
  if (scheme == LabelScheme::FiveClass) return {"1", "2", "3", "4", "5"};
  return {"NEG", "NEU", "POS"};
}

int class_index(SentimentLabel label, LabelScheme scheme) {
  const int v = label.value();
  if (scheme == LabelScheme::FiveClass) return v - 1;
  return v <= 2 ? 0 : (v == 3 ? 1 : 2);
}

LabeledClasses binarize_labels(const Corpus& corpus, LabelScheme scheme) {
  LabeledClasses out{class_names(scheme), {}};
  out.y.reserve(corpus.size());
  for (const auto& t : corpus.tweets()) out.y.push_back(class_index(t.label, scheme));
  return out;
}

}  // namespace drivesent
