#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

namespace drivesent {

enum class Pos { Noun, Verb, Adj, Adv, Other };

std::string_view to_string(Pos pos);

// One term per line; '#' comment lines and blank lines ignored.
class WordList {
 public:
  WordList() = default;
  explicit WordList(std::unordered_set<std::string> entries) : entries_(std::move(entries)) {}

  static WordList parse(std::istream& in);
  static WordList load(const std::filesystem::path& path);

  bool contains(const std::string& term) const { return entries_.contains(term); }
  void add(std::string term) { entries_.insert(std::move(term)); }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::unordered_set<std::string>& entries() const noexcept { return entries_; }

 private:
  std::unordered_set<std::string> entries_;
};

// Lowercase intensifiers. Entries must be lowercase without whitespace.
class EmphaticLexicon {
 public:
  EmphaticLexicon() = default;
  explicit EmphaticLexicon(WordList words);

  bool contains(const std::string& word) const { return words_.contains(word); }
  std::size_t size() const noexcept { return words_.size(); }

 private:
  WordList words_;
};

// "word<TAB>TAG" lines, TAG one of NOUN VERB ADJ ADV OTHER.
class PosLexicon {
 public:
  static PosLexicon parse(std::istream& in);
  static PosLexicon load(const std::filesystem::path& path);

  void set(std::string word, Pos pos) { tags_[std::move(word)] = pos; }
  const Pos* find(const std::string& word) const {
    const auto it = tags_.find(word);
    return it == tags_.end() ? nullptr : &it->second;
  }
  std::size_t size() const noexcept { return tags_.size(); }
  const std::unordered_map<std::string, Pos>& entries() const noexcept { return tags_; }

 private:
  std::unordered_map<std::string, Pos> tags_;
};

// Word polarities (+1, 0, -1) plus manual hashtag overrides. `vocabulary`
// is the wordlist hashtags are segmented against.
class PolarityLexicon {
 public:
  // Both files: "term<TAB>{+1|0|-1}".
  static std::unordered_map<std::string, int> parse_polarities(std::istream& in);
  static std::unordered_map<std::string, int> load_polarities(const std::filesystem::path& path);

  void set_word(std::string word, int polarity);
  void set_override(std::string hashtag, int polarity);
  void add_vocabulary(const std::string& word);

  int word_polarity(const std::string& word) const {
    const auto it = words_.find(word);
    return it == words_.end() ? 0 : it->second;
  }
  const int* override_for(const std::string& hashtag) const {
    const auto it = overrides_.find(hashtag);
    return it == overrides_.end() ? nullptr : &it->second;
  }
  bool in_vocabulary(const std::string& word) const { return vocabulary_.contains(word); }
  std::size_t longest_word() const noexcept { return longest_; }

 private:
  std::unordered_map<std::string, int> words_;
  std::unordered_map<std::string, int> overrides_;
  std::unordered_set<std::string> vocabulary_;
  std::size_t longest_ = 0;
};

struct LexiconPaths {
  std::filesystem::path stopwords;
  std::filesystem::path emoticons;
  std::filesystem::path emphatic;
  std::filesystem::path pos;
  std::filesystem::path polarity;
  std::filesystem::path hashtag_overrides;

  // The files shipped in the repository's data/ directory.
  static LexiconPaths bundled();
};

struct Lexicons {
  WordList stopwords;
  WordList emoticons;
  EmphaticLexicon emphatic;
  PosLexicon pos;
  PolarityLexicon polarity;

  static Lexicons load(const LexiconPaths& paths);
};

// Bundled lexicons, loaded once.
const Lexicons& bundled_lexicons();

}  // namespace drivesent
