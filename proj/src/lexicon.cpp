#include "drivesent/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "drivesent/error.hpp"

namespace drivesent {
namespace {

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open lexicon file " + path.string());
  return in;
}

std::string_view strip(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

bool skip(std::string_view line) { return line.empty() || line.front() == '#'; }

bool is_lower_token(std::string_view s) {
  return !s.empty() && std::none_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isspace(c) || std::isupper(c);
  });
}

Pos parse_pos(std::string_view tag, std::size_t line) {
  if (tag == "NOUN") return Pos::Noun;
  if (tag == "VERB") return Pos::Verb;
  if (tag == "ADJ") return Pos::Adj;
  if (tag == "ADV") return Pos::Adv;
  if (tag == "OTHER") return Pos::Other;
  throw DataError("POS lexicon line " + std::to_string(line) + ": unknown tag '" +
                  std::string(tag) + "'");
}

}  // namespace

std::string_view to_string(Pos pos) {
  switch (pos) {
    case Pos::Noun: return "NOUN";
    case Pos::Verb: return "VERB";
    case Pos::Adj: return "ADJ";
    case Pos::Adv: return "ADV";
    case Pos::Other: return "OTHER";
  }
  return "OTHER";
}

WordList WordList::parse(std::istream& in) {
  WordList out;
  std::string raw;
  while (std::getline(in, raw)) {
    const auto line = strip(raw);
    if (!skip(line)) out.add(std::string(line));
  }
  return out;
}

WordList WordList::load(const std::filesystem::path& path) {
  auto in = open(path);
  return parse(in);
}

EmphaticLexicon::EmphaticLexicon(WordList words) : words_(std::move(words)) {
  for (const auto& w : words_.entries()) {
    if (!is_lower_token(w)) throw DataError("emphatic entry must be lowercase: '" + w + "'");
  }
}

PosLexicon PosLexicon::parse(std::istream& in) {
  PosLexicon out;
  std::string raw;
  std::size_t n = 0;
  while (std::getline(in, raw)) {
    ++n;
    const auto line = strip(raw);
    if (skip(line)) continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw DataError("POS lexicon line " + std::to_string(n) + ": expected word<TAB>TAG");
    }
    out.set(std::string(line.substr(0, tab)), parse_pos(strip(line.substr(tab + 1)), n));
  }
  return out;
}

PosLexicon PosLexicon::load(const std::filesystem::path& path) {
  auto in = open(path);
  return parse(in);
}

std::unordered_map<std::string, int> PolarityLexicon::parse_polarities(std::istream& in) {
  std::unordered_map<std::string, int> out;
  std::string raw;
  std::size_t n = 0;
  while (std::getline(in, raw)) {
    ++n;
    const auto line = strip(raw);
    if (skip(line)) continue;
    const auto tab = line.find('\t');
    const auto value = tab == std::string_view::npos ? "" : strip(line.substr(tab + 1));
    int polarity;
    if (value == "+1" || value == "1") polarity = 1;
    else if (value == "0") polarity = 0;
    else if (value == "-1") polarity = -1;
    else {
      throw DataError("polarity line " + std::to_string(n) + ": expected term<TAB>{+1|0|-1}");
    }
    out[std::string(line.substr(0, tab))] = polarity;
  }
  return out;
}

std::unordered_map<std::string, int> PolarityLexicon::load_polarities(
    const std::filesystem::path& path) {
  auto in = open(path);
  return parse_polarities(in);
}

void PolarityLexicon::set_word(std::string word, int polarity) {
  add_vocabulary(word);
  words_[std::move(word)] = polarity;
}

void PolarityLexicon::set_override(std::string hashtag, int polarity) {
  if (!is_lower_token(hashtag) || hashtag.front() == '#') {
    throw DataError("hashtag override must be lowercase without '#': '" + hashtag + "'");
  }
  overrides_[std::move(hashtag)] = polarity;
}

void PolarityLexicon::add_vocabulary(const std::string& word) {
  // Single letters other than "a"/"i" would let almost anything segment.
  if (word.size() < 2 && word != "a" && word != "i") return;
  vocabulary_.insert(word);
  longest_ = std::max(longest_, word.size());
}

LexiconPaths LexiconPaths::bundled() {
  const std::filesystem::path dir = DRIVESENT_DATA_DIR;
  return {dir / "stopwords.txt", dir / "emoticons.txt",  dir / "emphatic.txt",
          dir / "pos_lexicon.tsv", dir / "polarity.tsv", dir / "hashtag_overrides.tsv"};
}

Lexicons Lexicons::load(const LexiconPaths& paths) {
  Lexicons lex;
  lex.stopwords = WordList::load(paths.stopwords);
  lex.emoticons = WordList::load(paths.emoticons);
  lex.emphatic = EmphaticLexicon(WordList::load(paths.emphatic));
  lex.pos = PosLexicon::load(paths.pos);
  for (const auto& [word, polarity] : PolarityLexicon::load_polarities(paths.polarity)) {
    lex.polarity.set_word(word, polarity);
  }
  for (const auto& [word, tag] : lex.pos.entries()) lex.polarity.add_vocabulary(word);
  if (!paths.hashtag_overrides.empty()) {
    for (const auto& [tag, polarity] : PolarityLexicon::load_polarities(paths.hashtag_overrides)) {
      lex.polarity.set_override(tag, polarity);
    }
  }
  return lex;
}

const Lexicons& bundled_lexicons() {
  static const Lexicons lex = Lexicons::load(LexiconPaths::bundled());
  return lex;
}

}  // namespace drivesent
