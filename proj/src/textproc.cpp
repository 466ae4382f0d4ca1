#include "drivesent/textproc.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "drivesent/stemmer.hpp"

namespace drivesent {
namespace {

// UTF-8 punctuation seen in tweets: ellipsis, curly double and single quotes.
constexpr std::array<std::string_view, 5> kWidePunct{
    "\xE2\x80\xA6", "\xE2\x80\x9C", "\xE2\x80\x9D", "\xE2\x80\x98", "\xE2\x80\x99"};
constexpr std::string_view kRightQuote = "\xE2\x80\x99";

bool ascii_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }
bool ascii_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

std::size_t punct_prefix_len(std::string_view s) {
  if (s.empty()) return 0;
  if (ascii_punct(s.front())) return 1;
  for (auto p : kWidePunct) {
    if (s.starts_with(p)) return p.size();
  }
  return 0;
}

std::size_t punct_suffix_len(std::string_view s) {
  if (s.empty()) return 0;
  if (ascii_punct(s.back())) return 1;
  for (auto p : kWidePunct) {
    if (s.ends_with(p)) return p.size();
  }
  return 0;
}

// Alphanumeric, '_' or a non-punctuation UTF-8 byte.
bool word_char_at(std::string_view s, std::size_t i) {
  const char c = s[i];
  if (ascii_alnum(c) || c == '_') return true;
  return static_cast<unsigned char>(c) >= 0x80 && punct_prefix_len(s.substr(i)) == 0;
}

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string decode_entities(std::string_view text) {
  static constexpr std::array<std::pair<std::string_view, char>, 5> kEntities{{
      {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&#39;", '\''}}};
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    bool hit = false;
    if (text[i] == '&') {
      for (const auto& [name, ch] : kEntities) {
        if (text.substr(i).starts_with(name)) {
          out.push_back(ch);
          i += name.size();
          hit = true;
          break;
        }
      }
    }
    if (!hit) out.push_back(text[i++]);
  }
  return out;
}

bool is_number(std::string_view s) {
  if (s.empty() || !std::isdigit(static_cast<unsigned char>(s.front())) ||
      !std::isdigit(static_cast<unsigned char>(s.back()))) {
    return false;
  }
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == ',' || c == ':';
  });
}

bool is_url(std::string_view s) {
  const auto low = lower_ascii(s.substr(0, 8));
  return low.starts_with("http://") || low.starts_with("https://") ||
         s.find("t.co/") != std::string_view::npos;
}

class ChunkTokenizer {
 public:
  ChunkTokenizer(const WordList& emoticons, std::vector<Token>& out)
      : emoticons_(emoticons), out_(out) {}

  void chunk(std::string_view c) {
    if (c.empty()) return;
    if (emoticons_.contains(std::string(c))) {
      emit(c, TokenKind::Emoticon);
      return;
    }

    std::vector<std::string_view> lead;
    std::size_t i = 0;
    while (i < c.size()) {
      const auto len = punct_prefix_len(c.substr(i));
      if (len == 0) break;
      if (len == 1 && (c[i] == '#' || c[i] == '@') && i + 1 < c.size() && word_char_at(c, i + 1)) {
        break;
      }
      lead.push_back(c.substr(i, len));
      i += len;
    }
    emit_punct(lead);
    const auto rest = c.substr(i);
    if (rest.empty()) return;

    if (is_url(rest)) {
      std::string_view core = rest;
      auto trail = peel_trailing(core, /*keep_slash=*/true);
      emit(core, TokenKind::Url);
      emit_punct(trail);
      return;
    }

    if (rest.front() == '#' || rest.front() == '@') {
      std::size_t end = 1;
      while (end < rest.size() && word_char_at(rest, end)) ++end;
      emit(rest.substr(0, end), rest.front() == '#' ? TokenKind::Hashtag : TokenKind::Mention);
      chunk(rest.substr(end));
      return;
    }

    std::string_view core = rest;
    auto trail = peel_trailing(core, /*keep_slash=*/false);
    if (!core.empty()) emit(core, is_number(core) ? TokenKind::Number : TokenKind::Word);
    emit_punct(trail);
  }

 private:
  // Removes trailing punctuation from `core`, returned in text order.
  static std::vector<std::string_view> peel_trailing(std::string_view& core, bool keep_slash) {
    std::vector<std::string_view> trail;
    while (!core.empty()) {
      const auto len = punct_suffix_len(core);
      if (len == 0 || (keep_slash && len == 1 && core.back() == '/')) break;
      trail.push_back(core.substr(core.size() - len));
      core.remove_suffix(len);
    }
    std::reverse(trail.begin(), trail.end());
    return trail;
  }

  // Consecutive identical punctuation marks form one token ("!!!").
  void emit_punct(const std::vector<std::string_view>& units) {
    for (std::size_t i = 0; i < units.size();) {
      std::size_t j = i + 1;
      while (j < units.size() && units[j] == units[i]) ++j;
      const auto* begin = units[i].data();
      emit(std::string_view(begin, units[j - 1].data() + units[j - 1].size() - begin),
           TokenKind::Punct);
      i = j;
    }
  }

  void emit(std::string_view surface, TokenKind kind) {
    Token t;
    t.surface = std::string(surface);
    t.kind = kind;
    std::string_view body = surface;
    if (kind == TokenKind::Hashtag || kind == TokenKind::Mention) body.remove_prefix(1);
    t.normalized = lower_ascii(body);
    for (std::size_t p; (p = t.normalized.find(kRightQuote)) != std::string::npos;) {
      t.normalized.replace(p, kRightQuote.size(), "'");
    }
    t.stem = kind == TokenKind::Word ? porter_stem(t.normalized) : t.normalized;
    if (t.stem.empty()) t.stem = t.normalized;
    out_.push_back(std::move(t));
  }

  const WordList& emoticons_;
  std::vector<Token>& out_;
};

std::size_t bang_runs(std::string_view s) {
  std::size_t runs = 0;
  for (std::size_t i = 0; i < s.size();) {
    if (s[i] != '!') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < s.size() && s[j] == '!') ++j;
    if (j - i >= 2) ++runs;
    i = j;
  }
  return runs;
}

bool has_triple(std::string_view s) {
  for (std::size_t i = 2; i < s.size(); ++i) {
    if (s[i] == s[i - 1] && s[i] == s[i - 2]) return true;
  }
  return false;
}

bool all_caps(std::string_view s) {
  return s.size() >= 2 &&
         std::all_of(s.begin(), s.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
}

bool lexicon_verb(const std::string& word, const PosLexicon& lex) {
  const Pos* p = lex.find(word);
  return p && *p == Pos::Verb;
}

// Base forms to try for an -ing/-ed word whose suffix has been cut off.
bool base_is_verb(const std::string& base, const PosLexicon& lex) {
  if (base.empty()) return false;
  if (lexicon_verb(base, lex) || lexicon_verb(base + "e", lex)) return true;
  const auto n = base.size();
  if (n >= 2 && base[n - 1] == base[n - 2] && lexicon_verb(base.substr(0, n - 1), lex)) {
    return true;
  }
  return base.back() == 'i' && lexicon_verb(base.substr(0, n - 1) + "y", lex);
}

}  // namespace

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Word: return "WORD";
    case TokenKind::Hashtag: return "HASHTAG";
    case TokenKind::Mention: return "MENTION";
    case TokenKind::Url: return "URL";
    case TokenKind::Emoticon: return "EMOTICON";
    case TokenKind::Punct: return "PUNCT";
    case TokenKind::Number: return "NUMBER";
  }
  return "WORD";
}

TokenizedDoc tokenize(std::string_view text, const WordList& emoticons) {
  TokenizedDoc doc;
  const std::string decoded = decode_entities(text);
  ChunkTokenizer chunker(emoticons, doc.tokens);
  const std::string_view s = decoded;
  for (std::size_t i = 0; i < s.size();) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    chunker.chunk(s.substr(i, j - i));
    i = j;
  }
  for (const auto& t : doc.tokens) doc.exclamation_runs += bang_runs(t.surface);
  return doc;
}

TokenizedDoc tokenize(std::string_view text) {
  return tokenize(text, bundled_lexicons().emoticons);
}

std::vector<Token> remove_stopwords(std::vector<Token> tokens, const WordList& stopwords) {
  std::erase_if(tokens, [&](const Token& t) {
    return t.kind == TokenKind::Word && stopwords.contains(t.normalized);
  });
  return tokens;
}

Pos tag_word(const std::string& w, const PosLexicon& lex) {
  if (const Pos* p = lex.find(w)) return *p;
  const std::string_view s = w;
  if (s.size() > 2 && s.ends_with("ly")) return Pos::Adv;
  if (s.ends_with("ous") || s.ends_with("ful") || s.ends_with("able") || s.ends_with("ive")) {
    return Pos::Adj;
  }
  if (s.size() > 4 && (s.ends_with("ize") || s.ends_with("ate"))) return Pos::Verb;
  if (s.size() > 4 && s.ends_with("ing")) {
    return base_is_verb(w.substr(0, w.size() - 3), lex) ? Pos::Verb : Pos::Adj;
  }
  if (s.size() > 3 && s.ends_with("ed")) {
    return base_is_verb(w.substr(0, w.size() - 2), lex) ? Pos::Verb : Pos::Adj;
  }
  return Pos::Noun;
}

void pos_tag(std::vector<Token>& tokens, const PosLexicon& lexicon) {
  for (auto& t : tokens) {
    t.pos = t.kind == TokenKind::Word ? tag_word(t.normalized, lexicon) : Pos::Other;
  }
}

std::size_t count_emphatics(const TokenizedDoc& doc, const EmphaticLexicon& lexicon) {
  std::size_t count = 0;
  for (const auto& t : doc.tokens) {
    const bool word = t.kind == TokenKind::Word;
    const bool stretchable =
        word || t.kind == TokenKind::Hashtag || t.kind == TokenKind::Punct;
    const bool hit = (word && lexicon.contains(t.normalized)) || (word && all_caps(t.surface)) ||
                     (stretchable && has_triple(t.surface)) || bang_runs(t.surface) > 0;
    if (hit) ++count;
  }
  return count;
}

std::vector<std::string> extract_hashtags(const TokenizedDoc& doc) {
  std::vector<std::string> out;
  for (const auto& t : doc.tokens) {
    if (t.kind == TokenKind::Hashtag) out.push_back(t.normalized);
  }
  return out;
}

std::vector<std::string> extract_urls(const TokenizedDoc& doc) {
  std::vector<std::string> out;
  for (const auto& t : doc.tokens) {
    if (t.kind == TokenKind::Url) out.push_back(t.surface);
  }
  return out;
}

}  // namespace drivesent
