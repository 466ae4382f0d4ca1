#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "drivesent/lexicon.hpp"

namespace drivesent {

enum class TokenKind { Word, Hashtag, Mention, Url, Emoticon, Punct, Number };

std::string_view to_string(TokenKind kind);

struct Token {
  std::string surface;
  // Lowercased; hashtags lose '#', mentions lose '@', U+2019 becomes '.
  std::string normalized;
  TokenKind kind = TokenKind::Word;
  // Porter stem for words, `normalized` for everything else.
  std::string stem;
  Pos pos = Pos::Other;
};

struct TokenizedDoc {
  std::string tweet_id;
  std::vector<Token> tokens;
  // Maximal runs of two or more '!'.
  std::size_t exclamation_runs = 0;
};

// Whitespace split, then punctuation peeled from both ends of each chunk.
// Apostrophes inside a word stay in it ("don't" is one token). Chunks that
// are listed in `emoticons` become EMOTICON tokens whole.
TokenizedDoc tokenize(std::string_view text, const WordList& emoticons);
TokenizedDoc tokenize(std::string_view text);  // bundled emoticon list

std::vector<Token> remove_stopwords(std::vector<Token> tokens, const WordList& stopwords);

// Lexicon lookup, then suffix rules, then NOUN. Non-words get OTHER.
void pos_tag(std::vector<Token>& tokens, const PosLexicon& lexicon);
Pos tag_word(const std::string& word, const PosLexicon& lexicon);

// Tokens carrying any emphasis signal, each counted at most once: lexicon
// intensifier, all-caps word (length >= 2), a character repeated three or
// more times in a row, or a run of two or more '!'.
std::size_t count_emphatics(const TokenizedDoc& doc, const EmphaticLexicon& lexicon);

std::vector<std::string> extract_hashtags(const TokenizedDoc& doc);
std::vector<std::string> extract_urls(const TokenizedDoc& doc);

}  // namespace drivesent
