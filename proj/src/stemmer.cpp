#include "drivesent/stemmer.hpp"

#include <array>
#include <utility>

namespace drivesent {
namespace {

class Stemmer {
 public:
  explicit Stemmer(std::string_view word) : b_(word) {}

  std::string run() && {
    step1a();
    step1b();
    step1c();
    step2();
    step3();
    step4();
    step5();
    return std::move(b_);
  }

 private:
  using Rule = std::pair<std::string_view, std::string_view>;

  bool cons(std::size_t i) const {
    switch (b_[i]) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !cons(i - 1);
      default:
        return true;
    }
  }

  // Number of VC sequences in b_[0, len).
  int measure(std::size_t len) const {
    int m = 0;
    std::size_t i = 0;
    while (i < len && cons(i)) ++i;
    while (i < len) {
      while (i < len && !cons(i)) ++i;
      if (i >= len) break;
      while (i < len && cons(i)) ++i;
      ++m;
    }
    return m;
  }

  bool has_vowel(std::size_t len) const {
    for (std::size_t i = 0; i < len; ++i) {
      if (!cons(i)) return true;
    }
    return false;
  }

  bool double_cons(std::size_t len) const {
    return len >= 2 && b_[len - 1] == b_[len - 2] && cons(len - 1);
  }

  // *o: stem ends consonant-vowel-consonant, last consonant not w, x or y.
  bool cvc(std::size_t len) const {
    if (len < 3 || !cons(len - 1) || cons(len - 2) || !cons(len - 3)) return false;
    const char c = b_[len - 1];
    return c != 'w' && c != 'x' && c != 'y';
  }

  bool ends(std::string_view s) const { return std::string_view(b_).ends_with(s); }

  void replace_tail(std::size_t suffix_len, std::string_view with) {
    b_.resize(b_.size() - suffix_len);
    b_.append(with);
  }

  // Applies the first rule whose suffix matches, if the remaining stem has
  // measure > min_m. Only one rule per list is ever considered.
  template <std::size_t N>
  void apply_rules(const std::array<Rule, N>& rules, int min_m) {
    for (const auto& [suffix, repl] : rules) {
      if (ends(suffix)) {
        if (measure(b_.size() - suffix.size()) > min_m) replace_tail(suffix.size(), repl);
        return;
      }
    }
  }

  void step1a() {
    if (ends("sses")) replace_tail(4, "ss");
    else if (ends("ies")) replace_tail(3, "i");
    else if (ends("ss")) return;
    else if (ends("s")) replace_tail(1, "");
  }

  void step1b() {
    if (ends("eed")) {
      if (measure(b_.size() - 3) > 0) replace_tail(1, "");
      return;
    }
    std::size_t cut = 0;
    if (ends("ed") && has_vowel(b_.size() - 2)) cut = 2;
    else if (ends("ing") && has_vowel(b_.size() - 3)) cut = 3;
    if (cut == 0) return;
    replace_tail(cut, "");
    if (ends("at") || ends("bl") || ends("iz")) {
      b_.push_back('e');
    } else if (double_cons(b_.size())) {
      const char c = b_.back();
      if (c != 'l' && c != 's' && c != 'z') b_.pop_back();
    } else if (measure(b_.size()) == 1 && cvc(b_.size())) {
      b_.push_back('e');
    }
  }

  void step1c() {
    if (ends("y") && has_vowel(b_.size() - 1)) b_.back() = 'i';
  }

  void step2() {
    static constexpr std::array<Rule, 20> kRules{{
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},  {"anci", "ance"},
        {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},    {"entli", "ent"},
        {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
        {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
        {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},  {"biliti", "ble"},
    }};
    apply_rules(kRules, 0);
  }

  void step3() {
    static constexpr std::array<Rule, 7> kRules{{
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
        {"ical", "ic"},  {"ful", ""},   {"ness", ""},
    }};
    apply_rules(kRules, 0);
  }

  void step4() {
    static constexpr std::array<std::string_view, 19> kSuffixes{
        "al",   "ance", "ence", "er",  "ic",  "able", "ible", "ant", "ement", "ment",
        "ent",  "ion",  "ou",   "ism", "ate", "iti",  "ous",  "ive", "ize"};
    // Longest match first: "ement" before "ment" before "ent".
    std::string_view best;
    for (auto s : kSuffixes) {
      if (ends(s) && s.size() > best.size()) best = s;
    }
    if (best.empty()) return;
    const std::size_t stem_len = b_.size() - best.size();
    if (measure(stem_len) <= 1) return;
    if (best == "ion" && !(stem_len > 0 && (b_[stem_len - 1] == 's' || b_[stem_len - 1] == 't'))) {
      return;
    }
    b_.resize(stem_len);
  }

  void step5() {
    if (ends("e")) {
      const std::size_t len = b_.size() - 1;
      const int m = measure(len);
      if (m > 1 || (m == 1 && !cvc(len))) b_.pop_back();
    }
    if (measure(b_.size()) > 1 && double_cons(b_.size()) && b_.back() == 'l') b_.pop_back();
  }

  std::string b_;
};

}  // namespace

std::string porter_stem(std::string_view word) {
  if (word.empty()) return {};
  return Stemmer(word).run();
}

}  // namespace drivesent
