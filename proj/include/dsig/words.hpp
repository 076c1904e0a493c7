#pragma once

// Alphabets, the head/tail extended alphabet, words over it and ordered word
// universes. Letters order as (base, sign) with head before tail; words order
// shortest first, then lexicographically. That order fixes feature columns.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dsig/error.hpp"
#include "dsig/text.hpp"

namespace dsig {

/// Ordered set of distinct event-type labels. Index i corresponds to labels()[i].
class Alphabet {
 public:
  Alphabet() = default;

  explicit Alphabet(std::vector<std::string> labels) : labels_(std::move(labels)) {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      const auto& label = labels_[i];
      if (!valid_label(label)) throw ConfigError("invalid alphabet label '" + label + "'");
      if (!index_.emplace(label, i).second) throw ConfigError("duplicate alphabet label '" + label + "'");
    }
  }

  /// Labels "1".."d".
  static Alphabet numbered(std::size_t d) {
    if (d == 0) throw ConfigError("alphabet size must be positive");
    std::vector<std::string> labels;
    labels.reserve(d);
    for (std::size_t i = 1; i <= d; ++i) labels.push_back(std::to_string(i));
    return Alphabet(std::move(labels));
  }

  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }

  std::optional<std::size_t> find(std::string_view label) const {
    const auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t index_of(std::string_view label) const {
    if (auto i = find(label)) return *i;
    throw DataError("unknown alphabet label '" + std::string(label) + "'");
  }

  /// Appends a label if absent and returns its index.
  std::size_t intern(std::string_view label) {
    if (auto i = find(label)) return *i;
    std::string owned(label);
    if (!valid_label(owned)) throw DataError("invalid event type '" + owned + "'");
    index_.emplace(owned, labels_.size());
    labels_.push_back(std::move(owned));
    return labels_.size() - 1;
  }

  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.labels_ == b.labels_; }

  // Labels must survive the word text format: no separators, not the empty-word token.
  static bool valid_label(std::string_view label) {
    if (label.empty() || label == "@") return false;
    return label.find_first_of(". \t\r\n") == std::string_view::npos;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

enum class Sign : std::uint8_t { head = 0, tail = 1 };

constexpr Sign flipped(Sign s) noexcept { return s == Sign::head ? Sign::tail : Sign::head; }
constexpr char sign_char(Sign s) noexcept { return s == Sign::head ? '-' : '+'; }

/// One letter of the extended alphabet: base letter i with sign head (i^-) or tail (i^+).
struct Letter {
  std::size_t base = 0;
  Sign sign = Sign::head;

  static constexpr Letter head(std::size_t i) noexcept { return {i, Sign::head}; }
  static constexpr Letter tail(std::size_t i) noexcept { return {i, Sign::tail}; }

  friend constexpr auto operator<=>(const Letter&, const Letter&) = default;
};

/// All 2d extended letters in canonical order: (0,head),(0,tail),(1,head),...
inline std::vector<Letter> extend_alphabet(const Alphabet& a) {
  if (a.empty()) throw ConfigError("alphabet must contain at least one letter");
  std::vector<Letter> out;
  out.reserve(2 * a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.push_back(Letter::head(i));
    out.push_back(Letter::tail(i));
  }
  return out;
}

/// Finite sequence of extended letters; the default-constructed word is the empty word.
class Word {
 public:
  Word() = default;
  Word(std::initializer_list<Letter> letters) : letters_(letters) {}
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}

  static Word empty() { return {}; }

  std::size_t size() const noexcept { return letters_.size(); }
  bool is_empty() const noexcept { return letters_.empty(); }
  std::span<const Letter> letters() const noexcept { return letters_; }
  const Letter& operator[](std::size_t i) const { return letters_[i]; }
  const Letter& front() const { return letters_.front(); }
  const Letter& back() const { return letters_.back(); }

  /// Word without its last letter. Requires a nonempty word.
  Word prefix() const {
    if (letters_.empty()) throw ConfigError("the empty word has no prefix");
    return Word(std::vector<Letter>(letters_.begin(), letters_.end() - 1));
  }

  Word appended(Letter l) const {
    Word w = *this;
    w.letters_.push_back(l);
    return w;
  }

  Word with_first_sign(Sign s) const {
    Word w = *this;
    if (!w.letters_.empty()) w.letters_.front().sign = s;
    return w;
  }

  friend bool operator==(const Word&, const Word&) = default;

  /// Canonical order: shorter words first, then lexicographic by letter.
  friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() <=> b.size();
    return std::lexicographical_compare_three_way(a.letters_.begin(), a.letters_.end(), b.letters_.begin(),
                                                  b.letters_.end());
  }

 private:
  std::vector<Letter> letters_;
};

inline Word concat(const Word& u, const Word& v) {
  std::vector<Letter> letters(u.letters().begin(), u.letters().end());
  letters.insert(letters.end(), v.letters().begin(), v.letters().end());
  return Word(std::move(letters));
}

/// "Contains any of these letters". Words are matched against this predicate when
/// selecting a feature set; other word languages can be plugged in through WordFilter.
class LetterPattern {
 public:
  explicit LetterPattern(std::vector<Letter> letters) : letters_(std::move(letters)) {
    if (letters_.empty()) throw ConfigError("letter pattern must name at least one letter");
    std::sort(letters_.begin(), letters_.end());
    letters_.erase(std::unique(letters_.begin(), letters_.end()), letters_.end());
  }

  const std::vector<Letter>& letters() const noexcept { return letters_; }

  bool contains(Letter l) const { return std::binary_search(letters_.begin(), letters_.end(), l); }

  bool operator()(const Word& w) const {
    return std::any_of(w.letters().begin(), w.letters().end(), [&](Letter l) { return contains(l); });
  }

  void validate(const Alphabet& a) const {
    for (const auto& l : letters_) {
      if (l.base >= a.size()) throw ConfigError("pattern letter outside the alphabet");
    }
  }

  friend bool operator==(const LetterPattern&, const LetterPattern&) = default;

 private:
  std::vector<Letter> letters_;
};

using WordFilter = std::function<bool(const Word&)>;

inline bool matches(const Word& w, const LetterPattern& p) { return p(w); }

/// Ordered, duplicate-free word set.
class WordUniverse {
 public:
  WordUniverse() = default;

  /// Sorts into canonical order and removes duplicates.
  static WordUniverse from_words(std::vector<Word> words) {
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());
    WordUniverse u;
    for (const auto& w : words) u.max_len_ = std::max(u.max_len_, w.size());
    u.words_ = std::move(words);
    return u;
  }

  const std::vector<Word>& words() const noexcept { return words_; }
  std::size_t size() const noexcept { return words_.size(); }
  std::size_t max_len() const noexcept { return max_len_; }
  bool half() const noexcept { return half_; }
  const std::optional<LetterPattern>& pattern() const noexcept { return pattern_; }

  bool contains_empty() const { return !words_.empty() && words_.front().is_empty(); }

  /// Words usable as features: everything except the empty word.
  std::vector<Word> feature_words() const {
    std::vector<Word> out;
    out.reserve(words_.size());
    for (const auto& w : words_) {
      if (!w.is_empty()) out.push_back(w);
    }
    return out;
  }

  std::size_t feature_count() const { return words_.size() - (contains_empty() ? 1 : 0); }

  std::size_t max_base() const {
    std::size_t m = 0;
    for (const auto& w : words_) {
      for (const auto& l : w.letters()) m = std::max(m, l.base + 1);
    }
    return m;
  }

 private:
  friend WordUniverse enumerate_words(const Alphabet&, std::span<const std::size_t>, std::size_t, bool,
                                      const std::optional<LetterPattern>&);

  std::vector<Word> words_;
  std::size_t max_len_ = 0;
  bool half_ = false;
  std::optional<LetterPattern> pattern_;
};

/// Words of length 0..k over the extended letters of `restrict_to`. With `half`,
/// nonempty words start with a head letter. With a pattern, words not matching it
/// are dropped, including the empty word.
inline WordUniverse enumerate_words(const Alphabet& a, std::span<const std::size_t> restrict_to, std::size_t k,
                                    bool half, const std::optional<LetterPattern>& pattern = std::nullopt) {
  if (restrict_to.empty()) throw ConfigError("word enumeration needs at least one alphabet letter");
  std::vector<std::size_t> bases(restrict_to.begin(), restrict_to.end());
  std::sort(bases.begin(), bases.end());
  bases.erase(std::unique(bases.begin(), bases.end()), bases.end());
  if (bases.back() >= a.size()) throw ConfigError("restricted letter outside the alphabet");
  if (pattern) pattern->validate(a);

  std::vector<Letter> letters;
  for (auto b : bases) {
    letters.push_back(Letter::head(b));
    letters.push_back(Letter::tail(b));
  }

  std::vector<Word> all{Word{}};
  std::vector<Word> level{Word{}};
  for (std::size_t len = 1; len <= k; ++len) {
    std::vector<Word> next;
    next.reserve(level.size() * letters.size());
    for (const auto& w : level) {
      for (const auto& l : letters) {
        if (half && len == 1 && l.sign == Sign::tail) continue;
        next.push_back(w.appended(l));
      }
    }
    all.insert(all.end(), next.begin(), next.end());
    level = std::move(next);
  }

  WordUniverse u;
  u.max_len_ = k;
  u.half_ = half;
  u.pattern_ = pattern;
  if (pattern) {
    std::erase_if(all, [&](const Word& w) { return !(*pattern)(w); });
  }
  u.words_ = std::move(all);
  return u;
}

inline WordUniverse enumerate_words(const Alphabet& a, std::size_t k, bool half,
                                    const std::optional<LetterPattern>& pattern = std::nullopt) {
  std::vector<std::size_t> all(a.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return enumerate_words(a, all, k, half, pattern);
}

// Text form: "@" for the empty word, otherwise "<label><sign>" joined by '.', e.g. "1-.2+".

inline std::string render_letter(Letter l, const Alphabet& a) { return a.label(l.base) + sign_char(l.sign); }

inline std::string render_word(const Word& w, const Alphabet& a) {
  if (w.is_empty()) return "@";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += '.';
    out += render_letter(w[i], a);
  }
  return out;
}

inline Letter parse_letter(std::string_view token, const Alphabet& a) {
  if (token.size() < 2) throw DataError("malformed letter '" + std::string(token) + "'");
  Sign s;
  switch (token.back()) {
    case '-': s = Sign::head; break;
    case '+': s = Sign::tail; break;
    default: throw DataError("malformed sign in letter '" + std::string(token) + "'");
  }
  return {a.index_of(token.substr(0, token.size() - 1)), s};
}

inline Word parse_word(std::string_view text, const Alphabet& a) {
  text = text::trim(text);
  if (text == "@") return {};
  if (text.empty()) throw DataError("empty word text (use '@' for the empty word)");
  std::vector<Letter> letters;
  for (auto token : text::split(text, '.')) letters.push_back(parse_letter(token, a));
  return Word(std::move(letters));
}

/// Comma-separated letters such as "4-,4+".
inline LetterPattern parse_pattern(std::string_view text, const Alphabet& a) {
  std::vector<Letter> letters;
  for (auto token : text::split(text::trim(text), ',')) letters.push_back(parse_letter(text::trim(token), a));
  return LetterPattern(std::move(letters));
}

inline std::string universe_to_text(const WordUniverse& u, const Alphabet& a) {
  std::string out;
  for (const auto& w : u.words()) {
    out += render_word(w, a);
    out += '\n';
  }
  return out;
}

inline WordUniverse universe_from_text(std::string_view text, const Alphabet& a) {
  std::vector<Word> words;
  for (auto line : text::split(text, '\n')) {
    line = text::trim(line);
    if (!line.empty()) words.push_back(parse_word(line, a));
  }
  return WordUniverse::from_words(std::move(words));
}

}  // namespace dsig
