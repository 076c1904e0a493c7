#include <catch_amalgamated.hpp>

#include <random>
#include <set>

#include "dsig/words.hpp"
#include "test_support.hpp"

using namespace dsig;
using dsig::testing::word;

namespace {

std::size_t power(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e--) r *= b;
  return r;
}

Word random_word(std::mt19937_64& rng, std::size_t d, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len), base(0, d - 1), sign(0, 1);
  std::vector<Letter> letters(len(rng));
  for (auto& l : letters) l = {base(rng), sign(rng) ? Sign::tail : Sign::head};
  return Word(std::move(letters));
}

}  // namespace

TEST_CASE("extend_alphabet lists head then tail for each letter") {
  CHECK(extend_alphabet(Alphabet::numbered(1)) == std::vector<Letter>{Letter::head(0), Letter::tail(0)});
  CHECK(extend_alphabet(Alphabet::numbered(2)) ==
        std::vector<Letter>{Letter::head(0), Letter::tail(0), Letter::head(1), Letter::tail(1)});
  CHECK(extend_alphabet(Alphabet::numbered(4)).size() == 8);
  CHECK_THROWS_AS(extend_alphabet(Alphabet{}), ConfigError);
}

TEST_CASE("alphabet rejects duplicate and unusable labels") {
  CHECK_THROWS_AS(Alphabet({"a", "a"}), ConfigError);
  CHECK_THROWS_AS(Alphabet({"a.b"}), ConfigError);
  CHECK_THROWS_AS(Alphabet({"@"}), ConfigError);
  const Alphabet a({"bid", "ask"});
  CHECK(a.index_of("ask") == 1);
  CHECK_THROWS_AS(a.index_of("mid"), DataError);
}

TEST_CASE("concat") {
  const Word w = word({{1, '-'}, {2, '+'}});
  CHECK(concat(Word{}, w) == w);
  CHECK(concat(w, Word{}) == w);
  const auto uv = concat(word({{1, '-'}}), word({{2, '+'}}));
  CHECK(uv.size() == 2);
  CHECK(uv == w);

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_word(rng, 3, 4), b = random_word(rng, 3, 4), c = random_word(rng, 3, 4);
    const auto left = concat(concat(a, b), c);
    const auto right = concat(a, concat(b, c));
    REQUIRE(left == right);
    REQUIRE(left.size() == a.size() + b.size() + c.size());
  }
}

TEST_CASE("word counts of the morning/afternoon feature sets") {
  const auto a = Alphabet::numbered(4);
  const std::vector<std::size_t> only4{3}, two_and_four{1, 3};
  const LetterPattern contains4({Letter::head(3), Letter::tail(3)});
  const std::size_t singleton[] = {1, 3, 7}, full[] = {4, 36, 292}, pair[] = {2, 10, 42}, pattern[] = {1, 15, 163};
  for (std::size_t k = 1; k <= 3; ++k) {
    CAPTURE(k);
    CHECK(enumerate_words(a, only4, k, true).feature_count() == singleton[k - 1]);
    CHECK(enumerate_words(a, k, true).feature_count() == full[k - 1]);
    CHECK(enumerate_words(a, two_and_four, k, true).feature_count() == pair[k - 1]);
    CHECK(enumerate_words(a, k, true, contains4).feature_count() == pattern[k - 1]);
  }
}

TEST_CASE("universe sizes follow the closed forms") {
  for (std::size_t d = 1; d <= 4; ++d) {
    const auto a = Alphabet::numbered(d);
    for (std::size_t k = 0; k <= 4; ++k) {
      std::size_t full = 0, half = 1;
      for (std::size_t l = 0; l <= k; ++l) full += power(2 * d, l);
      for (std::size_t l = 1; l <= k; ++l) half += d * power(2 * d, l - 1);
      CAPTURE(d, k);
      CHECK(enumerate_words(a, k, false).size() == full);
      CHECK(enumerate_words(a, k, true).size() == half);
    }
  }
}

TEST_CASE("enumerated universes are canonical, duplicate-free and prefix-closed") {
  const auto a = Alphabet::numbered(3);
  for (bool half : {false, true}) {
    const auto u = enumerate_words(a, 3, half);
    const auto& words = u.words();
    REQUIRE(words.front().is_empty());
    CHECK(std::is_sorted(words.begin(), words.end()));
    CHECK(std::adjacent_find(words.begin(), words.end()) == words.end());
    const std::set<Word> all(words.begin(), words.end());
    for (const auto& w : words) {
      CHECK(w.size() <= 3);
      if (!w.is_empty()) {
        CHECK(all.contains(w.prefix()));
        if (half) CHECK(w.front().sign == Sign::head);
      }
    }
  }
}

TEST_CASE("canonical order: shorter first, then base, head before tail") {
  const auto u = enumerate_words(Alphabet::numbered(2), 1, false);
  REQUIRE(u.size() == 5);
  CHECK(u.words()[1] == word({{1, '-'}}));
  CHECK(u.words()[2] == word({{1, '+'}}));
  CHECK(u.words()[3] == word({{2, '-'}}));
  CHECK(u.words()[4] == word({{2, '+'}}));
  CHECK(word({{2, '+'}}) < word({{1, '-'}, {1, '-'}}));
}

TEST_CASE("enumerate_words errors") {
  const auto a = Alphabet::numbered(4);
  CHECK_THROWS_AS(enumerate_words(a, std::vector<std::size_t>{}, 2, true), ConfigError);
  CHECK_THROWS_AS(enumerate_words(a, std::vector<std::size_t>{4}, 2, true), ConfigError);
  CHECK_THROWS_AS(enumerate_words(Alphabet::numbered(2), 2, true, LetterPattern({Letter::head(3)})), ConfigError);
}

TEST_CASE("pattern filtering drops the empty word and non-matching words") {
  const auto a = Alphabet::numbered(4);
  const LetterPattern p({Letter::head(3), Letter::tail(3)});
  const auto u = enumerate_words(a, 2, false, p);
  CHECK_FALSE(u.contains_empty());
  for (const auto& w : u.words()) CHECK(matches(w, p));
  CHECK(enumerate_words(a, 0, true, p).size() == 0);
}

TEST_CASE("matches") {
  const LetterPattern p({Letter::head(3), Letter::tail(3)});
  CHECK_FALSE(matches(Word{}, p));
  CHECK(matches(word({{1, '-'}, {4, '+'}}), p));
  CHECK_FALSE(matches(word({{1, '-'}, {2, '+'}}), p));
  CHECK_THROWS_AS(LetterPattern({}), ConfigError);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const auto u = random_word(rng, 4, 3), v = random_word(rng, 4, 3);
    REQUIRE(matches(concat(u, v), p) == (matches(u, p) || matches(v, p)));
  }
}

TEST_CASE("word text form") {
  const auto a = Alphabet::numbered(4);
  CHECK(render_word(Word{}, a) == "@");
  CHECK(render_word(word({{1, '-'}, {2, '+'}}), a) == "1-.2+");
  CHECK(parse_word("1-.2+", a) == word({{1, '-'}, {2, '+'}}));
  CHECK(parse_word("@", a) == Word{});
  CHECK_THROWS_AS(parse_word("5-", a), DataError);
  CHECK_THROWS_AS(parse_word("1*", a), DataError);
  CHECK_THROWS_AS(parse_word("1-..2+", a), DataError);
  CHECK_THROWS_AS(parse_word("", a), DataError);

  const auto all = enumerate_words(a, 3, false);
  for (const auto& w : all.words()) REQUIRE(parse_word(render_word(w, a), a) == w);

  const Alphabet named({"bid", "ask"});
  CHECK(render_word(word({{2, '+'}, {1, '-'}}), named) == "ask+.bid-");
}

TEST_CASE("universe serializes as newline-separated words") {
  const auto a = Alphabet::numbered(3);
  const auto u = enumerate_words(a, 2, true);
  const auto text = universe_to_text(u, a);
  CHECK(text.starts_with("@\n1-\n2-\n3-\n1-.1-\n"));
  CHECK(universe_from_text(text, a).words() == u.words());
}
