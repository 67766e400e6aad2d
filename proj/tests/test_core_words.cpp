#include <catch2/catch_amalgamated.hpp>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <set>

#include "shiftlab/generators.hpp"
#include "shiftlab/language.hpp"
#include "shiftlab/sequence.hpp"

using namespace shiftlab;

namespace {

// 0^inf . 1^inf over {0,1}
Sequence step_sequence() {
  Provenance prov;
  prov.family = "step";
  return Sequence(Sequence::Kind::BiInfinite, Alphabet::binary(), prov,
                  [](std::int64_t i) -> Symbol { return i < 0 ? 0 : 1; });
}

// Independent staircase prefix: explicit block-by-block construction.
std::string staircase_prefix_oracle(std::size_t len) {
  std::string s;
  int m = 1;
  while (s.size() < len) {
    char sym = ((m + 1) % 2) ? '\1' : '\0';
    for (int t = 0; t < m && s.size() < len; ++t) s.push_back(sym);
    ++m;
  }
  return s;
}

}  // namespace

TEST_CASE("staircase window matches the displayed prefix") {
  Sequence x = staircase();
  Word w = window(x, 0, 20);
  REQUIRE(x.alphabet().render(w) == "011000111100000111111");
  // block m has length m and symbol (m+1) mod 2, symbol by symbol
  std::string oracle = staircase_prefix_oracle(5000);
  Word got = window(x, 0, 4999);
  REQUIRE(got == Word(oracle));
  // left tail is all zeros
  for (std::int64_t i = -5; i < 0; ++i) REQUIRE(x.at(i) == 0);
}

TEST_CASE("single-index window is the symbol itself") {
  Sequence x = staircase();
  for (std::int64_t i : {-3, 0, 1, 7, 100}) {
    Word w = window(x, i, i);
    REQUIRE(w.size() == 1);
    REQUIRE(static_cast<Symbol>(w[0]) == x.at(i));
  }
}

TEST_CASE("shift is the index translation, with inverse") {
  Sequence x = staircase();
  Sequence y = shift(x, 3);
  for (std::int64_t i = -10; i <= 30; ++i) REQUIRE(y.at(i) == x.at(i + 3));
  Sequence z = shift(y, -3);
  for (std::int64_t i = -10; i <= 30; ++i) REQUIRE(z.at(i) == x.at(i));
  // ruler-driven run family: shift by 1 moves the word at [0, n-1] to [-1, n-2]
  Sequence fam = recurrent_sharp_family(make_schedule(2, 0, GrowthFunction::linear()));
  Sequence sh = shift(fam, 1);
  REQUIRE(window(sh, -1, 8) == window(fam, 0, 9));
  // negative shift of a right-infinite sequence is rejected
  Sequence right(Sequence::Kind::RightInfinite, Alphabet::binary(), Provenance{},
                 [](std::int64_t) -> Symbol { return 0; });
  REQUIRE_THROWS_AS(shift(right, -1), std::domain_error);
}

TEST_CASE("sturmian window agrees with an independent rotation recompute") {
  using big = boost::multiprecision::cpp_bin_float_100;
  big beta = (boost::multiprecision::sqrt(big(5)) - 1) / 2;
  big x0 = beta / 2;
  auto frac = [](big v) {
    big f = v - boost::multiprecision::floor(v);
    return f;
  };
  Sequence s = sturmian(SturmianParams::golden());
  for (std::int64_t n = -300; n <= 300; ++n) {
    big point = frac(x0 + n * beta);
    Symbol expect = point < beta ? 1 : 0;
    REQUIRE(s.at(n) == expect);
  }
}

TEST_CASE("sturmian language has complexity n+1 through n=50, all saturated") {
  Sequence s = sturmian(SturmianParams::golden());
  LanguageTable t = build_language(s, 50);
  for (int n = 1; n <= 50; ++n) {
    REQUIRE(t.count(n) == n + 1);
    REQUIRE(t.saturated(n));
  }
}

TEST_CASE("periodic (01)^inf has two words per level from n=2") {
  Sequence s = periodic_sequence(word_of({0, 1}));
  LanguageTable t = build_language(s, 10);
  REQUIRE(t.count(1) == 2);
  for (int n = 2; n <= 10; ++n) REQUIRE(t.count(n) == 2);
}

TEST_CASE("staircase level-3 words match a brute-force prefix scan") {
  // oracle: distinct 3-words over a long explicit prefix
  std::string prefix = staircase_prefix_oracle(100000);
  std::set<Word> expect;
  for (std::size_t i = 0; i + 3 <= prefix.size(); ++i) expect.insert(Word(prefix.substr(i, 3)));
  expect.insert(word_of({0, 0, 0}));  // left tail contributes only zeros
  REQUIRE(expect == std::set<Word>{word_of({0, 0, 0}), word_of({0, 0, 1}),
                                   word_of({0, 1, 1}), word_of({1, 0, 0}),
                                   word_of({1, 1, 0}), word_of({1, 1, 1})});

  Sequence x = staircase();
  LanguageTable t = build_language(x, 3);
  std::set<Word> got(t.level(3).words.begin(), t.level(3).words.end());
  REQUIRE(got == expect);
}

TEST_CASE("eventual periodicity detection") {
  SECTION("0^inf.1^inf to the right") {
    auto r = detect_eventual_periodicity(step_sequence(), Direction::Right, 1000);
    REQUIRE(r);
    REQUIRE(r->period == 1);
    REQUIRE(r->onset == 0);
  }
  SECTION("0^inf.1^inf to the left") {
    auto r = detect_eventual_periodicity(step_sequence(), Direction::Left, 1000);
    REQUIRE(r);
    REQUIRE(r->period == 1);
    REQUIRE(r->onset == 0);
  }
  SECTION("sturmian: none found within horizon") {
    Sequence s = sturmian(SturmianParams::golden());
    REQUIRE_FALSE(detect_eventual_periodicity(s, Direction::Right, 10000));
  }
  SECTION("nonrecurrent i1 left tail") {
    Sequence x = nonrecurrent_example(NonrecurrentCase::OneInfinite, 5);
    auto r = detect_eventual_periodicity(x, Direction::Left, 1000);
    REQUIRE(r);
    REQUIRE(r->period == 1);
    REQUIRE(r->onset == 0);
  }
  SECTION("preconditions") {
    REQUIRE_THROWS_AS(detect_eventual_periodicity(step_sequence(), Direction::Right, 1),
                      std::domain_error);
  }
}

TEST_CASE("window monotonicity under growth") {
  Sequence s = sturmian(SturmianParams::golden());
  SaturationPolicy small{256, 512};
  SaturationPolicy large{256, 8192};
  LanguageTable a = build_language(s, 40, small);
  LanguageTable b = build_language(s, 40, large);
  for (int n = 1; n <= 40; ++n) REQUIRE(a.count(n) <= b.count(n));
}

TEST_CASE("prefix and suffix closure across levels") {
  Sequence x = staircase();
  LanguageTable t = build_language(x, 12);
  for (int n = 1; n < 12; ++n) {
    const auto& up = t.level(n + 1);
    const auto& lo = t.level(n);
    for (const auto& w : up.words) {
      REQUIRE(lo.contains(w.substr(0, static_cast<std::size_t>(n))));
      REQUIRE(lo.contains(w.substr(1)));
    }
  }
}

TEST_CASE("extension identity: distinct pairs biject with longer words") {
  for (Sequence x : {staircase(), sturmian(SturmianParams::golden())}) {
    LanguageTable t = build_language(x, 20);
    for (int n = 1; n < 20; ++n) {
      if (!t.saturated(n) || !t.saturated(n + 1)) continue;
      std::int64_t pairs = 0;
      const auto& lvl = t.level(n);
      for (std::size_t w = 0; w < lvl.words.size(); ++w)
        pairs += mask_count(lvl.right_ext[w]);
      REQUIRE(pairs == t.count(n + 1));
      std::int64_t left_pairs = 0;
      for (std::size_t w = 0; w < lvl.words.size(); ++w)
        left_pairs += mask_count(lvl.left_ext[w]);
      REQUIRE(left_pairs == t.count(n + 1));
    }
  }
}

TEST_CASE("two builds with identical parameters are identical") {
  Sequence s = sturmian(SturmianParams::golden());
  LanguageTable a = build_language(s, 30);
  LanguageTable b = build_language(s, 30);
  REQUIRE(a.window_lo == b.window_lo);
  REQUIRE(a.window_hi == b.window_hi);
  for (int n = 1; n <= 30; ++n) {
    REQUIRE(a.level(n).words == b.level(n).words);
    REQUIRE(a.level(n).right_ext == b.level(n).right_ext);
    REQUIRE(a.level(n).saturated == b.level(n).saturated);
  }
}

TEST_CASE("nonpositive n_max is rejected") {
  REQUIRE_THROWS_AS(build_language(staircase(), 0), std::domain_error);
}
