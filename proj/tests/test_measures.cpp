#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "shiftlab/generators.hpp"
#include "shiftlab/measures.hpp"

using namespace shiftlab;

namespace {

// Closed-form staircase pair counts over the first n positions: blocks have
// length m and symbol (m+1) mod 2, so everything reduces to triangular sums.
struct StaircaseOracle {
  std::int64_t zeros = 0, pair00 = 0, pair01 = 0, pair10 = 0, pair11 = 0;
};

StaircaseOracle staircase_counts(std::int64_t n) {
  StaircaseOracle o;
  std::int64_t m = 0;
  while ((m + 1) * (m + 2) / 2 <= n) ++m;  // blocks 1..m complete
  for (std::int64_t b = 1; b <= m; ++b) {
    bool zero_block = (b % 2) == 1;
    if (zero_block) o.zeros += b;
    // internal pairs
    if (zero_block)
      o.pair00 += b - 1;
    else
      o.pair11 += b - 1;
    // boundary pair at the last position of block b
    if (zero_block)
      o.pair01 += 1;
    else
      o.pair10 += 1;
  }
  std::int64_t consumed = m * (m + 1) / 2;
  std::int64_t partial = n - consumed;  // inside block m+1
  bool partial_zero = ((m + 1) % 2) == 1;
  if (partial_zero) o.zeros += partial;
  if (partial_zero)
    o.pair00 += partial;
  else
    o.pair11 += partial;
  return o;
}

}  // namespace

TEST_CASE("empirical measure of the period-2 orbit is exactly uniform") {
  Sequence x = periodic_sequence(word_of({0, 1}));
  EmpiricalMeasure m = empirical(x, 0, 1000, 2);
  REQUIRE(m.count(word_of({0})) == 500);
  REQUIRE(m.count(word_of({1})) == 500);
  REQUIRE(m.count(word_of({0, 1})) == 500);
  REQUIRE(m.count(word_of({1, 0})) == 500);
  REQUIRE(m.count(word_of({0, 0})) == 0);
}

TEST_CASE("staircase frequencies at n = 10^6 match the block-count oracle") {
  Sequence x = staircase();
  const std::int64_t n = 1000000;
  EmpiricalMeasure m = empirical(x, 0, n, 2);
  StaircaseOracle o = staircase_counts(n);
  REQUIRE(m.count(word_of({0})) == o.zeros);
  REQUIRE(m.count(word_of({0, 0})) == o.pair00);
  REQUIRE(m.count(word_of({0, 1})) == o.pair01);
  REQUIRE(m.count(word_of({1, 0})) == o.pair10);
  REQUIRE(m.count(word_of({1, 1})) == o.pair11);
  // the stated desk bounds
  REQUIRE(m.freq(word_of({0})) >= 0.499);
  REQUIRE(m.freq(word_of({0})) <= 0.501);
  REQUIRE(m.freq(word_of({1})) >= 0.499);
  REQUIRE(m.freq(word_of({1})) <= 0.501);
  REQUIRE(m.freq(word_of({0, 1})) <= 0.002);
  REQUIRE(m.freq(word_of({0, 0})) >= 0.497);
  REQUIRE(m.freq(word_of({0, 0})) <= 0.503);
  REQUIRE(m.freq(word_of({1, 1})) >= 0.497);
  REQUIRE(m.freq(word_of({1, 1})) <= 0.503);
}

TEST_CASE("deep in the zero tail the measure is a point mass") {
  Sequence x = staircase();
  EmpiricalMeasure m = empirical(x, -100000, 1000, 3);
  REQUIRE(m.freq(word_of({0})) == 1.0);
  REQUIRE(m.freq(word_of({0, 0, 0})) == 1.0);
}

TEST_CASE("normalization and marginal consistency are exact") {
  Sequence x = sturmian(SturmianParams::golden());
  EmpiricalMeasure m = empirical(x, -500, 4096, 5);
  for (int d = 1; d <= 5; ++d) {
    std::int64_t total = 0;
    for (const auto& [w, c] : m.counts)
      if (static_cast<int>(w.size()) == d) total += c;
    REQUIRE(total == m.sample_n);
  }
  for (const auto& [w, c] : m.counts) {
    if (static_cast<int>(w.size()) >= m.depth) continue;
    std::int64_t sum = 0;
    for (Symbol s : m.alphabet.symbols()) sum += m.count(w + static_cast<char>(s));
    REQUIRE(sum == c);
  }
}

TEST_CASE("shift averaging identity on cylinder counts") {
  Sequence x = staircase();
  const std::int64_t mlen = 1234, nlen = 777;
  const int depth = 3;
  EmpiricalMeasure a = empirical(x, 0, mlen, depth);
  EmpiricalMeasure b = empirical(x, mlen, nlen, depth);
  EmpiricalMeasure whole = empirical(x, 0, mlen + nlen, depth);
  for (const auto& [w, c] : whole.counts) REQUIRE(c == a.count(w) + b.count(w));
}

TEST_CASE("weak distance basics") {
  Alphabet bin = Alphabet::binary();
  SECTION("identity of a measure with itself") {
    EmpiricalMeasure m = empirical(staircase(), 0, 5000, 4);
    WeakDistance d = weak_distance(m, m, WeakMetricSpec{16});
    REQUIRE(d.value == 0.0);
    REQUIRE(d.tail_bound == std::pow(0.5, 16));
  }
  SECTION("distance between the two point masses, frozen at T = 20") {
    EmpiricalMeasure d0 = EmpiricalMeasure::point_mass(bin, 0, 5);
    EmpiricalMeasure d1 = EmpiricalMeasure::point_mass(bin, 1, 5);
    WeakDistance d = weak_distance(d0, d1, WeakMetricSpec{20});
    // independent oracle: direct enumeration of the length-lex order
    double expect = 0;
    double weight = 1.0;
    auto words = enumerate_words(bin, 20);
    for (const auto& w : words) {
      weight *= 0.5;
      bool all0 = w.find_first_not_of(char(0)) == Word::npos;
      bool all1 = w.find_first_not_of(char(1)) == Word::npos;
      expect += weight * (std::abs((all0 ? 1.0 : 0.0) - (all1 ? 1.0 : 0.0)));
    }
    REQUIRE(d.value == Catch::Approx(expect).epsilon(1e-15));
    REQUIRE(d.value == Catch::Approx(0.898529052734375).epsilon(1e-15));
  }
  SECTION("triangle inequality on tabulated measures") {
    Sequence x = staircase();
    std::vector<EmpiricalMeasure> ms;
    for (std::int64_t start : {0, 1000, 5000, 20000, 100000})
      ms.push_back(empirical(x, start, 3000, 4));
    WeakMetricSpec spec{14};
    for (std::size_t a = 0; a < ms.size(); ++a)
      for (std::size_t b = 0; b < ms.size(); ++b)
        for (std::size_t c = 0; c < ms.size(); ++c) {
          double ab = weak_distance(ms[a], ms[b], spec).value;
          double bc = weak_distance(ms[b], ms[c], spec).value;
          double ac = weak_distance(ms[a], ms[c], spec).value;
          REQUIRE(ac <= ab + bc + 1e-12);
        }
  }
  SECTION("insufficient depth is rejected") {
    EmpiricalMeasure shallow = empirical(staircase(), 0, 100, 2);
    EmpiricalMeasure deep = empirical(staircase(), 0, 100, 6);
    REQUIRE_THROWS_AS(weak_distance(shallow, deep, WeakMetricSpec{20}), std::domain_error);
  }
}

TEST_CASE("generic limit probe") {
  SECTION("staircase converges towards the half-half mixture") {
    Sequence x = staircase();
    ConvergenceReport rep = generic_limit_probe(
        x, 0, {30000, 60000, 120000, 240000, 480000, 960000}, 4, WeakMetricSpec{16},
        0.01);
    REQUIRE(rep.cauchy_like);
    REQUIRE(rep.candidate.freq(word_of({0})) == Catch::Approx(0.5).margin(0.002));
    REQUIRE(rep.candidate.freq(word_of({1})) == Catch::Approx(0.5).margin(0.002));
    REQUIRE(rep.candidate.freq(word_of({0, 1})) <= 0.002);
  }
  SECTION("sturmian one-frequency approaches beta") {
    Sequence x = sturmian(SturmianParams::golden());
    EmpiricalMeasure m = empirical(x, 0, 200000, 1);
    double beta = 0.6180339887498949;
    REQUIRE(m.freq(word_of({1})) == Catch::Approx(beta).margin(1e-3));
  }
  SECTION("period-2 orbit: exact agreement at even lengths") {
    Sequence x = periodic_sequence(word_of({0, 1}));
    ConvergenceReport rep =
        generic_limit_probe(x, 0, {100, 200, 400}, 2, WeakMetricSpec{12}, 1e-9);
    REQUIRE(rep.cauchy_like);
    for (double d : rep.step_distance) REQUIRE(d == 0.0);
  }
  SECTION("lengths must increase") {
    REQUIRE_THROWS_AS(
        generic_limit_probe(staircase(), 0, {100, 100}, 2, WeakMetricSpec{8}, 0.1),
        std::domain_error);
  }
}

TEST_CASE("right-special window cover") {
  SECTION("sturmian: every (c(n)+n)-subword contains the special word") {
    Sequence x = sturmian(SturmianParams::golden());
    LanguageTable t = build_language(x, 30);
    auto verdicts = rs_window_cover_check(x, t, special_census(t), 30);
    REQUIRE(verdicts.size() >= 25);
    for (const auto& v : verdicts) {
      INFO("n=" << v.n);
      REQUIRE_FALSE(v.skipped);
      REQUIRE(v.pass);
    }
  }
  SECTION("staircase windows") {
    Sequence x = staircase();
    LanguageTable t = build_language(x, 30);
    auto verdicts = rs_window_cover_check(x, t, special_census(t), 30);
    REQUIRE_FALSE(verdicts.empty());
    for (const auto& v : verdicts) {
      REQUIRE_FALSE(v.skipped);
      REQUIRE(v.pass);
    }
  }
  SECTION("eventually periodic input is skipped with a reason") {
    Sequence x = periodic_sequence(word_of({0, 1}));
    LanguageTable t = build_language(x, 10);
    auto verdicts = rs_window_cover_check(x, t, special_census(t), 10);
    REQUIRE(verdicts.size() == 1);
    REQUIRE(verdicts[0].skipped);
    REQUIRE_FALSE(verdicts[0].reason.empty());
  }
}

TEST_CASE("generic candidate extraction") {
  SECTION("staircase with g = 3: two clusters near the two point masses") {
    Sequence x = staircase();
    LanguageTable t = build_language(x, 24);
    SpecialWordReport census = special_census(t);
    ComplexityProfile prof = profile(t);
    GenericCandidates out =
        extract_generic_candidates(x, t, census, prof, 3, 16, WeakMetricSpec{16});
    REQUIRE(out.diagnostic.empty());
    REQUIRE(out.rs_count <= 2);
    REQUIRE(out.clusters.size() <= 2);
    REQUIRE(out.clusters.size() == static_cast<std::size_t>(out.rs_count));
    Alphabet bin = Alphabet::binary();
    EmpiricalMeasure d0 = EmpiricalMeasure::point_mass(bin, 0, out.depth_used);
    EmpiricalMeasure d1 = EmpiricalMeasure::point_mass(bin, 1, out.depth_used);
    WeakMetricSpec eff{out.truncation_used};
    double best0 = 1e9, best1 = 1e9;
    for (const auto& c : out.clusters) {
      best0 = std::min(best0, weak_distance(c.representative, d0, eff).value);
      best1 = std::min(best1, weak_distance(c.representative, d1, eff).value);
    }
    REQUIRE(best0 <= 0.02 + out.tail_bound);
    REQUIRE(best1 <= 0.02 + out.tail_bound);
  }
  SECTION("sturmian with g = 2: a single cluster") {
    Sequence x = sturmian(SturmianParams::golden());
    LanguageTable t = build_language(x, 40);
    GenericCandidates out = extract_generic_candidates(
        x, t, special_census(t), profile(t), 2, 8, WeakMetricSpec{16});
    REQUIRE(out.diagnostic.empty());
    REQUIRE(out.rs_count == 1);
    REQUIRE(out.clusters.size() == 1);
  }
  SECTION("eventually periodic input yields a diagnostic, not an error") {
    Sequence x = periodic_sequence(word_of({0, 1}));
    LanguageTable t = build_language(x, 10);
    GenericCandidates out = extract_generic_candidates(
        x, t, special_census(t), profile(t), 3, 4, WeakMetricSpec{8});
    REQUIRE(out.clusters.empty());
    REQUIRE_FALSE(out.diagnostic.empty());
  }
}

TEST_CASE("empirical preconditions") {
  REQUIRE_THROWS_AS(empirical(staircase(), 0, 3, 4), std::domain_error);
  REQUIRE_THROWS_AS(empirical(staircase(), 0, 0, 1), std::domain_error);
}
