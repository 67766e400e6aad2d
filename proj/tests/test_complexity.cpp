#include <catch2/catch_amalgamated.hpp>

#include "shiftlab/complexity.hpp"
#include "shiftlab/generators.hpp"
#include "shiftlab/language.hpp"

using namespace shiftlab;

namespace {

Sequence step_sequence() {
  Provenance prov;
  prov.family = "step";
  return Sequence(Sequence::Kind::BiInfinite, Alphabet::binary(), prov,
                  [](std::int64_t i) -> Symbol { return i < 0 ? 0 : 1; });
}

}  // namespace

TEST_CASE("profiles of the basic examples") {
  SECTION("sturmian: c(n) = n+1") {
    ComplexityProfile p = profile(build_language(sturmian(SturmianParams::golden()), 60));
    for (int n = 1; n <= 60; ++n) REQUIRE(p.at(n) == n + 1);
  }
  SECTION("period-4 orbit: c(n) = 4 from n = 4 on") {
    ComplexityProfile p = profile(build_language(periodic_sequence(word_of({0, 0, 1, 1})), 12));
    for (int n = 4; n <= 12; ++n) REQUIRE(p.at(n) == 4);
  }
  SECTION("0^inf.1^inf: c(n) = n+1 for all n") {
    ComplexityProfile p = profile(build_language(step_sequence(), 40));
    for (int n = 1; n <= 40; ++n) REQUIRE(p.at(n) == n + 1);
  }
}

TEST_CASE("sturmian census: exactly one right-special word per level") {
  LanguageTable t = build_language(sturmian(SturmianParams::golden()), 50);
  SpecialWordReport census = special_census(t);
  for (int n = 1; n <= 50; ++n) {
    REQUIRE(census.rs_count(n) == 1);
    REQUIRE(census.ls_count(n) == 1);
    REQUIRE(census.level(n).rs[0].extensions.size() == 2);
  }
}

TEST_CASE("run family census obeys the interval bound") {
  for (int j : {2, 3}) {
    auto sched = make_schedule(j, 0, GrowthFunction::linear());
    Sequence x = recurrent_sharp_family(sched);
    LanguageTable t = build_language(x, 64);
    SpecialWordReport census = special_census(t);

    // interval-hit bound: j plus one word per suffix range (n_k^p, n_k^p +
    // n_k^{p-1}] plus one per junction range (n_k^1, n_k^1 + n_k^j + L(k)]
    auto bound_at = [&](int n) {
      std::int64_t b = j;
      for (int k = 1; k <= 8; ++k) {
        std::uint64_t nk1 = sched.entry(k, 1);
        if (nk1 >= kGrowthSat || nk1 > static_cast<std::uint64_t>(4 * 64)) break;
        for (int p = 2; p <= j; ++p) {
          std::uint64_t lop = sched.entry(k, p);
          std::uint64_t hip = lop + sched.entry(k, p - 1);
          if (static_cast<std::uint64_t>(n) > lop && static_cast<std::uint64_t>(n) <= hip)
            ++b;
        }
        std::uint64_t lof = nk1;
        std::uint64_t hif = nk1 + sched.entry(k, j) + sched.data()->layout_prefix(k);
        if (static_cast<std::uint64_t>(n) > lof && static_cast<std::uint64_t>(n) <= hif)
          ++b;
      }
      return b;
    };
    // three-case form with the suffix ranges taking precedence
    auto case_bound_at = [&](int n) -> std::int64_t {
      for (int k = 1; k <= 8; ++k) {
        if (sched.entry(k, 1) >= kGrowthSat) break;
        for (int p = 2; p <= j; ++p) {
          std::uint64_t lop = sched.entry(k, p);
          std::uint64_t hip = lop + sched.entry(k, p - 1);
          if (static_cast<std::uint64_t>(n) > lop && static_cast<std::uint64_t>(n) <= hip)
            return j + 2;
        }
      }
      for (int k = 1; k <= 8; ++k) {
        if (sched.entry(k + 1, 1) >= kGrowthSat) break;
        std::uint64_t lo = sched.entry(k, j) + sched.entry(k, 1) +
                           sched.data()->layout_prefix(k);
        std::uint64_t hi = sched.entry(k + 1, 1);
        if (static_cast<std::uint64_t>(n) > lo && static_cast<std::uint64_t>(n) <= hi)
          return j;
      }
      return j + 1;
    };

    for (int n = 1; n <= 64; ++n) {
      if (!t.certified(n)) continue;
      INFO("j=" << j << " n=" << n << " rs=" << census.rs_count(n));
      REQUIRE(census.rs_count(n) >= j);
      REQUIRE(census.rs_count(n) <= bound_at(n));
      REQUIRE(census.rs_count(n) <= case_bound_at(n));
    }
  }
}

TEST_CASE("maximal right-special words in the run family") {
  auto sched = make_schedule(2, 0, GrowthFunction::linear());
  Sequence x = recurrent_sharp_family(sched);
  LanguageTable t = build_language(x, 24);
  SpecialWordReport census = special_census(t);
  // 1^{n_k^1} 2^{n_k^2} is maximally right-special: its suffixes are
  // right-special and no left extension stays right-special
  Word w = constant_word(1, 1) + constant_word(2, 2);  // k=1: 1^1 2^2
  bool found = false;
  for (const auto& e : census.level(3).rs)
    if (e.word == w) {
      found = true;
      REQUIRE(e.maximal);
    }
  REQUIRE(found);
}

TEST_CASE("counting identity and inequality") {
  SECTION("sturmian: increments match the single special word exactly") {
    LanguageTable t = build_language(sturmian(SturmianParams::golden()), 40);
    auto verdicts = check_counting(profile(t), special_census(t));
    REQUIRE(verdicts.size() >= 30);
    for (const auto& v : verdicts) {
      REQUIRE(v.identity_ok);
      REQUIRE(v.inequality_ok);
      REQUIRE(v.delta == 1);
      REQUIRE(v.rs == 1);
    }
  }
  SECTION("staircase window") {
    LanguageTable t = build_language(staircase(), 24);
    auto verdicts = check_counting(profile(t), special_census(t));
    for (const auto& v : verdicts) {
      REQUIRE(v.identity_ok);
      REQUIRE(v.inequality_ok);
    }
  }
  SECTION("corrupted profile is flagged at the corrupted level") {
    LanguageTable t = build_language(sturmian(SturmianParams::golden()), 20);
    ComplexityProfile p = profile(t);
    SpecialWordReport census = special_census(t);
    p.c[9] += 1;  // tamper with c(10)
    auto verdicts = check_counting(p, census);
    bool flagged = false;
    for (const auto& v : verdicts)
      if ((v.n == 9 || v.n == 10) && !v.identity_ok) flagged = true;
    REQUIRE(flagged);
  }
  SECTION("mismatched ranges are rejected") {
    LanguageTable t1 = build_language(staircase(), 10);
    LanguageTable t2 = build_language(staircase(), 12);
    REQUIRE_THROWS_AS(check_counting(profile(t1), special_census(t2)), std::domain_error);
  }
}

TEST_CASE("morse-hedlund classification") {
  SECTION("(01)^inf triggers at n=2 and certifies period 2") {
    Sequence x = periodic_sequence(word_of({0, 1}));
    auto v = morse_hedlund_classify(profile(build_language(x, 10)), x);
    REQUIRE(v.triggered);
    REQUIRE(v.trigger_n == 2);
    REQUIRE(v.right);
    REQUIRE(v.right->period == 2);
    REQUIRE(v.left);
    REQUIRE(v.left->period == 2);
  }
  SECTION("(0011)^inf triggers at n=4 and certifies period 4") {
    Sequence x = periodic_sequence(word_of({0, 0, 1, 1}));
    auto v = morse_hedlund_classify(profile(build_language(x, 10)), x);
    REQUIRE(v.triggered);
    REQUIRE(v.trigger_n == 4);
    REQUIRE(v.right);
    REQUIRE(v.right->period == 4);
  }
  SECTION("sturmian: aperiodic through the horizon") {
    Sequence x = sturmian(SturmianParams::golden());
    auto v = morse_hedlund_classify(profile(build_language(x, 50)), x);
    REQUIRE_FALSE(v.triggered);
    REQUIRE(v.aperiodic_through == 50);
  }
  SECTION("0^inf.1^inf: no trigger, yet both tails are periodic") {
    Sequence x = step_sequence();
    auto v = morse_hedlund_classify(profile(build_language(x, 30)), x);
    REQUIRE_FALSE(v.triggered);
    auto right = detect_eventual_periodicity(x, Direction::Right, 2000);
    auto left = detect_eventual_periodicity(x, Direction::Left, 2000);
    REQUIRE(right);
    REQUIRE(left);
    REQUIRE(right->period == 1);
    REQUIRE(left->period == 1);
  }
}

TEST_CASE("bound reports") {
  SECTION("run family ceiling (j+1)n + g at every saturated level") {
    for (int j : {2, 3}) {
      auto sched = make_schedule(j, 0, GrowthFunction::linear());
      LanguageTable t = build_language(recurrent_sharp_family(sched), 150);
      BoundReport rep =
          bound_report(profile(t), j + 1, GrowthFunction::linear(), BoundMode::Ceiling);
      INFO("j=" << j << " " << rep.detail);
      REQUIRE(rep.pass);
    }
  }
  SECTION("run family subsequence ceiling j n + g at the available n_k^1") {
    auto sched = make_schedule(2, 0, GrowthFunction::linear());
    LanguageTable t = build_language(recurrent_sharp_family(sched), 150);
    ComplexityProfile p = profile(t);
    GrowthFunction g = GrowthFunction::linear();
    for (int k = 1; k <= 4; ++k) {
      std::uint64_t nk1 = sched.entry(k, 1);
      if (nk1 > 150) break;
      int n = static_cast<int>(nk1);
      if (!p.sat(n)) continue;
      REQUIRE(p.at(n) <= 2 * n + static_cast<std::int64_t>(g.eval(nk1)));
    }
  }
  SECTION("stitched floor margin is positive and ratchets upward") {
    auto sched = make_schedule(2, 1, GrowthFunction::linear());
    LanguageTable t = build_language(stitched_family(sched), 200);
    BoundReport rep =
        bound_report(profile(t), 3, GrowthFunction::zero(), BoundMode::LimInfLower);
    INFO(rep.detail);
    REQUIRE(rep.pass);
  }
  SECTION("transitive family floor margin against j n") {
    LanguageTable t = build_language(transitive_family(3, GrowthFunction::linear()), 200);
    BoundReport rep =
        bound_report(profile(t), 3, GrowthFunction::zero(), BoundMode::LimInfLower);
    INFO(rep.detail);
    REQUIRE(rep.pass);
  }
  SECTION("half-integer thresholds: run family beats 1.5n in the limsup sense") {
    auto sched = make_schedule(2, 0, GrowthFunction::linear());
    LanguageTable t = build_language(recurrent_sharp_family(sched), 200);
    BoundReport rep =
        bound_report(profile(t), 3, 2, GrowthFunction::zero(), BoundMode::LimSupLower);
    INFO(rep.detail);
    REQUIRE(rep.pass);
  }
  SECTION("a false ceiling is reported with the offending level") {
    LanguageTable t = build_language(sturmian(SturmianParams::golden()), 30);
    BoundReport rep = bound_report(profile(t), 1, GrowthFunction::zero(), BoundMode::Ceiling);
    REQUIRE_FALSE(rep.pass);  // c(n) = n+1 > n
    REQUIRE(rep.detail.find("n=") != std::string::npos);
  }
}

TEST_CASE("minimal candidates") {
  SECTION("run family j=3: the three fixed points") {
    auto sched = make_schedule(3, 0, GrowthFunction::linear());
    Sequence x = recurrent_sharp_family(sched);
    LanguageTable t = build_language(x, 16);
    auto cands = minimal_candidates(t, &x.provenance());
    std::vector<Word> cycles;
    for (const auto& c : cands)
      if (!c.from_provenance) cycles.push_back(c.cycle);
    std::sort(cycles.begin(), cycles.end());
    REQUIRE(cycles == std::vector<Word>{constant_word(1, 1), constant_word(2, 1),
                                        constant_word(3, 1)});
    REQUIRE(candidates_agree_with_provenance(cands, x.provenance()));
  }
  SECTION("staircase: both fixed points persist") {
    Sequence x = staircase();
    LanguageTable t = build_language(x, 16);
    auto cands = minimal_candidates(t, &x.provenance());
    std::vector<Word> cycles;
    for (const auto& c : cands)
      if (!c.from_provenance) cycles.push_back(c.cycle);
    std::sort(cycles.begin(), cycles.end());
    REQUIRE(cycles == std::vector<Word>{constant_word(0, 1), constant_word(1, 1)});
  }
  SECTION("stitched family: periodic candidates plus the known rotation system") {
    auto sched = make_schedule(2, 1, GrowthFunction::linear());
    Sequence x = stitched_family(sched);
    LanguageTable t = build_language(x, 16);
    auto cands = minimal_candidates(t, &x.provenance());
    bool has_fixed_1 = false, has_sturmian = false;
    for (const auto& c : cands) {
      if (!c.from_provenance && c.cycle == constant_word(1, 1)) has_fixed_1 = true;
      if (c.from_provenance && c.label.find("sturmian") != std::string::npos)
        has_sturmian = true;
    }
    REQUIRE(has_fixed_1);
    REQUIRE(has_sturmian);
    REQUIRE(candidates_agree_with_provenance(cands, x.provenance()));
  }
  SECTION("external input is flagged heuristic") {
    Sequence x(Sequence::Kind::BiInfinite, Alphabet::binary(), Provenance{},
               [](std::int64_t) -> Symbol { return 0; });
    LanguageTable t = build_language(x, 8);
    auto cands = minimal_candidates(t, nullptr);
    REQUIRE(cands.size() == 1);
    REQUIRE(cands[0].heuristic);
  }
}

TEST_CASE("census-sum identity across generated families") {
  std::vector<Sequence> family = {
      staircase(),
      sturmian(SturmianParams::golden()),
      recurrent_sharp_family(make_schedule(2, 0, GrowthFunction::linear())),
      stitched_family(make_schedule(2, 1, GrowthFunction::linear())),
      transitive_family(3, GrowthFunction::linear()),
      nonrecurrent_example(NonrecurrentCase::OneInfinite, 5),
      nonrecurrent_example(NonrecurrentCase::TwoInfinite, 5),
  };
  for (const auto& x : family) {
    LanguageTable t = build_language(x, 30);
    auto verdicts = check_counting(profile(t), special_census(t));
    INFO(x.provenance().family);
    REQUIRE_FALSE(verdicts.empty());
    for (const auto& v : verdicts) {
      REQUIRE(v.identity_ok);
      REQUIRE(v.inequality_ok);
    }
  }
}

TEST_CASE("ceiling verdicts survive window extension") {
  // extending the window never flips a ceiling verdict from pass to fail
  // on previously saturated levels
  auto sched = make_schedule(2, 0, GrowthFunction::linear());
  Sequence x = recurrent_sharp_family(sched);
  SaturationPolicy small{1024, 8192};
  SaturationPolicy large{1024, 1 << 20};
  LanguageTable a = build_language(x, 60, small);
  LanguageTable b = build_language(x, 60, large);
  GrowthFunction g = GrowthFunction::linear();
  for (int n = 1; n <= 60; ++n) {
    if (!a.saturated(n) || !b.saturated(n)) continue;
    bool pass_a = a.count(n) <= 3 * n + static_cast<std::int64_t>(g.eval(static_cast<std::uint64_t>(n)));
    bool pass_b = b.count(n) <= 3 * n + static_cast<std::int64_t>(g.eval(static_cast<std::uint64_t>(n)));
    if (pass_a) REQUIRE(pass_b == pass_a);
  }
}
