#pragma once

// Complexity profiles, right/left-special censuses, the counting
// inequality, Morse-Hedlund classification, finite-horizon bound margins,
// and minimal-subsystem candidates.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shiftlab/growth.hpp"
#include "shiftlab/language.hpp"
#include "shiftlab/sequence.hpp"

namespace shiftlab {

struct ComplexityProfile {
  int n_max = 0;
  std::vector<std::int64_t> c;      // c[n-1]
  std::vector<bool> saturated;      // stable under one window doubling
  std::vector<bool> certified;      // saturated and inside the provenance horizon
  std::string family;
  std::int64_t window_lo = 0, window_hi = 0;

  std::int64_t at(int n) const { return c.at(static_cast<std::size_t>(n - 1)); }
  bool sat(int n) const { return saturated.at(static_cast<std::size_t>(n - 1)); }
  bool cert(int n) const { return certified.at(static_cast<std::size_t>(n - 1)); }
  int largest_saturated() const {
    int h = 0;
    for (int n = 1; n <= n_max; ++n)
      if (sat(n)) h = n;
    return h;
  }
  int largest_certified() const {
    int h = 0;
    for (int n = 1; n <= n_max; ++n)
      if (cert(n)) h = n;
    return h;
  }
};

inline ComplexityProfile profile(const LanguageTable& table) {
  ComplexityProfile p;
  p.n_max = table.n_max;
  p.family = table.family;
  p.window_lo = table.window_lo;
  p.window_hi = table.window_hi;
  for (int n = 1; n <= table.n_max; ++n) {
    p.c.push_back(table.count(n));
    p.saturated.push_back(table.saturated(n));
    p.certified.push_back(table.certified(n));
  }
  return p;
}

struct SpecialWordReport {
  struct Entry {
    Word word;
    std::vector<Symbol> extensions;  // the >= 2 extension symbols
    bool maximal = false;            // right-special case only
  };
  struct Level {
    std::vector<Entry> rs;
    std::vector<Entry> ls;
    std::int64_t rs_extension_surplus = 0;  // sum over RS of (#ext - 1)
    bool saturated = false;
    bool certified = false;
  };
  int n_max = 0;
  std::vector<Level> levels;  // levels[n-1]

  const Level& level(int n) const { return levels.at(static_cast<std::size_t>(n - 1)); }
  std::int64_t rs_count(int n) const {
    return static_cast<std::int64_t>(level(n).rs.size());
  }
  std::int64_t ls_count(int n) const {
    return static_cast<std::int64_t>(level(n).ls.size());
  }
};

// Right/left-special words per level, with maximal-right-special markers.
// A word is marked maximal only when its left extensions are visible in the
// window and none of them produces a right-special extension.
inline SpecialWordReport special_census(const LanguageTable& table) {
  SpecialWordReport rep;
  rep.n_max = table.n_max;
  rep.levels.resize(static_cast<std::size_t>(table.n_max));
  for (int n = 1; n <= table.n_max; ++n) {
    const auto& lvl = table.level(n);
    auto& out = rep.levels[static_cast<std::size_t>(n - 1)];
    out.saturated = lvl.saturated;
    out.certified = table.certified(n);
    for (std::size_t i = 0; i < lvl.words.size(); ++i) {
      int rc = mask_count(lvl.right_ext[i]);
      if (rc >= 2) {
        SpecialWordReport::Entry e;
        e.word = lvl.words[i];
        e.extensions = mask_symbols(lvl.right_ext[i]);
        out.rs.push_back(std::move(e));
        out.rs_extension_surplus += rc - 1;
      }
      int lc = mask_count(lvl.left_ext[i]);
      if (lc >= 2) {
        SpecialWordReport::Entry e;
        e.word = lvl.words[i];
        e.extensions = mask_symbols(lvl.left_ext[i]);
        out.ls.push_back(std::move(e));
      }
    }
  }
  // Maximal right-special: no visible left extension keeps the word
  // right-special one level up.
  for (int n = 1; n < table.n_max; ++n) {
    const auto& lvl_up = table.level(n + 1);
    const auto& lvl = table.level(n);
    for (auto& e : rep.levels[static_cast<std::size_t>(n - 1)].rs) {
      auto idx = lvl.find(e.word);
      auto lext = mask_symbols(lvl.left_ext[*idx]);
      if (lext.empty()) continue;  // window edge: no maximality claim
      bool any_special_parent = false;
      for (Symbol s : lext) {
        Word sw;
        sw.push_back(static_cast<char>(s));
        sw += e.word;
        auto up = lvl_up.find(sw);
        if (up && mask_count(lvl_up.right_ext[*up]) >= 2) {
          any_special_parent = true;
          break;
        }
      }
      e.maximal = !any_special_parent;
    }
  }
  return rep;
}

struct CountingVerdict {
  int n = 0;                    // compares level n against n+1
  std::int64_t delta = 0;       // c(n+1) - c(n)
  std::int64_t surplus = 0;     // sum over RS(n) of (#ext - 1)
  std::int64_t rs = 0;          // #RS(n)
  bool identity_ok = false;     // delta == surplus
  bool inequality_ok = false;   // delta >= rs
};

// Verifies c(n+1) - c(n) = sum_{w in RS(n)} (#ext(w) - 1) >= #RS(n) on
// levels where both n and n+1 are saturated.
inline std::vector<CountingVerdict> check_counting(const ComplexityProfile& prof,
                                                   const SpecialWordReport& census) {
  if (prof.n_max != census.n_max)
    throw std::domain_error("profile and census cover different ranges");
  std::vector<CountingVerdict> out;
  for (int n = 1; n < prof.n_max; ++n) {
    if (!prof.sat(n) || !prof.sat(n + 1)) continue;
    CountingVerdict v;
    v.n = n;
    v.delta = prof.at(n + 1) - prof.at(n);
    v.surplus = census.level(n).rs_extension_surplus;
    v.rs = census.rs_count(n);
    v.identity_ok = v.delta == v.surplus;
    v.inequality_ok = v.delta >= v.rs;
    out.push_back(v);
  }
  return out;
}

struct MorseHedlundVerdict {
  bool triggered = false;          // some saturated n has c(n) <= n
  int trigger_n = 0;
  std::optional<EventualPeriod> right;
  std::optional<EventualPeriod> left;
  int aperiodic_through = 0;       // largest saturated level when not triggered
};

inline MorseHedlundVerdict morse_hedlund_classify(const ComplexityProfile& prof,
                                                  const Sequence& seq,
                                                  std::int64_t detector_horizon = 4096) {
  MorseHedlundVerdict v;
  for (int n = 1; n <= prof.n_max; ++n) {
    if (prof.sat(n) && prof.at(n) <= n) {
      v.triggered = true;
      v.trigger_n = n;
      break;
    }
  }
  if (v.triggered) {
    v.right = detect_eventual_periodicity(seq, Direction::Right, detector_horizon);
    if (seq.kind() == Sequence::Kind::BiInfinite)
      v.left = detect_eventual_periodicity(seq, Direction::Left, detector_horizon);
  } else {
    v.aperiodic_through = prof.largest_saturated();
  }
  return v;
}

enum class BoundMode { LimSupLower, LimInfLower, Ceiling };

inline const char* bound_mode_name(BoundMode m) {
  switch (m) {
    case BoundMode::LimSupLower: return "limsup-lower";
    case BoundMode::LimInfLower: return "liminf-lower";
    case BoundMode::Ceiling: return "ceiling";
  }
  return "?";
}

// Finite-horizon margin report for c(n) against (num/den)n + g(n).
//
// The verdict vocabulary is deliberately finite-horizon and never claims
// the limit statements outright.  A ceiling passes when no saturated level
// exceeds it.  A lower-bound claim passes on the "monotone-increase"
// rule: from some dyadic checkpoint on, the checkpoint series (running
// max of the margin for the limsup flavour, per-window min for the liminf
// flavour) never decreases, rises strictly at least twice, and ends
// strictly above where it started; the liminf flavour additionally needs
// every checkpoint value positive.  The run families have forced flat
// stretches between generations, so consecutive strict increase is not a
// property even of the genuine witnesses.
struct BoundReport {
  std::int64_t alpha_num = 0;
  std::int64_t alpha_den = 1;
  std::string g_name;
  BoundMode mode = BoundMode::Ceiling;
  int horizon = 0;                  // largest saturated level used
  // margin[n-1] = den*c(n) - num*n - den*g(n); sign/monotonicity match the
  // unscaled margin c(n) - ((num/den) n + g(n))
  std::vector<std::int64_t> margin;
  std::vector<bool> margin_saturated;
  struct Checkpoint {
    int n = 0;
    std::int64_t value = 0;
  };
  std::vector<Checkpoint> checkpoints;
  bool pass = false;
  int pass_from_checkpoint = -1;
  std::string detail;
};

inline BoundReport bound_report(const ComplexityProfile& prof, std::int64_t alpha_num,
                                std::int64_t alpha_den, const GrowthFunction& g,
                                BoundMode mode) {
  if (alpha_den < 1) throw std::domain_error("alpha denominator must be positive");
  BoundReport rep;
  rep.alpha_num = alpha_num;
  rep.alpha_den = alpha_den;
  rep.g_name = g.name;
  rep.mode = mode;
  rep.horizon = prof.largest_saturated();
  for (int n = 1; n <= prof.n_max; ++n) {
    std::int64_t gn = static_cast<std::int64_t>(g.eval(static_cast<std::uint64_t>(n)));
    rep.margin.push_back(alpha_den * prof.at(n) - alpha_num * n - alpha_den * gn);
    rep.margin_saturated.push_back(prof.sat(n));
  }

  if (mode == BoundMode::Ceiling) {
    rep.pass = true;
    for (int n = 1; n <= prof.n_max; ++n) {
      if (!prof.sat(n)) continue;
      if (rep.margin[static_cast<std::size_t>(n - 1)] > 0) {
        rep.pass = false;
        rep.detail = "exceeded at n=" + std::to_string(n);
        break;
      }
    }
    if (rep.pass) rep.detail = "holds at every saturated level";
    return rep;
  }

  // Dyadic checkpoints 2^t inside the saturated horizon.
  for (int t = 0; (1 << t) <= rep.horizon; ++t) {
    int a = 1 << t;
    int b = std::min((1 << (t + 1)) - 1, rep.horizon);
    bool any = false;
    std::int64_t v = 0;
    if (mode == BoundMode::LimSupLower) {
      for (int n = 1; n <= b; ++n)
        if (prof.sat(n)) {
          auto m = rep.margin[static_cast<std::size_t>(n - 1)];
          if (!any || m > v) v = m;
          any = true;
        }
    } else {
      for (int n = a; n <= b; ++n)
        if (prof.sat(n)) {
          auto m = rep.margin[static_cast<std::size_t>(n - 1)];
          if (!any || m < v) v = m;
          any = true;
        }
    }
    if (any) rep.checkpoints.push_back(BoundReport::Checkpoint{a, v});
  }

  const auto& cp = rep.checkpoints;
  for (std::size_t t0 = 0; t0 + 3 <= cp.size(); ++t0) {
    bool ok = true;
    int strict_rises = 0;
    for (std::size_t t = t0; t < cp.size() && ok; ++t) {
      if (mode == BoundMode::LimInfLower && cp[t].value <= 0) ok = false;
      if (t > t0) {
        if (cp[t].value < cp[t - 1].value) ok = false;
        if (cp[t].value > cp[t - 1].value) ++strict_rises;
      }
    }
    if (ok && strict_rises >= 2 && cp.back().value > cp[t0].value) {
      rep.pass = true;
      rep.pass_from_checkpoint = static_cast<int>(t0);
      rep.detail = "margin ratchets upward from checkpoint n=" + std::to_string(cp[t0].n);
      return rep;
    }
  }
  rep.pass = false;
  rep.detail = "no nondecreasing ratcheting tail of dyadic checkpoints";
  return rep;
}

inline BoundReport bound_report(const ComplexityProfile& prof, std::int64_t alpha,
                                const GrowthFunction& g, BoundMode mode) {
  return bound_report(prof, alpha, 1, g, mode);
}

struct MinimalCandidate {
  Word cycle;               // primitive cycle (periodic candidates)
  std::string label;
  bool from_provenance = false;  // analytically known, not window-detected
  bool heuristic = false;        // external input: window evidence only
};

// Periodic minimal candidates: primitive cycles whose full orbit language
// persists at the deepest tabulated level.  Generated families are
// cross-checked against their analytically known minimal systems.
inline std::vector<MinimalCandidate> minimal_candidates(const LanguageTable& table,
                                                        const Provenance* prov,
                                                        int max_cycle = 4) {
  std::vector<MinimalCandidate> out;
  const int n = table.n_max;
  const auto& deep = table.level(n);

  auto canonical_rotation = [](const Word& w) {
    Word best = w;
    Word cur = w;
    for (std::size_t t = 1; t < w.size(); ++t) {
      std::rotate(cur.begin(), cur.begin() + 1, cur.end());
      if (cur < best) best = cur;
    }
    return best;
  };
  auto primitive = [](const Word& w) {
    for (std::size_t p = 1; p < w.size(); ++p) {
      if (w.size() % p) continue;
      bool rep = true;
      for (std::size_t i = p; i < w.size(); ++i)
        if (w[i] != w[i - p]) rep = false;
      if (rep) return false;
    }
    return true;
  };

  std::vector<Word> seen;
  for (int L = 1; L <= std::min(max_cycle, n); ++L) {
    for (const auto& u : table.level(L).words) {
      if (!primitive(u)) continue;
      Word canon = canonical_rotation(u);
      if (std::find(seen.begin(), seen.end(), canon) != seen.end()) continue;
      // all n-windows of u^infinity must be present at the deepest level
      bool persistent = true;
      for (std::size_t r = 0; r < canon.size() && persistent; ++r) {
        Word w;
        for (int t = 0; t < n; ++t)
          w.push_back(canon[(r + static_cast<std::size_t>(t)) % canon.size()]);
        persistent = deep.contains(w);
      }
      if (!persistent) continue;
      seen.push_back(canon);
      MinimalCandidate cand;
      cand.cycle = canon;
      cand.label = "periodic(" + table.alphabet.render(canon) + ")";
      cand.heuristic = prov == nullptr || prov->minimal_systems.empty();
      out.push_back(std::move(cand));
    }
  }

  if (prov) {
    for (const auto& ms : prov->minimal_systems) {
      if (ms.kind == "periodic") continue;  // covered by detection above
      MinimalCandidate cand;
      cand.label = ms.label;
      cand.from_provenance = true;
      out.push_back(std::move(cand));
    }
  }
  return out;
}

// Cross-check: every analytically known periodic minimal system of a
// generated family must appear among the detected candidates.
inline bool candidates_agree_with_provenance(const std::vector<MinimalCandidate>& cands,
                                             const Provenance& prov) {
  for (const auto& ms : prov.minimal_systems) {
    if (ms.kind != "periodic") continue;
    bool found = false;
    for (const auto& c : cands)
      if (!c.from_provenance && c.cycle == ms.cycle) found = true;
    if (!found) return false;
  }
  return true;
}

}  // namespace shiftlab
