#pragma once

// Empirical measures on cylinder sets, the weak metric over a canonical
// word enumeration, convergence probes, the right-special window-cover
// check, and the generic-measure candidate extraction.
//
// Frequencies are exact rationals count/n; only the metric sum itself uses
// floating point, with the truncation tail reported explicitly rather than
// silently dropped.

#include <cmath>
#include <map>

#include "shiftlab/complexity.hpp"
#include "shiftlab/language.hpp"
#include "shiftlab/sequence.hpp"

namespace shiftlab {

struct EmpiricalMeasure {
  Alphabet alphabet;
  int depth = 0;               // max cylinder word length tabulated
  std::int64_t sample_n = 0;   // denominator of every frequency
  std::int64_t start = 0;
  std::map<Word, std::int64_t> counts;  // only words with positive count

  std::int64_t count(const Word& w) const {
    auto it = counts.find(w);
    return it == counts.end() ? 0 : it->second;
  }
  double freq(const Word& w) const {
    return static_cast<double>(count(w)) / static_cast<double>(sample_n);
  }

  // delta_{s^inf}: every cylinder is the constant word or has measure 0.
  static EmpiricalMeasure point_mass(const Alphabet& alpha, Symbol s, int depth) {
    EmpiricalMeasure m;
    m.alphabet = alpha;
    m.depth = depth;
    m.sample_n = 1;
    for (int d = 1; d <= depth; ++d)
      m.counts[constant_word(s, static_cast<std::size_t>(d))] = 1;
    return m;
  }
};

// freq[w] = occurrences of w beginning in [start, start+n-1], over n.
inline EmpiricalMeasure empirical(const Sequence& seq, std::int64_t start,
                                  std::int64_t n, int depth) {
  if (depth < 1 || n < depth) throw std::domain_error("empirical needs n >= depth >= 1");
  EmpiricalMeasure m;
  m.alphabet = seq.alphabet();
  m.depth = depth;
  m.sample_n = n;
  m.start = start;
  std::vector<Symbol> buf(static_cast<std::size_t>(n + depth - 1));
  seq.fill(start, start + n + depth - 2, buf.data());
  for (std::int64_t i = 0; i < n; ++i) {
    Word w;
    w.reserve(static_cast<std::size_t>(depth));
    for (int d = 1; d <= depth; ++d) {
      w.push_back(static_cast<char>(buf[static_cast<std::size_t>(i + d - 1)]));
      ++m.counts[w];
    }
  }
  return m;
}

struct WeakMetricSpec {
  int truncation = 16;  // number of enumerated words included in the sum
};

// Canonical length-then-lexicographic enumeration of nonempty words over
// the alphabet's declared order; stable across runs by construction.
inline std::vector<Word> enumerate_words(const Alphabet& alpha, int count) {
  std::vector<Word> out;
  std::vector<Word> level;  // words of the current length, in order
  for (Symbol s : alpha.symbols()) level.push_back(Word(1, static_cast<char>(s)));
  while (static_cast<int>(out.size()) < count) {
    for (const auto& w : level) {
      out.push_back(w);
      if (static_cast<int>(out.size()) == count) return out;
    }
    std::vector<Word> next;
    next.reserve(level.size() * alpha.size());
    for (const auto& w : level)
      for (Symbol s : alpha.symbols()) next.push_back(w + static_cast<char>(s));
    level = std::move(next);
  }
  return out;
}

// Largest truncation whose enumerated words all fit within `depth`.
inline int truncation_within_depth(const Alphabet& alpha, int depth, int want) {
  std::int64_t total = 0;
  std::int64_t pow = 1;
  for (int d = 1; d <= depth; ++d) {
    pow *= static_cast<std::int64_t>(alpha.size());
    total += pow;
    if (total >= want) return want;
  }
  return static_cast<int>(total);
}

struct WeakDistance {
  double value = 0;       // truncated sum
  double tail_bound = 0;  // 2^-T; every omitted term is at most 2^-t
  double upper() const { return value + tail_bound; }
};

inline WeakDistance weak_distance(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                                  WeakMetricSpec spec = {}) {
  Alphabet alpha = mu.alphabet.merged_with(nu.alphabet);
  auto words = enumerate_words(alpha, spec.truncation);
  if (!words.empty()) {
    int need = static_cast<int>(words.back().size());
    if (mu.depth < need || nu.depth < need)
      throw std::domain_error("measures too shallow for the requested truncation");
  }
  WeakDistance d;
  double weight = 1.0;
  for (const auto& w : words) {
    weight *= 0.5;  // 2^-t for the t-th enumerated word
    d.value += weight * std::abs(mu.freq(w) - nu.freq(w));
  }
  d.tail_bound = std::pow(0.5, spec.truncation);
  return d;
}

// ---------------------------------------------------------------------------
// Convergence probe: nu_n at scheduled sample lengths from a fixed start.

struct ConvergenceReport {
  std::vector<std::int64_t> lengths;
  std::vector<double> step_distance;  // d(nu_{n_t}, nu_{n_{t+1}})
  int truncation_used = 0;
  double tail_bound = 0;
  double tol = 0;
  // Verdict: from some step within the first half of the schedule on, every
  // consecutive distance stays below tol.  Block-structured sequences have
  // genuine parity wobble, so strict decrease is not required.
  bool cauchy_like = false;
  EmpiricalMeasure candidate;  // the final estimate
};

inline ConvergenceReport generic_limit_probe(const Sequence& seq, std::int64_t start,
                                             std::vector<std::int64_t> lengths, int depth,
                                             WeakMetricSpec spec = {}, double tol = 0.01) {
  if (lengths.size() < 2) throw std::domain_error("probe needs at least two lengths");
  for (std::size_t t = 1; t < lengths.size(); ++t)
    if (lengths[t] <= lengths[t - 1])
      throw std::domain_error("sample lengths must increase");
  ConvergenceReport rep;
  rep.lengths = lengths;
  rep.tol = tol;
  rep.truncation_used = truncation_within_depth(seq.alphabet(), depth, spec.truncation);
  WeakMetricSpec eff{rep.truncation_used};
  std::vector<EmpiricalMeasure> nus;
  for (auto n : lengths) nus.push_back(empirical(seq, start, n, depth));
  for (std::size_t t = 0; t + 1 < nus.size(); ++t) {
    WeakDistance d = weak_distance(nus[t], nus[t + 1], eff);
    rep.step_distance.push_back(d.value);
    rep.tail_bound = d.tail_bound;
  }
  rep.cauchy_like = false;
  for (std::size_t t0 = 0; t0 <= rep.step_distance.size() / 2; ++t0) {
    bool ok = true;
    for (std::size_t t = t0; t < rep.step_distance.size(); ++t)
      ok = ok && rep.step_distance[t] <= tol;
    if (ok) {
      rep.cauchy_like = true;
      break;
    }
  }
  rep.candidate = nus.back();
  return rep;
}

// ---------------------------------------------------------------------------
// Window cover (every long subword meets a right-special word).

struct CoverVerdict {
  int n = 0;
  std::int64_t required_len = 0;  // c(n) + n
  bool pass = false;
  bool skipped = false;
  std::string reason;
  std::int64_t counterexample = 0;  // window position when !pass
};

inline std::vector<CoverVerdict> rs_window_cover_check(const Sequence& seq,
                                                       const LanguageTable& table,
                                                       const SpecialWordReport& census,
                                                       int max_n = 30) {
  std::vector<CoverVerdict> out;
  auto periodic =
      detect_eventual_periodicity(seq, Direction::Right,
                                  std::min<std::int64_t>(table.window_hi, 16384));
  if (periodic) {
    CoverVerdict v;
    v.skipped = true;
    v.reason = "sequence is eventually periodic to the right within the horizon";
    out.push_back(v);
    return out;
  }
  std::int64_t lo = table.window_lo, hi = table.window_hi;
  std::vector<Symbol> buf(static_cast<std::size_t>(hi - lo + 1));
  seq.fill(lo, hi, buf.data());
  Word whole(reinterpret_cast<const char*>(buf.data()), buf.size());

  for (int n = 1; n <= std::min(max_n, table.n_max); ++n) {
    if (!table.certified(n)) continue;
    CoverVerdict v;
    v.n = n;
    v.required_len = table.count(n) + n;
    if (hi - lo + 1 < v.required_len) continue;  // window too short to test

    std::vector<char> has_start(whole.size(), 0);
    for (const auto& e : census.level(n).rs) {
      std::size_t pos = whole.find(e.word);
      while (pos != Word::npos) {
        has_start[pos] = 1;
        pos = whole.find(e.word, pos + 1);
      }
    }
    v.pass = true;
    std::int64_t L = v.required_len;
    std::int64_t run_without = 0;  // consecutive positions with no RS start
    for (std::int64_t i = 0; i + n <= static_cast<std::int64_t>(whole.size()); ++i) {
      if (has_start[static_cast<std::size_t>(i)])
        run_without = 0;
      else
        ++run_without;
      // if positions [i-L+n+1 .. i] all lack starts and a full window of
      // length L starting at i-L+n+1... check directly once enough history
      if (run_without >= L - n + 1) {
        std::int64_t wstart = i - (L - n + 1) + 1;
        if (wstart >= 0 && wstart + L <= static_cast<std::int64_t>(whole.size())) {
          v.pass = false;
          v.counterexample = lo + wstart;
          break;
        }
      }
    }
    out.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Generic-measure candidate extraction.

struct GenericCandidates {
  int level = 0;              // the qualifying word length used
  std::int64_t rs_count = 0;  // C at that level (< g)
  int depth_used = 0;
  int truncation_used = 0;
  double tail_bound = 0;
  double cluster_threshold = 0;
  struct Cluster {
    EmpiricalMeasure representative;
    std::vector<Word> members;  // the right-special words backing it
  };
  std::vector<Cluster> clusters;
  std::string diagnostic;  // nonempty when no qualifying level was found
  std::string caveat;      // periodicity-horizon caveat carried with results
};

// Desk-scale version of the extraction: pick the largest certified level
// n* with #RS(n*) = C < g and c(n*) < 2 g n*, start an n*-shift average at
// the first visible occurrence of each right-special word, and cluster the
// resulting measures by weak distance.
inline GenericCandidates extract_generic_candidates(
    const Sequence& seq, const LanguageTable& table, const SpecialWordReport& census,
    const ComplexityProfile& prof, int g, int depth, WeakMetricSpec spec = {},
    double cluster_threshold = 0) {
  if (g < 2) throw std::domain_error("extraction needs g >= 2");
  GenericCandidates out;
  std::int64_t detector_horizon = std::min<std::int64_t>(table.window_hi, 16384);
  auto periodic = detect_eventual_periodicity(seq, Direction::Right, detector_horizon);
  if (periodic) {
    out.diagnostic = "sequence is eventually periodic to the right; extraction skipped";
    return out;
  }
  out.caveat = "aperiodicity checked only through horizon " +
               std::to_string(detector_horizon);

  int level = 0;
  for (int n = 1; n <= prof.n_max; ++n) {
    if (!prof.cert(n)) continue;
    if (census.rs_count(n) < g && prof.at(n) < 2 * static_cast<std::int64_t>(g) * n)
      level = n;
  }
  if (level == 0) {
    out.diagnostic = "no certified level with #RS < g and c < 2 g n in the window";
    return out;
  }
  out.level = level;
  out.rs_count = census.rs_count(level);

  out.depth_used = std::min(depth, level);
  out.truncation_used =
      truncation_within_depth(seq.alphabet(), out.depth_used, spec.truncation);
  WeakMetricSpec eff{out.truncation_used};
  out.tail_bound = std::pow(0.5, out.truncation_used);
  out.cluster_threshold =
      cluster_threshold > 0 ? cluster_threshold : 8 * out.tail_bound;

  // last visible occurrence of each right-special word with room for the
  // shift average
  std::int64_t lo = table.window_lo, hi = table.window_hi;
  std::vector<Symbol> buf(static_cast<std::size_t>(hi - lo + 1));
  seq.fill(lo, hi, buf.data());
  Word whole(reinterpret_cast<const char*>(buf.data()), buf.size());
  std::int64_t last_valid_start = hi - (level + out.depth_used - 1) + 1 - lo;

  if (last_valid_start < 0) {
    out.diagnostic = "window too short for the shift average";
    return out;
  }
  std::vector<std::pair<Word, EmpiricalMeasure>> nus;
  for (const auto& e : census.level(level).rs) {
    std::size_t pos = whole.find(e.word);
    if (pos == Word::npos || pos > static_cast<std::size_t>(last_valid_start)) continue;
    nus.emplace_back(e.word,
                     empirical(seq, lo + static_cast<std::int64_t>(pos), level,
                               out.depth_used));
  }

  // transitive clustering by weak distance
  std::vector<int> cluster_of(nus.size(), -1);
  for (std::size_t a = 0; a < nus.size(); ++a) {
    if (cluster_of[a] < 0) {
      cluster_of[a] = static_cast<int>(out.clusters.size());
      out.clusters.push_back(GenericCandidates::Cluster{nus[a].second, {nus[a].first}});
    }
    for (std::size_t b = a + 1; b < nus.size(); ++b) {
      if (cluster_of[b] >= 0) continue;
      WeakDistance d = weak_distance(nus[a].second, nus[b].second, eff);
      if (d.value <= out.cluster_threshold) {
        cluster_of[b] = cluster_of[a];
        out.clusters[static_cast<std::size_t>(cluster_of[a])].members.push_back(
            nus[b].first);
      }
    }
  }
  return out;
}

}  // namespace shiftlab
