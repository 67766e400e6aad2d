#pragma once

// Window language tables: for a window of a sequence, the set of n-words
// for every n <= n_max together with per-word right/left extension sets.
//
// Distinct-word extraction exploits run structure: an n-word either lies
// inside a single run (a constant word, witnessed by one representative
// occurrence per long run) or overlaps a run boundary (witnessed within n
// positions of that boundary).  Candidate positions are deduplicated with
// a rolling double fingerprint and every fingerprint hit is verified
// against the buffer, so counts are exact, not probabilistic.
//
// Saturation: the window grows by doubling until the word set at every
// level survives one further doubling unchanged (word sets only grow with
// the window, so equal counts mean equal sets).  Families whose runs can
// outrun any window supply a provenance horizon that caps the certified
// levels; stability alone cannot see past a run longer than twice the
// window.

#include <array>
#include <cstring>
#include <optional>
#include <unordered_map>
#include <vector>

#include "shiftlab/core.hpp"
#include "shiftlab/sequence.hpp"

namespace shiftlab {

struct SaturationPolicy {
  std::int64_t initial_radius = 4096;
  std::int64_t hard_cap = std::int64_t(1) << 26;  // symbols in the window
};

using ExtMask = std::array<std::uint64_t, 4>;

inline void mask_set(ExtMask& m, Symbol s) { m[s >> 6] |= std::uint64_t(1) << (s & 63); }
inline bool mask_test(const ExtMask& m, Symbol s) {
  return (m[s >> 6] >> (s & 63)) & 1;
}
inline int mask_count(const ExtMask& m) {
  int c = 0;
  for (auto w : m) c += __builtin_popcountll(w);
  return c;
}
inline std::vector<Symbol> mask_symbols(const ExtMask& m) {
  std::vector<Symbol> out;
  for (int s = 0; s < 256; ++s)
    if (mask_test(m, static_cast<Symbol>(s))) out.push_back(static_cast<Symbol>(s));
  return out;
}

class LanguageTable {
 public:
  struct Level {
    std::vector<Word> words;          // sorted lexicographically
    std::vector<ExtMask> right_ext;   // parallel to words
    std::vector<ExtMask> left_ext;
    bool saturated = false;

    std::int64_t count() const { return static_cast<std::int64_t>(words.size()); }

    std::optional<std::size_t> find(const Word& w) const {
      auto it = std::lower_bound(words.begin(), words.end(), w);
      if (it == words.end() || *it != w) return std::nullopt;
      return static_cast<std::size_t>(it - words.begin());
    }
    bool contains(const Word& w) const { return find(w).has_value(); }
  };

  std::int64_t window_lo = 0;
  std::int64_t window_hi = 0;
  int n_max = 0;
  Alphabet alphabet;
  std::string family;
  bool transitivity_asserted = false;
  bool hit_cap = false;
  std::optional<int> horizon_ceiling;  // provenance-supplied completeness cap

  const Level& level(int n) const {
    if (n < 1 || n > n_max) throw std::domain_error("level out of range");
    return levels_[static_cast<std::size_t>(n - 1)];
  }
  std::int64_t count(int n) const { return level(n).count(); }
  bool saturated(int n) const { return level(n).saturated; }

  // Saturated AND inside the provenance completeness horizon.  Census
  // claims that need the window to contain every witness (as opposed to
  // inequalities that are safe under under-approximation) gate on this.
  bool certified(int n) const {
    return saturated(n) && (!horizon_ceiling || n <= *horizon_ceiling);
  }

  std::vector<Level>& mutable_levels() { return levels_; }
  const std::vector<Level>& all_levels() const { return levels_; }

 private:
  std::vector<Level> levels_;
};

namespace detail {

struct Run {
  std::int64_t start;  // absolute index
  std::int64_t len;
  Symbol sym;
};

inline std::vector<Run> scan_runs(const Symbol* buf, std::int64_t lo, std::int64_t n) {
  std::vector<Run> runs;
  std::int64_t i = 0;
  while (i < n) {
    std::int64_t j = i + 1;
    while (j < n && buf[j] == buf[i]) ++j;
    runs.push_back(Run{lo + i, j - i, buf[i]});
    i = j;
  }
  return runs;
}

constexpr std::uint64_t kMod = (std::uint64_t(1) << 61) - 1;

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  std::uint64_t r = static_cast<std::uint64_t>((p >> 61) + (p & kMod));
  if (r >= kMod) r -= kMod;
  return r;
}
inline std::uint64_t addmod(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = a + b;
  if (r >= kMod) r -= kMod;
  return r;
}
inline std::uint64_t submod(std::uint64_t a, std::uint64_t b) {
  return addmod(a, kMod - b);
}

struct Fingerprint {
  std::uint64_t h1, h2;
  bool operator==(const Fingerprint& o) const { return h1 == o.h1 && h2 == o.h2; }
};
struct FingerprintHash {
  std::size_t operator()(const Fingerprint& f) const {
    return f.h1 ^ (f.h2 * 0x9E3779B97F4A7C15ull);
  }
};

constexpr std::uint64_t kBase1 = 1031;
constexpr std::uint64_t kBase2 = 65537;

// One level of word collection over candidate positions.
class LevelCollector {
 public:
  LevelCollector(const Symbol* buf, std::int64_t lo, std::int64_t hi, int n)
      : buf_(buf), lo_(lo), hi_(hi), n_(n) {
    pow1_ = 1;
    pow2_ = 1;
    for (int t = 0; t < n - 1; ++t) {
      pow1_ = mulmod(pow1_, kBase1);
      pow2_ = mulmod(pow2_, kBase2);
    }
  }

  // Positions must be visited in ascending order; contiguous stretches use
  // rolling updates.
  void visit_interval(std::int64_t a, std::int64_t b) {
    a = std::max(a, lo_);
    b = std::min(b, hi_ - n_ + 1);
    if (a > b) return;
    std::uint64_t h1 = 0, h2 = 0;
    for (std::int64_t t = 0; t < n_; ++t) {
      Symbol s = buf_[a - lo_ + t];
      h1 = addmod(mulmod(h1, kBase1), s + 1);
      h2 = addmod(mulmod(h2, kBase2), s + 1);
    }
    record(a, h1, h2);
    for (std::int64_t i = a + 1; i <= b; ++i) {
      Symbol out = buf_[i - 1 - lo_];
      Symbol in = buf_[i - 1 + n_ - lo_];
      h1 = addmod(mulmod(submod(h1, mulmod(out + 1, pow1_)), kBase1), in + 1);
      h2 = addmod(mulmod(submod(h2, mulmod(out + 1, pow2_)), kBase2), in + 1);
      record(i, h1, h2);
    }
  }

  struct Slot {
    std::int64_t first_pos;
    ExtMask right{};
    ExtMask left{};
  };

  void record(std::int64_t pos, std::uint64_t h1, std::uint64_t h2) {
    auto& bucket = map_[Fingerprint{h1, h2}];
    Slot* slot = nullptr;
    for (auto idx : bucket) {
      if (std::memcmp(buf_ + (slots_[idx].first_pos - lo_), buf_ + (pos - lo_),
                      static_cast<std::size_t>(n_)) == 0) {
        slot = &slots_[idx];
        break;
      }
    }
    if (!slot) {
      bucket.push_back(slots_.size());
      slots_.push_back(Slot{pos, {}, {}});
      slot = &slots_.back();
    }
    if (pos + n_ <= hi_) mask_set(slot->right, buf_[pos + n_ - lo_]);
    if (pos - 1 >= lo_) mask_set(slot->left, buf_[pos - 1 - lo_]);
  }

  LanguageTable::Level finalize() const {
    struct Entry {
      Word w;
      ExtMask r, l;
    };
    std::vector<Entry> entries;
    entries.reserve(slots_.size());
    for (const auto& s : slots_) {
      Word w(static_cast<std::size_t>(n_), '\0');
      std::memcpy(w.data(), buf_ + (s.first_pos - lo_), static_cast<std::size_t>(n_));
      entries.push_back(Entry{std::move(w), s.right, s.left});
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.w < b.w; });
    LanguageTable::Level lvl;
    lvl.words.reserve(entries.size());
    lvl.right_ext.reserve(entries.size());
    lvl.left_ext.reserve(entries.size());
    for (auto& e : entries) {
      lvl.words.push_back(std::move(e.w));
      lvl.right_ext.push_back(e.r);
      lvl.left_ext.push_back(e.l);
    }
    return lvl;
  }

 private:
  const Symbol* buf_;
  std::int64_t lo_, hi_;
  int n_;
  std::uint64_t pow1_, pow2_;
  std::unordered_map<Fingerprint, std::vector<std::size_t>, FingerprintHash> map_;
  std::vector<Slot> slots_;
};

inline LanguageTable::Level collect_level(const Symbol* buf, std::int64_t lo,
                                          std::int64_t hi, const std::vector<Run>& runs,
                                          int n) {
  LevelCollector col(buf, lo, hi, n);
  const std::int64_t total_positions = hi - lo + 1 - n + 1;
  if (total_positions <= 0) return col.finalize();

  // Candidate intervals around run boundaries, plus one interior
  // representative per run long enough to hold a constant word with both
  // neighbours inside the run.
  std::vector<std::pair<std::int64_t, std::int64_t>> intervals;
  for (std::size_t t = 1; t < runs.size(); ++t) {
    std::int64_t b = runs[t].start;
    intervals.emplace_back(b - n - 1, b + 1);
  }
  std::vector<std::int64_t> singles;
  for (const auto& r : runs)
    if (r.len >= n + 1) singles.push_back(r.start + 1);

  // Merge and measure coverage; fall back to a full scan when dense.
  std::vector<std::pair<std::int64_t, std::int64_t>> merged;
  for (auto iv : intervals) {
    iv.first = std::max(iv.first, lo);
    iv.second = std::min(iv.second, hi - n + 1);
    if (iv.first > iv.second) continue;
    if (!merged.empty() && iv.first <= merged.back().second + 1)
      merged.back().second = std::max(merged.back().second, iv.second);
    else
      merged.push_back(iv);
  }
  std::int64_t covered = 0;
  for (auto& iv : merged) covered += iv.second - iv.first + 1;

  if (covered * 10 >= total_positions * 7) {
    col.visit_interval(lo, hi - n + 1);
    return col.finalize();
  }

  std::size_t next_single = 0;
  for (std::size_t t = 0; t <= merged.size(); ++t) {
    std::int64_t upto =
        (t < merged.size()) ? merged[t].first : (hi - n + 2);
    while (next_single < singles.size() && singles[next_single] < upto) {
      std::int64_t s = singles[next_single++];
      if (t == 0 || s > merged[t - 1].second) col.visit_interval(s, s);
    }
    if (t < merged.size()) col.visit_interval(merged[t].first, merged[t].second);
  }
  return col.finalize();
}

}  // namespace detail

inline LanguageTable build_language(const Sequence& seq, int n_max,
                                    SaturationPolicy policy = {}) {
  if (n_max < 1) throw std::domain_error("n_max must be positive");

  LanguageTable table;
  table.n_max = n_max;
  table.alphabet = seq.alphabet();
  table.family = seq.provenance().family;
  table.transitivity_asserted = seq.provenance().transitivity_asserted;

  const bool two_sided = seq.kind() == Sequence::Kind::BiInfinite;
  std::int64_t span = std::max<std::int64_t>(policy.initial_radius, 8LL * n_max);
  span = std::min(span, policy.hard_cap);

  auto window_for = [&](std::int64_t s) {
    std::int64_t lo = two_sided ? -s / 2 : 0;
    std::int64_t hi = lo + s - 1;
    if (auto sup = seq.support()) {
      lo = std::max(lo, sup->first);
      hi = std::min(hi, sup->second);
    }
    return std::make_pair(lo, hi);
  };

  std::vector<std::int64_t> prev_counts;
  std::vector<LanguageTable::Level> levels;
  std::vector<bool> stable(static_cast<std::size_t>(n_max), false);
  std::int64_t lo = 0, hi = 0;
  bool first = true;

  while (true) {
    std::tie(lo, hi) = window_for(span);
    if (hi - lo + 1 <= n_max) {
      if (span >= policy.hard_cap || (seq.support() && hi - lo + 1 == seq.support()->second - seq.support()->first + 1))
        throw std::domain_error("window too short for requested n_max");
      span = std::min(span * 2, policy.hard_cap);
      continue;
    }
    std::vector<Symbol> buf(static_cast<std::size_t>(hi - lo + 1));
    seq.fill(lo, hi, buf.data());
    auto runs = detail::scan_runs(buf.data(), lo, hi - lo + 1);

    levels.clear();
    levels.reserve(static_cast<std::size_t>(n_max));
    std::vector<std::int64_t> counts;
    for (int n = 1; n <= n_max; ++n) {
      levels.push_back(detail::collect_level(buf.data(), lo, hi, runs, n));
      counts.push_back(levels.back().count());
    }

    if (!first) {
      for (int n = 0; n < n_max; ++n)
        stable[static_cast<std::size_t>(n)] = counts[static_cast<std::size_t>(n)] ==
                                              prev_counts[static_cast<std::size_t>(n)];
      bool all_stable = true;
      for (bool s : stable) all_stable = all_stable && s;
      bool can_grow = span < policy.hard_cap;
      if (auto sup = seq.support()) {
        // A window already clamped to the full sample cannot grow.
        if (lo == sup->first && hi == sup->second) can_grow = false;
      }
      // Families with a completeness hook keep growing towards the cap
      // while the certified horizon still falls short of n_max: stability
      // alone cannot see the far end of a run longer than the window.
      bool chase_horizon = false;
      if (seq.provenance().complete_horizon) {
        auto ceiling = seq.provenance().complete_horizon(lo, hi);
        chase_horizon = !ceiling || *ceiling < n_max;
      }
      if ((all_stable && !chase_horizon) || !can_grow) {
        table.hit_cap = !all_stable;
        break;
      }
    }
    prev_counts = counts;
    first = false;
    span = std::min(span * 2, policy.hard_cap);
  }

  table.window_lo = lo;
  table.window_hi = hi;
  auto& lv = table.mutable_levels();
  lv = std::move(levels);
  for (int n = 1; n <= n_max; ++n)
    lv[static_cast<std::size_t>(n - 1)].saturated = stable[static_cast<std::size_t>(n - 1)];

  if (seq.provenance().complete_horizon)
    table.horizon_ceiling = seq.provenance().complete_horizon(lo, hi);
  return table;
}

}  // namespace shiftlab
