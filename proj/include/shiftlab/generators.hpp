#pragma once

// Sequence families: Sturmian rotations, the ruler-driven two-scale run
// families (with and without Sturmian stitching), the cyclic transitive
// family, the two non-recurrent junction examples, and the staircase.
//
// Every generator is deterministic and reproducible from its provenance
// record.  Schedules are generated lazily under a mutex, with each entry
// chosen as the least value clearing every logged constraint by the
// configured margin; values that would exceed the representable range
// saturate at kGrowthSat and are marked capped.

#include <algorithm>
#include <bit>
#include <cassert>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

#include "shiftlab/core.hpp"
#include "shiftlab/growth.hpp"
#include "shiftlab/rotation.hpp"
#include "shiftlab/sequence.hpp"

namespace shiftlab {

// ---------------------------------------------------------------------------
// Sturmian sequences

struct SturmianParams {
  RealSpec beta = RealSpec::golden();
  std::optional<RealSpec> x0;  // default beta/2
  Symbol zero_symbol = 0;
  Symbol one_symbol = 1;

  static SturmianParams golden() { return SturmianParams{}; }

  SturmianParams relabeled(Symbol zero, Symbol one) const {
    SturmianParams p = *this;
    p.zero_symbol = zero;
    p.one_symbol = one;
    return p;
  }
};

namespace detail {

inline std::vector<Word> relabel_binary(std::vector<Word> words, Symbol zero, Symbol one) {
  for (auto& w : words)
    for (auto& c : w) c = static_cast<char>(c ? one : zero);
  return words;
}

}  // namespace detail

inline MinimalSystemInfo sturmian_system_info(const SturmianParams& params,
                                              std::shared_ptr<RotationCoder> coder) {
  MinimalSystemInfo ms;
  ms.kind = "sturmian";
  ms.label = "sturmian(beta=" + params.beta.description + ") on {" +
             Alphabet::default_token(params.zero_symbol) + "," +
             Alphabet::default_token(params.one_symbol) + "}";
  Symbol z = params.zero_symbol, o = params.one_symbol;
  ms.language = [coder, z, o](int r) {
    return detail::relabel_binary(coder->language(r), z, o);
  };
  return ms;
}

// Bi-infinite coding s_n = 1 iff frac(x0 + n*beta) in [0, beta), relabeled.
inline Sequence sturmian(const SturmianParams& params) {
  RealSpec x0 = params.x0 ? *params.x0 : params.beta.over(2);
  auto coder = std::make_shared<RotationCoder>(params.beta, x0);
  Symbol z = params.zero_symbol, o = params.one_symbol;
  Alphabet alpha({z, o}, {Alphabet::default_token(z), Alphabet::default_token(o)});

  Provenance prov;
  prov.family = "sturmian";
  prov.set("beta", params.beta.description);
  prov.set("x0", x0.description);
  prov.set("zero", Alphabet::default_token(z));
  prov.set("one", Alphabet::default_token(o));
  prov.minimal_systems.push_back(sturmian_system_info(params, coder));

  return Sequence(
      Sequence::Kind::BiInfinite, alpha, std::move(prov),
      [coder, z, o](std::int64_t n) { return coder->code(n) ? o : z; },
      [coder, z, o](std::int64_t lo, std::int64_t hi, Symbol* out) {
        for (std::int64_t n = lo; n <= hi; ++n) out[n - lo] = coder->code(n) ? o : z;
      });
}

// ---------------------------------------------------------------------------
// The ruler sequence: omega_i = (2-adic valuation of i) + 1, so that
// omega = 1,2,1,3,1,2,1,4,...  The first occurrence of k is at i = 2^(k-1),
// and every occurrence of a value >= k is preceded by the same word
// omega_1 ... omega_{2^(k-1)-1}.
inline int ruler(std::uint64_t i) {
  if (i == 0) throw std::domain_error("ruler is indexed from 1");
  return std::countr_zero(i) + 1;
}

// ---------------------------------------------------------------------------
// Exponent schedules

namespace detail {

inline std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = a + b;
  if (r < a || r >= kGrowthSat) return kGrowthSat;
  return r;
}
inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a >= kGrowthSat / b) return kGrowthSat;
  return a * b;
}

constexpr std::int64_t kMaxStitchMaterialize = std::int64_t(1) << 28;

}  // namespace detail

struct ScheduleEntryRecord {
  int k = 0, p = 0;
  std::uint64_t value = 0;
  std::uint64_t lb_prev = 0;      // strict interleave
  std::uint64_t lb_disjoint = 0;  // n_k^p > n_k^{p-1} + n_k^{p-2}
  std::uint64_t lb_layout = 0;    // p=1: clears the previous F-range
  std::uint64_t g_target = 0;     // sharpness: g(value) >= sum of smaller + margin
  std::uint64_t g_target_liminf = 0;  // p=1: g(value) >= (j+2)(...) + margin
  std::uint64_t pre_inflation = 0;
  bool capped = false;
  bool inflated = false;
  bool inflation_deferred = false;
};

struct ScheduleValidation {
  bool ok = true;
  std::vector<std::string> violations;
};

class ScheduleData {
 public:
  ScheduleData(int j, int i, GrowthFunction g, std::uint64_t margin,
               std::vector<SturmianParams> sturmians)
      : j_(j), i_(i), g_(std::move(g)), margin_(margin), sturmians_(std::move(sturmians)) {
    if (j_ < 2) throw std::domain_error("schedule needs j >= 2");
    if (i_ < 0 || i_ > j_) throw std::domain_error("schedule needs 0 <= i <= j");
    if (margin_ < 1) throw std::domain_error("schedule margin must be >= 1");
    if (g_.eval(kGrowthSat) == g_.eval(1) && g_.eval(1) == g_.eval(1 << 20))
      throw std::domain_error("growth function is not unbounded on the searched range");
    if (i_ > 0) {
      if (static_cast<int>(sturmians_.size()) != i_)
        throw std::domain_error("one Sturmian parameter set per stitched subsystem");
      for (int p = 0; p < i_; ++p) {
        coders_.push_back(std::make_shared<RotationCoder>(
            sturmians_[static_cast<std::size_t>(p)].beta,
            sturmians_[static_cast<std::size_t>(p)].x0
                ? *sturmians_[static_cast<std::size_t>(p)].x0
                : sturmians_[static_cast<std::size_t>(p)].beta.over(2)));
      }
      stitch_words_.resize(static_cast<std::size_t>(i_));
      stitch_starts_.resize(static_cast<std::size_t>(i_));
    }
  }

  int j() const { return j_; }
  int i() const { return i_; }
  const GrowthFunction& g() const { return g_; }
  std::uint64_t margin() const { return margin_; }
  const std::vector<SturmianParams>& sturmians() const { return sturmians_; }
  bool stitched_symbol(int p) const { return p > j_ - i_; }

  std::uint64_t entry(int k, int p) {
    std::lock_guard<std::mutex> lock(mu_);
    ensure_locked(k);
    return entries_[idx(k, p)];
  }

  int generations() {
    std::lock_guard<std::mutex> lock(mu_);
    return static_cast<int>(entries_.size()) / j_;
  }

  // Stitched unit content for symbol p (1-based within 1..j), generation k.
  // Only materializable units can be fetched.
  Word stitch_word(int k, int p) {
    std::lock_guard<std::mutex> lock(mu_);
    ensure_locked(k);
    auto& chain = stitch_words_[stitch_index(p)];
    if (static_cast<std::size_t>(k) > chain.size() || chain[static_cast<std::size_t>(k - 1)].empty())
      throw std::domain_error("stitch word beyond the materializable horizon");
    return chain[static_cast<std::size_t>(k - 1)];
  }

  // Left-tail symbol t positions left of the origin (t >= 1): the
  // suffix-limit of the w_k^j chain.
  Symbol tail_symbol(std::int64_t t) {
    std::lock_guard<std::mutex> lock(mu_);
    if (i_ == 0) throw std::domain_error("tail_symbol needs a stitched schedule");
    std::size_t ci = stitch_index(j_);
    int k = 1;
    while (true) {
      ensure_locked(k);
      const auto& chain = stitch_words_[ci];
      if (static_cast<std::size_t>(k) <= chain.size()) {
        const Word& w = chain[static_cast<std::size_t>(k - 1)];
        if (!w.empty() && static_cast<std::int64_t>(w.size()) >= t)
          return static_cast<Symbol>(w[w.size() - static_cast<std::size_t>(t)]);
        if (w.empty())
          throw std::domain_error("left tail beyond the materializable horizon");
      }
      ++k;
      if (k > 64) throw std::domain_error("left tail beyond the representable horizon");
    }
  }

  // Total block length |B_m| = sum_p n_m^p (saturating).
  std::uint64_t block_len(int m) {
    std::lock_guard<std::mutex> lock(mu_);
    ensure_locked(m);
    return block_len_locked(m);
  }

  // L(k) = sum of |B_{omega_t}| over t = 1 .. 2^(k-1)-1 (saturating).
  std::uint64_t layout_prefix(int k) {
    std::lock_guard<std::mutex> lock(mu_);
    ensure_locked(std::max(1, k - 1));
    return layout_prefix_locked(k);
  }

  std::vector<ScheduleEntryRecord> log() {
    std::lock_guard<std::mutex> lock(mu_);
    return log_;
  }

  // Independent post-hoc pass over the constraint log.
  ScheduleValidation validate(int k_max) {
    std::lock_guard<std::mutex> lock(mu_);
    ensure_locked(k_max);
    ScheduleValidation v;
    auto fail = [&v](const std::string& s) {
      v.ok = false;
      v.violations.push_back(s);
    };
    std::uint64_t prev = 0;
    std::uint64_t running_sum = 0;
    for (const auto& rec : log_) {
      if (rec.k > k_max) break;
      std::string tag = "n_" + std::to_string(rec.k) + "^" + std::to_string(rec.p);
      if (!rec.capped) {
        if (rec.value <= prev && prev != 0) fail(tag + " does not increase");
        if (rec.p >= 3) {
          std::uint64_t a = entries_[idx(rec.k, rec.p - 1)];
          std::uint64_t b = entries_[idx(rec.k, rec.p - 2)];
          if (rec.value <= detail::sat_add(a, b)) fail(tag + " violates window disjointness");
        }
        if (g_.eval(rec.value) < detail::sat_add(running_sum, 1))
          fail(tag + " violates the sharpness sum inequality");
        if (rec.p == 1 && rec.k >= 2) {
          std::uint64_t base = detail::sat_add(
              detail::sat_add(entries_[idx(rec.k - 1, j_)], entries_[idx(rec.k - 1, 1)]),
              layout_prefix_locked(rec.k - 1));
          if (base < kGrowthSat &&
              g_.eval(rec.value) <= detail::sat_mul(static_cast<std::uint64_t>(j_) + 2, base))
            fail(tag + " violates the liminf sharpness inequality");
        }
      }
      prev = rec.value;
      running_sum = detail::sat_add(running_sum, rec.value);
    }
    // Stitching chain: each unit begins and ends with its predecessor and
    // matches the rotation coding at its recorded start.
    for (int p = j_ - i_ + 1; p <= j_; ++p) {
      const auto& chain = stitch_words_[stitch_index(p)];
      for (std::size_t k = 1; k < chain.size(); ++k) {
        const Word& a = chain[k - 1];
        const Word& b = chain[k];
        if (b.empty()) continue;  // deferred beyond horizon
        if (a.empty() || b.substr(0, a.size()) != a ||
            b.substr(b.size() - a.size()) != a)
          fail("stitch chain for p=" + std::to_string(p) + " breaks at k=" +
               std::to_string(k + 1));
      }
    }
    return v;
  }

 private:
  friend class StitchedHorizon;

  std::size_t idx(int k, int p) const {
    return static_cast<std::size_t>(k - 1) * static_cast<std::size_t>(j_) +
           static_cast<std::size_t>(p - 1);
  }
  std::size_t stitch_index(int p) const {
    return static_cast<std::size_t>(p - (j_ - i_) - 1);
  }

  std::uint64_t block_len_locked(int m) const {
    std::uint64_t s = 0;
    for (int p = 1; p <= j_; ++p) s = detail::sat_add(s, entries_[idx(m, p)]);
    return s;
  }

  std::uint64_t layout_prefix_locked(int k) const {
    // count of blocks of type m among t in [1, 2^(k-1)-1] is 2^(k-1-m)
    std::uint64_t total = 0;
    for (int m = 1; m <= k - 1; ++m) {
      std::uint64_t copies = (k - 1 - m) >= 63 ? kGrowthSat
                                               : (std::uint64_t(1) << (k - 1 - m));
      total = detail::sat_add(total, detail::sat_mul(copies, block_len_locked(m)));
    }
    return total;
  }

  void ensure_locked(int k) {
    while (static_cast<int>(entries_.size()) < k * j_) {
      int kk = static_cast<int>(entries_.size()) / j_ + 1;
      int pp = static_cast<int>(entries_.size()) % j_ + 1;
      generate_entry_locked(kk, pp);
    }
  }

  void generate_entry_locked(int k, int p) {
    ScheduleEntryRecord rec;
    rec.k = k;
    rec.p = p;
    std::uint64_t prev = entries_.empty() ? 0 : entries_.back();
    rec.lb_prev = detail::sat_add(prev, margin_);
    rec.lb_disjoint = 0;
    if (p >= 3)
      rec.lb_disjoint = detail::sat_add(
          detail::sat_add(entries_[idx(k, p - 1)], entries_[idx(k, p - 2)]), margin_);
    rec.lb_layout = 0;
    rec.g_target_liminf = 0;
    if (p == 1 && k >= 2) {
      std::uint64_t base = detail::sat_add(
          detail::sat_add(entries_[idx(k - 1, j_)], entries_[idx(k - 1, 1)]),
          layout_prefix_locked(k - 1));
      rec.lb_layout = detail::sat_add(base, margin_);
      rec.g_target_liminf =
          detail::sat_add(detail::sat_mul(static_cast<std::uint64_t>(j_) + 2, base), margin_);
    }
    std::uint64_t sum = 0;
    for (auto e : entries_) sum = detail::sat_add(sum, e);
    rec.g_target = detail::sat_add(sum, margin_);

    std::uint64_t v = std::max({std::uint64_t(1), rec.lb_prev, rec.lb_disjoint, rec.lb_layout});
    std::uint64_t need = g_.least_n_with(rec.g_target);
    if (entries_.empty() && need == kGrowthSat && rec.g_target <= margin_ + 1)
      throw std::domain_error("growth function never reaches its first target");
    v = std::max(v, need);
    if (rec.g_target_liminf) v = std::max(v, g_.least_n_with(rec.g_target_liminf));
    rec.capped = v >= kGrowthSat;
    if (rec.capped) v = kGrowthSat;

    if (!rec.capped && stitched_symbol(p)) {
      rec.pre_inflation = v;
      if (static_cast<std::int64_t>(v) > detail::kMaxStitchMaterialize) {
        rec.inflation_deferred = true;
        stitch_words_[stitch_index(p)].push_back(Word{});
        stitch_starts_[stitch_index(p)].push_back(-1);
      } else {
        v = stitch_extend_locked(p, k, v);
        rec.inflated = v != rec.pre_inflation;
      }
    } else if (stitched_symbol(p)) {
      stitch_words_[stitch_index(p)].push_back(Word{});
      stitch_starts_[stitch_index(p)].push_back(-1);
    }

    entries_.push_back(v);
    rec.value = v;
    log_.push_back(rec);
  }

  // Ensures the Sturmian prefix buffer for stitched slot ci covers [0, len).
  // Symbols are stored relabeled into the stitched alphabet.
  const Word& sturmian_prefix_locked(std::size_t ci, std::int64_t len) {
    Word& buf = prefix_buffers_.emplace(ci, Word{}).first->second;
    const auto& sp = sturmians_[ci];
    while (static_cast<std::int64_t>(buf.size()) < len) {
      std::int64_t from = static_cast<std::int64_t>(buf.size());
      std::int64_t upto = std::max<std::int64_t>(1024, from * 2);
      upto = std::max(upto, len);
      for (std::int64_t n = from; n < upto; ++n)
        buf.push_back(static_cast<char>(coders_[ci]->code(n) ? sp.one_symbol
                                                             : sp.zero_symbol));
    }
    return buf;
  }

  // Chooses w_{k}^p: the shortest window of S_p of length >= target that
  // has w_{k-1}^p as both prefix and suffix, scanned from index 0;
  // earliest start wins among windows of the chosen length.  Returns the
  // chosen length (the inflated schedule entry).
  std::uint64_t stitch_extend_locked(int p, int k, std::uint64_t target) {
    std::size_t ci = stitch_index(p);
    auto& chain = stitch_words_[ci];
    auto& starts = stitch_starts_[ci];
    if (k == 1) {
      const Word& s = sturmian_prefix_locked(ci, static_cast<std::int64_t>(target));
      chain.push_back(s.substr(0, target));
      starts.push_back(0);
      return target;
    }
    const Word& base = chain[static_cast<std::size_t>(k - 2)];
    if (base.empty()) {  // predecessor deferred; so are we
      chain.push_back(Word{});
      starts.push_back(-1);
      return target;
    }
    const std::int64_t bl = static_cast<std::int64_t>(base.size());
    const std::int64_t D = std::max<std::int64_t>(1, static_cast<std::int64_t>(target) - bl);
    std::int64_t horizon = std::max<std::int64_t>(4 * (D + bl), 4096);
    while (true) {
      if (horizon > detail::kMaxStitchMaterialize)
        throw std::domain_error("stitch search exceeded the materializable horizon");
      const Word& s = sturmian_prefix_locked(ci, horizon);
      std::vector<std::int64_t> occ;
      std::size_t pos = s.find(base, 0);
      while (pos != Word::npos && static_cast<std::int64_t>(pos) + bl <= horizon) {
        occ.push_back(static_cast<std::int64_t>(pos));
        pos = s.find(base, pos + 1);
      }
      std::int64_t best_len = -1, best_start = -1;
      for (std::size_t a = 0; a < occ.size(); ++a) {
        auto it = std::lower_bound(occ.begin(), occ.end(), occ[a] + D);
        if (it == occ.end()) continue;
        std::int64_t len = *it - occ[a] + bl;
        if (best_len < 0 || len < best_len) {
          best_len = len;
          best_start = occ[a];
        }
      }
      if (best_len >= 0) {
        chain.push_back(s.substr(static_cast<std::size_t>(best_start),
                                 static_cast<std::size_t>(best_len)));
        starts.push_back(best_start);
        return static_cast<std::uint64_t>(best_len);
      }
      horizon *= 2;
    }
  }

  int j_, i_;
  GrowthFunction g_;
  std::uint64_t margin_;
  std::vector<SturmianParams> sturmians_;
  std::vector<std::shared_ptr<RotationCoder>> coders_;

  mutable std::mutex mu_;
  std::vector<std::uint64_t> entries_;
  std::vector<ScheduleEntryRecord> log_;
  std::vector<std::vector<Word>> stitch_words_;        // per stitched slot, by k
  std::vector<std::vector<std::int64_t>> stitch_starts_;
  std::map<std::size_t, Word> prefix_buffers_;
};

// Value wrapper over the shared schedule state.
class ExponentSchedule {
 public:
  ExponentSchedule() = default;
  ExponentSchedule(std::shared_ptr<ScheduleData> data, bool as_runs)
      : data_(std::move(data)), as_runs_(as_runs) {}

  int j() const { return data_->j(); }
  int i() const { return as_runs_ ? 0 : data_->i(); }
  int stitched_count() const { return data_->i(); }
  const GrowthFunction& g() const { return data_->g(); }
  std::uint64_t margin() const { return data_->margin(); }
  std::uint64_t entry(int k, int p) const { return data_->entry(k, p); }
  std::vector<ScheduleEntryRecord> log() const { return data_->log(); }
  ScheduleValidation validate(int k_max) const { return data_->validate(k_max); }
  std::shared_ptr<ScheduleData> data() const { return data_; }

  // The same entries viewed as a plain run schedule (i = 0); this is the
  // comparison family for the stitching complexity identity.
  ExponentSchedule runs_view() const { return ExponentSchedule(data_, true); }

 private:
  std::shared_ptr<ScheduleData> data_;
  bool as_runs_ = false;
};

inline ExponentSchedule make_schedule(int j, int i, GrowthFunction g,
                                      std::uint64_t margin = 1,
                                      std::vector<SturmianParams> sturmians = {}) {
  if (i > 0 && sturmians.empty()) {
    // default stitched targets: golden-ratio Sturmians on fresh symbol pairs
    for (int p = j - i + 1; p <= j; ++p) {
      int base = (j - i) + 2 * (p - (j - i) - 1) + 1;
      SturmianParams sp;
      sp.zero_symbol = static_cast<Symbol>(base);
      sp.one_symbol = static_cast<Symbol>(base + 1);
      sturmians.push_back(sp);
    }
  }
  auto data = std::make_shared<ScheduleData>(j, i, std::move(g), margin, std::move(sturmians));
  return ExponentSchedule(std::move(data), /*as_runs=*/false);
}

// ---------------------------------------------------------------------------
// Block layout shared by the run family and the stitched family.

namespace detail {

class BlockIndex {
 public:
  explicit BlockIndex(std::shared_ptr<ScheduleData> sched) : sched_(std::move(sched)) {}

  // Block t (1-based) covers [start(t), start(t) + len(t)) on the right
  // half-line; returns the block containing position pos >= 0.
  struct Location {
    int t;       // block ordinal
    int k;       // schedule generation (ruler(t))
    std::uint64_t offset;  // position - block start
  };

  Location locate(std::uint64_t pos) {
    std::lock_guard<std::mutex> lock(mu_);
    while (cum_.empty() || cum_.back() <= pos) {
      if (!cum_.empty() && cum_.back() >= kGrowthSat) break;
      int t = static_cast<int>(cum_.size()) + 1;
      std::uint64_t len = sched_->block_len(ruler(static_cast<std::uint64_t>(t)));
      cum_.push_back(sat_add(cum_.empty() ? 0 : cum_.back(), len));
    }
    auto it = std::upper_bound(cum_.begin(), cum_.end(), pos);
    if (it == cum_.end())
      throw std::domain_error("position beyond the representable block layout");
    std::size_t t0 = static_cast<std::size_t>(it - cum_.begin());
    std::uint64_t start = t0 == 0 ? 0 : cum_[t0 - 1];
    int t = static_cast<int>(t0) + 1;
    return Location{t, ruler(static_cast<std::uint64_t>(t)), pos - start};
  }

 private:
  std::shared_ptr<ScheduleData> sched_;
  std::mutex mu_;
  std::vector<std::uint64_t> cum_;
};

// Within block of generation k, maps an offset to (p, offset within run).
inline std::pair<int, std::uint64_t> run_within_block(ScheduleData& sched, int k,
                                                      std::uint64_t off) {
  for (int p = 1; p <= sched.j(); ++p) {
    std::uint64_t len = sched.entry(k, p);
    if (off < len) return {p, off};
    off -= len;
  }
  throw std::logic_error("offset beyond block");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Horizon ceilings for run-structured families.
//
// A window certifies level n only if, for every symbol, some fully visible
// run both reaches length n+1 somewhere (extension by the same symbol) and
// ends inside the window at length >= n (extension by a different symbol).
// Runs longer than twice the window would otherwise survive doubling while
// hiding words.

namespace detail {

struct RunStats {
  // per symbol p (1-based): E = max complete visible run, M = max visible
  // (possibly truncated) run
  std::vector<std::uint64_t> E, M;
  explicit RunStats(int j) : E(static_cast<std::size_t>(j) + 1, 0),
                             M(static_cast<std::size_t>(j) + 1, 0) {}
  void complete_run(int p, std::uint64_t len) {
    E[static_cast<std::size_t>(p)] = std::max(E[static_cast<std::size_t>(p)], len);
    M[static_cast<std::size_t>(p)] = std::max(M[static_cast<std::size_t>(p)], len);
  }
  void truncated_run(int p, std::uint64_t visible) {
    M[static_cast<std::size_t>(p)] = std::max(M[static_cast<std::size_t>(p)], visible);
  }
  std::optional<int> ceiling(int j) const {
    std::uint64_t c = kGrowthSat;
    for (int p = 1; p <= j; ++p) {
      std::uint64_t ep = E[static_cast<std::size_t>(p)];
      std::uint64_t mp = M[static_cast<std::size_t>(p)];
      std::uint64_t cand = std::min(ep, mp == 0 ? 0 : mp - 1);
      c = std::min(c, cand);
    }
    if (c >= kGrowthSat) return std::nullopt;
    return static_cast<int>(std::min<std::uint64_t>(c, 1u << 20));
  }
};

// Walk the block layout across [0, hi], attributing runs (`unit_len(k,p)`
// gives the run length for generation k, symbol p).
template <typename UnitLen>
inline void walk_runs(ScheduleData& sched, std::int64_t hi, RunStats& stats,
                      UnitLen unit_len) {
  std::uint64_t pos = 0;
  for (int t = 1; pos <= static_cast<std::uint64_t>(hi); ++t) {
    int k = ruler(static_cast<std::uint64_t>(t));
    for (int p = 1; p <= sched.j(); ++p) {
      std::uint64_t len = unit_len(k, p);
      std::uint64_t end = sat_add(pos, len);  // one past the run
      if (end <= static_cast<std::uint64_t>(hi)) {
        stats.complete_run(p, len);
      } else {
        stats.truncated_run(p, static_cast<std::uint64_t>(hi) - pos + 1);
        return;
      }
      pos = end;
      if (pos > static_cast<std::uint64_t>(hi)) return;
    }
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// The recurrent two-scale run family: x = j^inf . B_{w_1} B_{w_2} ... with
// B_k = 1^{n_k^1} 2^{n_k^2} ... j^{n_k^j} and the generation subscript read
// off the ruler sequence.

inline Sequence recurrent_sharp_family(const ExponentSchedule& sched) {
  if (sched.i() != 0)
    throw std::domain_error("run family needs an i=0 schedule (use runs_view)");
  auto data = sched.data();
  auto index = std::make_shared<detail::BlockIndex>(data);
  const int j = sched.j();

  Alphabet alpha = Alphabet::integer_range(1, j);
  Provenance prov;
  prov.family = "recurrent-sharp";
  prov.set("j", std::to_string(j));
  prov.set("i", "0");
  prov.set("g", sched.g().name);
  prov.set("margin", std::to_string(sched.margin()));
  for (int p = 1; p <= j; ++p) {
    MinimalSystemInfo ms;
    ms.kind = "periodic";
    ms.cycle = constant_word(static_cast<Symbol>(p), 1);
    ms.label = "fixed(" + Alphabet::default_token(p) + ")";
    Symbol sym = static_cast<Symbol>(p);
    ms.language = [sym](int r) { return std::vector<Word>{constant_word(sym, static_cast<std::size_t>(r))}; };
    prov.minimal_systems.push_back(std::move(ms));
  }
  prov.complete_horizon = [data, j](std::int64_t lo, std::int64_t hi) -> std::optional<int> {
    detail::RunStats stats(j);
    if (lo < 0) {
      stats.complete_run(j, static_cast<std::uint64_t>(-lo));
    }
    if (hi >= 0)
      detail::walk_runs(*data, hi, stats,
                        [&](int k, int p) { return data->entry(k, p); });
    return stats.ceiling(j);
  };

  auto symbol_at = [data, index, j](std::int64_t n) -> Symbol {
    if (n < 0) return static_cast<Symbol>(j);
    auto loc = index->locate(static_cast<std::uint64_t>(n));
    auto [p, off] = detail::run_within_block(*data, loc.k, loc.offset);
    (void)off;
    return static_cast<Symbol>(p);
  };
  auto fill = [data, index, j](std::int64_t lo, std::int64_t hi, Symbol* out) {
    std::int64_t n = lo;
    if (n < 0) {
      std::int64_t upto = std::min<std::int64_t>(hi, -1);
      std::fill(out, out + (upto - n + 1), static_cast<Symbol>(j));
      n = upto + 1;
    }
    while (n <= hi) {
      auto loc = index->locate(static_cast<std::uint64_t>(n));
      auto [p, off] = detail::run_within_block(*data, loc.k, loc.offset);
      std::uint64_t run_len = data->entry(loc.k, p);
      std::int64_t remaining_in_run = static_cast<std::int64_t>(
          std::min<std::uint64_t>(run_len - off, static_cast<std::uint64_t>(hi - n + 1)));
      std::fill(out + (n - lo), out + (n - lo) + remaining_in_run, static_cast<Symbol>(p));
      n += remaining_in_run;
    }
  };
  return Sequence(Sequence::Kind::BiInfinite, alpha, std::move(prov), symbol_at, fill);
}

// ---------------------------------------------------------------------------
// The stitched family: runs of the top i symbols replaced by nested
// Sturmian windows w_k^p, left tail replaced by the suffix limit of w_k^j.

inline Sequence stitched_family(const ExponentSchedule& sched) {
  if (sched.i() < 1) throw std::domain_error("stitched family needs i >= 1");
  auto data = sched.data();
  auto index = std::make_shared<detail::BlockIndex>(data);
  const int j = sched.j();
  const int i = sched.i();

  std::vector<Symbol> syms;
  std::vector<std::string> toks;
  for (int p = 1; p <= j - i; ++p) {
    syms.push_back(static_cast<Symbol>(p));
    toks.push_back(Alphabet::default_token(p));
  }
  for (const auto& sp : data->sturmians()) {
    for (Symbol s : {sp.zero_symbol, sp.one_symbol}) {
      syms.push_back(s);
      toks.push_back(Alphabet::default_token(s));
    }
  }
  Alphabet alpha(std::move(syms), std::move(toks));

  Provenance prov;
  prov.family = "stitched-sharp";
  prov.set("j", std::to_string(j));
  prov.set("i", std::to_string(i));
  prov.set("g", sched.g().name);
  prov.set("margin", std::to_string(sched.margin()));
  for (int p = 1; p <= j - i; ++p) {
    MinimalSystemInfo ms;
    ms.kind = "periodic";
    ms.cycle = constant_word(static_cast<Symbol>(p), 1);
    ms.label = "fixed(" + Alphabet::default_token(p) + ")";
    Symbol sym = static_cast<Symbol>(p);
    ms.language = [sym](int r) { return std::vector<Word>{constant_word(sym, static_cast<std::size_t>(r))}; };
    prov.minimal_systems.push_back(std::move(ms));
  }
  {
    int p = j - i + 1;
    for (const auto& sp : data->sturmians()) {
      auto coder = std::make_shared<RotationCoder>(
          sp.beta, sp.x0 ? *sp.x0 : sp.beta.over(2));
      prov.minimal_systems.push_back(sturmian_system_info(sp, coder));
      (void)p;
      ++p;
    }
  }

  // Horizon: run-lens ceiling over unit lengths, tightened by how deep the
  // largest materialized unit certifies its own Sturmian sublanguage.
  prov.complete_horizon = [data, j, i](std::int64_t lo, std::int64_t hi) -> std::optional<int> {
    detail::RunStats stats(j);
    if (lo < 0) stats.complete_run(j, static_cast<std::uint64_t>(-lo));
    if (hi >= 0)
      detail::walk_runs(*data, hi, stats,
                        [&](int k, int p) { return data->entry(k, p); });
    auto ceil = stats.ceiling(j);
    if (!ceil) return ceil;
    int c = *ceil;
    // Sturmian-internal completeness within the largest complete unit.
    for (int p = j - i + 1; p <= j; ++p) {
      std::uint64_t best = stats.E[static_cast<std::size_t>(p)];
      if (best == 0) return 0;
      // find the largest materialized generation whose unit has that length
      Word unit;
      for (int k = 1;; ++k) {
        std::uint64_t e = data->entry(k, p);
        if (e == best) {
          unit = data->stitch_word(k, p);
          break;
        }
        if (e > best || e >= kGrowthSat) break;
      }
      if (unit.empty()) continue;
      std::size_t scan = std::min<std::size_t>(unit.size(), 8192);
      int h = 0;
      for (int n = 1; n <= c + 1; ++n) {
        std::vector<Word> seen;
        if (scan < static_cast<std::size_t>(n)) break;
        for (std::size_t q = 0; q + static_cast<std::size_t>(n) <= scan; ++q) {
          Word w = unit.substr(q, static_cast<std::size_t>(n));
          if (std::find(seen.begin(), seen.end(), w) == seen.end())
            seen.push_back(std::move(w));
          if (seen.size() == static_cast<std::size_t>(n) + 1) break;
        }
        if (seen.size() == static_cast<std::size_t>(n) + 1)
          h = n;
        else
          break;
      }
      c = std::min(c, h - 1);
    }
    return std::max(c, 0);
  };

  auto symbol_at = [data, index, j, i](std::int64_t n) -> Symbol {
    if (n < 0) return data->tail_symbol(-n);
    auto loc = index->locate(static_cast<std::uint64_t>(n));
    auto [p, off] = detail::run_within_block(*data, loc.k, loc.offset);
    if (p <= j - i) return static_cast<Symbol>(p);
    Word w = data->stitch_word(loc.k, p);
    return static_cast<Symbol>(w[static_cast<std::size_t>(off)]);
  };
  return Sequence(Sequence::Kind::BiInfinite, alpha, std::move(prov), symbol_at);
}

// ---------------------------------------------------------------------------
// The cyclic transitive family x = 0^inf . 1^{n_1} 2^{n_2} ... (j-1)^{n_{j-1}}
// 1^{n_j} ... with single-index exponents growing so g(n_r) clears the sum
// of all earlier exponents.

inline Sequence transitive_family(int j, GrowthFunction g, std::uint64_t margin = 1) {
  if (j < 3) throw std::domain_error("transitive family needs j >= 3");
  struct State {
    std::vector<std::uint64_t> n;      // exponents n_1, n_2, ...
    std::vector<std::uint64_t> cum;    // cumulative end offsets
    GrowthFunction g;
    std::uint64_t margin;
    std::mutex mu;
  };
  auto st = std::make_shared<State>();
  st->g = g;
  st->margin = margin;

  auto ensure_cover = [st](std::uint64_t pos) {
    std::lock_guard<std::mutex> lock(st->mu);
    while (st->cum.empty() || st->cum.back() <= pos) {
      if (!st->cum.empty() && st->cum.back() >= kGrowthSat) break;
      std::uint64_t sum = 0;
      for (auto v : st->n) sum = detail::sat_add(sum, v);
      std::uint64_t prev = st->n.empty() ? 0 : st->n.back();
      std::uint64_t v = std::max(detail::sat_add(prev, st->margin),
                                 st->g.least_n_with(detail::sat_add(sum, st->margin)));
      if (v >= kGrowthSat) v = kGrowthSat;
      st->n.push_back(v);
      st->cum.push_back(detail::sat_add(st->cum.empty() ? 0 : st->cum.back(), v));
    }
  };
  auto run_of = [st, ensure_cover](std::uint64_t pos) {
    ensure_cover(pos);
    std::lock_guard<std::mutex> lock(st->mu);
    auto it = std::upper_bound(st->cum.begin(), st->cum.end(), pos);
    return static_cast<std::size_t>(it - st->cum.begin());  // 0-based run ordinal
  };

  Alphabet alpha = Alphabet::integer_range(0, j);
  Provenance prov;
  prov.family = "transitive-cyclic";
  prov.set("j", std::to_string(j));
  prov.set("g", g.name);
  prov.set("margin", std::to_string(margin));
  for (int p = 0; p < j; ++p) {
    MinimalSystemInfo ms;
    ms.kind = "periodic";
    ms.cycle = constant_word(static_cast<Symbol>(p), 1);
    ms.label = "fixed(" + Alphabet::default_token(p) + ")";
    Symbol sym = static_cast<Symbol>(p);
    ms.language = [sym](int r) { return std::vector<Word>{constant_word(sym, static_cast<std::size_t>(r))}; };
    prov.minimal_systems.push_back(std::move(ms));
  }

  const int cycle = j - 1;
  auto symbol_at = [st, run_of, cycle](std::int64_t n) -> Symbol {
    if (n < 0) return 0;
    std::size_t r = run_of(static_cast<std::uint64_t>(n));
    return static_cast<Symbol>(static_cast<int>(r % static_cast<std::size_t>(cycle)) + 1);
  };
  return Sequence(Sequence::Kind::BiInfinite, alpha, std::move(prov), symbol_at);
}

// ---------------------------------------------------------------------------
// Non-recurrent junction examples over {0,1}.

enum class NonrecurrentCase { OneInfinite, TwoInfinite };  // i=1 / i=2

inline RealSpec interval_beta(int N, int sqrt_arg) {
  // 1/(N+1) + (1/sqrt(sqrt_arg)) * (1/N - 1/(N+1)), inside (1/(N+1), 1/N)
  return RealSpec::rational(1, N + 1).plus(RealSpec::inv_sqrt(sqrt_arg).over(N * (N + 1)));
}

inline void require_in_gap_interval(const RealSpec& beta, int N) {
  auto b = beta.bits(96);
  auto lo = RealSpec::rational(1, N + 1).bits(96);
  auto hi = RealSpec::rational(1, N).bits(96);
  if (!(lo < b && b < hi))
    throw std::domain_error("beta must lie strictly between 1/(N+1) and 1/N");
}

inline Sequence nonrecurrent_example(NonrecurrentCase which, int N,
                                     std::optional<RealSpec> beta1 = std::nullopt,
                                     std::optional<RealSpec> beta2 = std::nullopt,
                                     std::optional<RealSpec> x0 = std::nullopt) {
  if (N <= 3) throw std::domain_error("nonrecurrent examples need N > 3");
  Alphabet alpha = Alphabet::binary();

  if (which == NonrecurrentCase::OneInfinite) {
    RealSpec beta = beta1 ? *beta1 : interval_beta(N, 2);
    require_in_gap_interval(beta, N);
    // The default seed sits just inside the coding interval, next to the
    // orbit of the interval endpoint: the junction continuations then agree
    // with the rotation-forced ones, which keeps the right-special census
    // at two words per level.  A generic seed (say beta/2) sporadically
    // creates a third right-special word at the junction.
    RealSpec seed = x0 ? *x0 : beta.times((1 << 20), (1 << 20) + 1);
    auto coder = std::make_shared<RotationCoder>(beta, seed);
    Provenance prov;
    prov.family = "nonrecurrent-i1";
    prov.set("N", std::to_string(N));
    prov.set("beta", beta.description);
    prov.set("x0", seed.description);
    {
      MinimalSystemInfo ms;
      ms.kind = "periodic";
      ms.cycle = constant_word(0, 1);
      ms.label = "fixed(0)";
      ms.language = [](int r) { return std::vector<Word>{constant_word(0, static_cast<std::size_t>(r))}; };
      prov.minimal_systems.push_back(std::move(ms));
    }
    {
      SturmianParams sp;
      sp.beta = beta;
      prov.minimal_systems.push_back(sturmian_system_info(sp, coder));
    }
    return Sequence(Sequence::Kind::BiInfinite, alpha, std::move(prov),
                    [coder](std::int64_t n) -> Symbol {
                      if (n < 0) return 0;
                      return static_cast<Symbol>(coder->code(n));
                    });
  }

  RealSpec b1 = beta1 ? *beta1 : interval_beta(N, 2);
  RealSpec b2 = beta2 ? *beta2 : interval_beta(N, 3);
  require_in_gap_interval(b1, N);
  require_in_gap_interval(b2, N);
  if (b1.bits(96) == b2.bits(96))
    throw std::domain_error("the two rotation numbers must be distinct");
  // Left part ends in 1 at index -1; right part begins with 1 at index 0.
  auto left = std::make_shared<RotationCoder>(b1, b1.times(3, 2));
  auto right = std::make_shared<RotationCoder>(b2, b2.over(2));
  if (left->code(-1) != 1) throw std::logic_error("left junction symbol is not 1");
  if (right->code(0) != 1) throw std::logic_error("right junction symbol is not 1");

  Provenance prov;
  prov.family = "nonrecurrent-i2";
  prov.set("N", std::to_string(N));
  prov.set("beta1", b1.description);
  prov.set("beta2", b2.description);
  {
    SturmianParams sp;
    sp.beta = b1;
    sp.x0 = b1.times(3, 2);
    prov.minimal_systems.push_back(sturmian_system_info(sp, left));
  }
  {
    SturmianParams sp;
    sp.beta = b2;
    prov.minimal_systems.push_back(sturmian_system_info(sp, right));
  }
  return Sequence(Sequence::Kind::BiInfinite, alpha, std::move(prov),
                  [left, right](std::int64_t n) -> Symbol {
                    return static_cast<Symbol>(n < 0 ? left->code(n) : right->code(n));
                  });
}

// ---------------------------------------------------------------------------
// The staircase point 0^inf . 0 11 000 1111 00000 ... (block m has length m
// and symbol (m+1) mod 2).

inline Sequence staircase() {
  Alphabet alpha = Alphabet::binary();
  Provenance prov;
  prov.family = "staircase";
  for (int s = 0; s <= 1; ++s) {
    MinimalSystemInfo ms;
    ms.kind = "periodic";
    ms.cycle = constant_word(static_cast<Symbol>(s), 1);
    ms.label = "fixed(" + std::to_string(s) + ")";
    Symbol sym = static_cast<Symbol>(s);
    ms.language = [sym](int r) { return std::vector<Word>{constant_word(sym, static_cast<std::size_t>(r))}; };
    prov.minimal_systems.push_back(std::move(ms));
  }

  auto block_of = [](std::int64_t pos) -> std::int64_t {
    // largest m with m(m-1)/2 <= pos
    std::int64_t m = static_cast<std::int64_t>((std::sqrt(8.0 * static_cast<double>(pos) + 1.0) + 1.0) / 2.0);
    while (m * (m - 1) / 2 > pos) --m;
    while ((m + 1) * m / 2 <= pos) ++m;
    return m;
  };
  auto symbol_at = [block_of](std::int64_t n) -> Symbol {
    if (n < 0) return 0;
    return static_cast<Symbol>((block_of(n) + 1) & 1);
  };
  auto fill = [block_of](std::int64_t lo, std::int64_t hi, Symbol* out) {
    std::int64_t n = lo;
    if (n < 0) {
      std::int64_t upto = std::min<std::int64_t>(hi, -1);
      std::fill(out, out + (upto - n + 1), static_cast<Symbol>(0));
      n = upto + 1;
    }
    while (n <= hi) {
      std::int64_t m = block_of(n);
      std::int64_t end = std::min<std::int64_t>(hi, m * (m + 1) / 2 - 1);
      std::fill(out + (n - lo), out + (end - lo) + 1, static_cast<Symbol>((m + 1) & 1));
      n = end + 1;
    }
  };
  return Sequence(Sequence::Kind::BiInfinite, alpha, std::move(prov), symbol_at, fill);
}

// ---------------------------------------------------------------------------
// Periodic orbit of a finite cycle (handy for the Morse-Hedlund tests).

inline Sequence periodic_sequence(const Word& cycle) {
  if (cycle.empty()) throw std::domain_error("cycle must be nonempty");
  std::vector<Symbol> syms;
  for (unsigned char c : cycle)
    if (std::find(syms.begin(), syms.end(), static_cast<Symbol>(c)) == syms.end())
      syms.push_back(static_cast<Symbol>(c));
  std::sort(syms.begin(), syms.end());
  std::vector<std::string> toks;
  for (auto s : syms) toks.push_back(Alphabet::default_token(s));
  Alphabet alpha(syms, toks);

  Provenance prov;
  prov.family = "periodic";
  prov.set("cycle", alpha.render(cycle));
  {
    MinimalSystemInfo ms;
    ms.kind = "periodic";
    ms.cycle = cycle;
    ms.label = "periodic(" + alpha.render(cycle) + ")";
    Word cyc = cycle;
    ms.language = [cyc](int r) {
      std::vector<Word> out;
      for (std::size_t rot = 0; rot < cyc.size(); ++rot) {
        Word w;
        for (int t = 0; t < r; ++t)
          w.push_back(cyc[(rot + static_cast<std::size_t>(t)) % cyc.size()]);
        if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(w);
      }
      std::sort(out.begin(), out.end());
      return out;
    };
    prov.minimal_systems.push_back(std::move(ms));
  }
  const std::int64_t L = static_cast<std::int64_t>(cycle.size());
  Word cyc = cycle;
  return Sequence(Sequence::Kind::BiInfinite, alpha, std::move(prov),
                  [cyc, L](std::int64_t n) -> Symbol {
                    std::int64_t r = ((n % L) + L) % L;
                    return static_cast<Symbol>(cyc[static_cast<std::size_t>(r)]);
                  });
}

}  // namespace shiftlab
