#pragma once

// Symbolic sequences: lazily evaluated one-sided or bi-infinite symbol
// streams with provenance describing how they were constructed.  All
// sequences are immutable after construction; symbol queries are pure and
// safe from concurrent threads.

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <utility>

#include "shiftlab/core.hpp"

namespace shiftlab {

// Analytic description of one minimal subsystem of a generated family.
// `language(r)` enumerates the r-words of the subsystem without touching
// any window of the ambient sequence.
struct MinimalSystemInfo {
  std::string kind;   // "periodic" or "sturmian"
  Word cycle;         // periodic case: primitive cycle (e.g. one symbol)
  std::string label;
  std::function<std::vector<Word>(int)> language;
};

struct Provenance {
  std::string family = "unspecified";
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<MinimalSystemInfo> minimal_systems;
  // External input: the transitivity of the orbit closure is a user
  // assertion, not something the tool verified.
  bool transitivity_asserted = false;
  // Largest n for which the window [lo,hi] provably contains every n-word
  // of the sequence (families with very long runs supply this; doubling
  // stability alone cannot see past a run longer than twice the window).
  std::function<std::optional<int>(std::int64_t lo, std::int64_t hi)> complete_horizon;

  void set(const std::string& key, const std::string& value) {
    params.emplace_back(key, value);
  }
  std::optional<std::string> get(const std::string& key) const {
    for (const auto& [k, v] : params)
      if (k == key) return v;
    return std::nullopt;
  }
};

class Sequence {
 public:
  enum class Kind { BiInfinite, RightInfinite };

  Sequence() = default;

  Sequence(Kind kind, Alphabet alphabet, Provenance prov,
           std::function<Symbol(std::int64_t)> at,
           std::function<void(std::int64_t, std::int64_t, Symbol*)> bulk_fill = nullptr)
      : impl_(std::make_shared<Impl>(Impl{kind, std::move(alphabet), std::move(prov),
                                          std::move(at), std::move(bulk_fill),
                                          std::nullopt})) {}

  bool valid() const { return impl_ != nullptr; }
  Kind kind() const { return impl_->kind; }
  const Alphabet& alphabet() const { return impl_->alphabet; }
  const Provenance& provenance() const { return impl_->prov; }

  // Finite samples (ingested files) only cover a declared index range.
  std::optional<std::pair<std::int64_t, std::int64_t>> support() const {
    return impl_->support;
  }

  std::int64_t min_index() const {
    if (impl_->support) return impl_->support->first;
    return impl_->kind == Kind::RightInfinite
               ? 0
               : std::numeric_limits<std::int64_t>::min() / 4;
  }
  std::int64_t max_index() const {
    if (impl_->support) return impl_->support->second;
    return std::numeric_limits<std::int64_t>::max() / 4;
  }

  Symbol at(std::int64_t i) const {
    check_index(i);
    return impl_->at(i);
  }

  // Inclusive range [lo, hi] into out (hi-lo+1 symbols).
  void fill(std::int64_t lo, std::int64_t hi, Symbol* out) const {
    if (lo > hi) throw std::domain_error("fill: lo > hi");
    check_index(lo);
    check_index(hi);
    if (impl_->bulk_fill) {
      impl_->bulk_fill(lo, hi, out);
    } else {
      for (std::int64_t i = lo; i <= hi; ++i) out[i - lo] = impl_->at(i);
    }
  }

  Sequence with_support(std::int64_t lo, std::int64_t hi) const {
    Sequence s = *this;
    auto impl = std::make_shared<Impl>(*impl_);
    impl->support = std::make_pair(lo, hi);
    s.impl_ = std::move(impl);
    return s;
  }

 private:
  struct Impl {
    Kind kind;
    Alphabet alphabet;
    Provenance prov;
    std::function<Symbol(std::int64_t)> at;
    std::function<void(std::int64_t, std::int64_t, Symbol*)> bulk_fill;
    std::optional<std::pair<std::int64_t, std::int64_t>> support;
  };

  void check_index(std::int64_t i) const {
    if (!impl_) throw std::domain_error("empty sequence");
    if (impl_->kind == Kind::RightInfinite && i < 0)
      throw std::domain_error("negative index into right-infinite sequence");
    if (impl_->support && (i < impl_->support->first || i > impl_->support->second))
      throw std::domain_error("index outside the declared sample range");
  }

  std::shared_ptr<const Impl> impl_;
};

// sigma^k: result(i) = seq(i + k).
inline Sequence shift(const Sequence& seq, std::int64_t k) {
  if (seq.kind() == Sequence::Kind::RightInfinite && k < 0)
    throw std::domain_error("negative shift of a right-infinite sequence");
  Provenance prov = seq.provenance();
  prov.set("shifted_by", std::to_string(k));
  auto support = seq.support();
  Sequence out(
      seq.kind(), seq.alphabet(), std::move(prov),
      [seq, k](std::int64_t i) { return seq.at(i + k); },
      [seq, k](std::int64_t lo, std::int64_t hi, Symbol* buf) {
        seq.fill(lo + k, hi + k, buf);
      });
  if (support) out = out.with_support(support->first - k, support->second - k);
  return out;
}

// The word seq[lo..hi], inclusive.
inline Word window(const Sequence& seq, std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw std::domain_error("window: lo > hi");
  Word w(static_cast<std::size_t>(hi - lo + 1), '\0');
  seq.fill(lo, hi, reinterpret_cast<Symbol*>(w.data()));
  return w;
}

enum class Direction { Left, Right };

struct EventualPeriod {
  std::int64_t period = 0;
  std::int64_t onset = 0;  // N: all indices beyond N (in the direction) repeat
};

// Looks for (p, N) with p, N <= horizon/2 such that the tail beyond N in
// the given direction is p-periodic across every index tested inside the
// horizon.  To count, the mismatch-free stretch must be at least twice the
// claimed scale N + p; otherwise a sparse-mismatch aperiodic sequence
// could sneak a large period through the tail.  Absence of a result is
// NOT a proof of aperiodicity.
inline std::optional<EventualPeriod> detect_eventual_periodicity(
    const Sequence& seq, Direction dir, std::int64_t horizon) {
  if (horizon < 2) throw std::domain_error("horizon must be at least 2");
  if (dir == Direction::Left && seq.kind() != Sequence::Kind::BiInfinite)
    throw std::domain_error("left periodicity needs a bi-infinite sequence");

  const std::int64_t half = horizon / 2;
  std::vector<Symbol> buf(static_cast<std::size_t>(horizon) + 1);
  if (dir == Direction::Right) {
    seq.fill(0, horizon, buf.data());
  } else {
    seq.fill(-horizon, 0, buf.data());  // buf[t] = x_{t - horizon}
  }

  for (std::int64_t p = 1; p <= half; ++p) {
    std::int64_t onset = 0;
    if (dir == Direction::Right) {
      // Need x_i = x_{i+p} for all i > N; a mismatch at i forces N >= i.
      for (std::int64_t i = 0; i + p <= horizon; ++i)
        if (buf[static_cast<std::size_t>(i)] != buf[static_cast<std::size_t>(i + p)])
          onset = std::max(onset, i);
    } else {
      // buf[t] = x_{t-horizon}.  Need x_i = x_{i-p} for all i < -N; a
      // mismatch at i forces N >= -i.
      for (std::int64_t i = -1; i - p >= -horizon; --i)
        if (buf[static_cast<std::size_t>(i + horizon)] !=
            buf[static_cast<std::size_t>(i - p + horizon)])
          onset = std::max(onset, -i);
    }
    std::int64_t verified = horizon - p - onset;
    if (onset <= half && verified >= 2 * (onset + p)) return EventualPeriod{p, onset};
  }
  return std::nullopt;
}

}  // namespace shiftlab
