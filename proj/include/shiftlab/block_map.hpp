#pragma once

// Sliding block codes: each output symbol is a total function of the
// width-(m+a+1) input window.  Includes composition, the two-stage factor
// map that collapses minimal subsystems to fresh fixed points behind a
// marker symbol, and the binary collapse onto {in M, not in M}.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "shiftlab/core.hpp"
#include "shiftlab/sequence.hpp"

namespace shiftlab {

class BlockMap {
 public:
  BlockMap() = default;
  BlockMap(int memory, int anticipation, Alphabet source, Alphabet target,
           std::function<Symbol(std::span<const Symbol>)> rule, std::string label)
      : memory_(memory),
        anticipation_(anticipation),
        source_(std::move(source)),
        target_(std::move(target)),
        rule_(std::move(rule)),
        label_(std::move(label)) {
    if (memory_ < 0 || anticipation_ < 0)
      throw std::domain_error("memory and anticipation must be nonnegative");
  }

  int memory() const { return memory_; }
  int anticipation() const { return anticipation_; }
  int width() const { return memory_ + anticipation_ + 1; }
  const Alphabet& source() const { return source_; }
  const Alphabet& target() const { return target_; }
  const std::string& label() const { return label_; }

  // Minimal systems of the image, when the construction knows them.
  const std::vector<MinimalSystemInfo>& image_minimal_systems() const {
    return image_minimal_systems_;
  }
  void set_image_minimal_systems(std::vector<MinimalSystemInfo> ms) {
    image_minimal_systems_ = std::move(ms);
  }

  Symbol apply_window(std::span<const Symbol> w) const {
    if (static_cast<int>(w.size()) != width())
      throw std::domain_error("window width mismatch");
    return rule_(w);
  }

  static BlockMap identity(const Alphabet& alpha) {
    return BlockMap(0, 0, alpha, alpha,
                    [](std::span<const Symbol> w) { return w[0]; }, "identity");
  }

  static BlockMap compose(const BlockMap& g, const BlockMap& f) {
    if (!(f.target() == g.source()))
      throw std::domain_error("compose: inner target must match outer source");
    int m = f.memory() + g.memory();
    int a = f.anticipation() + g.anticipation();
    BlockMap inner = f, outer = g;
    auto rule = [inner, outer](std::span<const Symbol> w) {
      // slide the inner map across w, then apply the outer map once
      std::vector<Symbol> mid(static_cast<std::size_t>(outer.width()));
      for (int q = 0; q < outer.width(); ++q)
        mid[static_cast<std::size_t>(q)] = inner.apply_window(
            w.subspan(static_cast<std::size_t>(q), static_cast<std::size_t>(inner.width())));
      return outer.apply_window(mid);
    };
    return BlockMap(m, a, f.source(), g.target(), rule,
                    g.label() + " . " + f.label());
  }

 private:
  int memory_ = 0;
  int anticipation_ = 0;
  Alphabet source_, target_;
  std::function<Symbol(std::span<const Symbol>)> rule_;
  std::string label_;
  std::vector<MinimalSystemInfo> image_minimal_systems_;
};

// |w| - m - a output symbols read off by sliding the rule.
inline Word apply_to_word(const BlockMap& f, const Word& w) {
  if (static_cast<int>(w.size()) < f.width())
    throw std::domain_error("word shorter than the map width");
  Word out;
  out.reserve(w.size() - static_cast<std::size_t>(f.width()) + 1);
  const Symbol* data = reinterpret_cast<const Symbol*>(w.data());
  for (std::size_t q = 0; q + static_cast<std::size_t>(f.width()) <= w.size(); ++q)
    out.push_back(static_cast<char>(
        f.apply_window(std::span<const Symbol>(data + q, static_cast<std::size_t>(f.width())))));
  return out;
}

// result(i) = rule(seq[i-m .. i+a]).
inline Sequence apply_to_sequence(const BlockMap& f, const Sequence& seq) {
  if (!(seq.alphabet() == f.source()))
    throw std::domain_error("sequence alphabet does not match the map source");
  if (seq.kind() == Sequence::Kind::RightInfinite && f.memory() != 0)
    throw std::domain_error("right-infinite input needs a memory-zero map");

  Provenance prov;
  prov.family = "image";
  prov.set("map", f.label());
  prov.set("source_family", seq.provenance().family);
  for (const auto& [k, v] : seq.provenance().params) prov.set("source_" + k, v);
  prov.minimal_systems = f.image_minimal_systems();
  prov.transitivity_asserted = seq.provenance().transitivity_asserted;
  if (seq.provenance().complete_horizon) {
    auto src = seq.provenance().complete_horizon;
    int m = f.memory(), a = f.anticipation(), w = f.width();
    prov.complete_horizon = [src, m, a, w](std::int64_t lo,
                                           std::int64_t hi) -> std::optional<int> {
      auto h = src(lo - m, hi + a);
      if (!h) return std::nullopt;
      return std::max(0, *h - (w - 1));
    };
  }

  BlockMap map = f;
  Sequence source = seq;
  auto at = [map, source](std::int64_t i) {
    std::vector<Symbol> buf(static_cast<std::size_t>(map.width()));
    source.fill(i - map.memory(), i + map.anticipation(), buf.data());
    return map.apply_window(std::span<const Symbol>(buf.data(), buf.size()));
  };
  auto fill = [map, source](std::int64_t lo, std::int64_t hi, Symbol* out) {
    std::vector<Symbol> buf(static_cast<std::size_t>(hi - lo + map.width()));
    source.fill(lo - map.memory(), hi + map.anticipation(), buf.data());
    for (std::int64_t i = lo; i <= hi; ++i)
      out[i - lo] = map.apply_window(std::span<const Symbol>(
          buf.data() + (i - lo), static_cast<std::size_t>(map.width())));
  };
  return Sequence(seq.kind(), f.target(), std::move(prov), at, fill);
}

namespace detail {

inline void require_disjoint_same_length(const std::vector<std::vector<Word>>& langs,
                                         int r) {
  for (const auto& lang : langs) {
    if (lang.empty()) throw std::domain_error("empty minimal language");
    for (const auto& w : lang)
      if (static_cast<int>(w.size()) != r)
        throw std::domain_error("minimal language word of wrong length");
  }
  for (std::size_t a = 0; a < langs.size(); ++a)
    for (std::size_t b = a + 1; b < langs.size(); ++b)
      for (const auto& w : langs[a])
        for (const auto& v : langs[b])
          if (w == v)
            throw std::domain_error("minimal languages are not pairwise disjoint");
}

}  // namespace detail

struct PiMap {
  BlockMap phi;        // r-block: window in L_r(M_p) -> a_p, else first symbol
  BlockMap psi;        // 2-block: marker b at the a_p boundaries
  BlockMap pi;         // psi . phi
  int r = 0;
  std::vector<Symbol> a_symbols;  // a_1..a_j
  Symbol b_symbol = 0;
};

// The two-stage factor map built from pairwise disjoint r-word languages of
// the minimal subsystems.  Fresh symbols a_1..a_j and the marker b extend
// the source alphabet.
inline PiMap build_pi(const std::vector<std::vector<Word>>& minimal_languages, int r,
                      const Alphabet& source) {
  if (minimal_languages.empty()) throw std::domain_error("no minimal languages given");
  detail::require_disjoint_same_length(minimal_languages, r);
  const int j = static_cast<int>(minimal_languages.size());

  int max_sym = 0;
  for (Symbol s : source.symbols()) max_sym = std::max(max_sym, static_cast<int>(s));
  if (max_sym + j + 1 > 255) throw std::domain_error("no room for fresh symbols");

  PiMap out;
  out.r = r;
  for (int p = 1; p <= j; ++p)
    out.a_symbols.push_back(static_cast<Symbol>(max_sym + p));
  out.b_symbol = static_cast<Symbol>(max_sym + j + 1);

  std::vector<Symbol> mid_syms = source.symbols();
  std::vector<std::string> mid_toks;
  for (Symbol s : source.symbols()) mid_toks.push_back(source.token(s));
  for (int p = 1; p <= j; ++p) {
    mid_syms.push_back(out.a_symbols[static_cast<std::size_t>(p - 1)]);
    mid_toks.push_back("a" + std::to_string(p));
  }
  Alphabet mid(mid_syms, mid_toks);
  std::vector<Symbol> tgt_syms = mid_syms;
  std::vector<std::string> tgt_toks = mid_toks;
  tgt_syms.push_back(out.b_symbol);
  tgt_toks.push_back("b");
  Alphabet target(tgt_syms, tgt_toks);

  // phi: sorted language copies for binary search
  auto langs = minimal_languages;
  for (auto& l : langs) std::sort(l.begin(), l.end());
  auto a_syms = out.a_symbols;
  auto phi_rule = [langs, a_syms](std::span<const Symbol> w) -> Symbol {
    Word key(reinterpret_cast<const char*>(w.data()), w.size());
    for (std::size_t p = 0; p < langs.size(); ++p) {
      if (std::binary_search(langs[p].begin(), langs[p].end(), key))
        return a_syms[p];
    }
    return w[0];
  };
  out.phi = BlockMap(0, r - 1, source, mid, phi_rule, "phi");

  Symbol b = out.b_symbol;
  auto is_a = [a_syms](Symbol s) {
    return std::find(a_syms.begin(), a_syms.end(), s) != a_syms.end();
  };
  auto psi_rule = [is_a, b](std::span<const Symbol> w) -> Symbol {
    if ((is_a(w[0]) && w[1] != w[0]) || (is_a(w[1]) && w[0] != w[1])) return b;
    return w[0];
  };
  out.psi = BlockMap(0, 1, mid, target, psi_rule, "psi");

  out.pi = BlockMap::compose(out.psi, out.phi);

  std::vector<MinimalSystemInfo> image_ms;
  for (int p = 1; p <= j; ++p) {
    MinimalSystemInfo ms;
    ms.kind = "periodic";
    ms.cycle = constant_word(out.a_symbols[static_cast<std::size_t>(p - 1)], 1);
    ms.label = "fixed(a" + std::to_string(p) + ")";
    Symbol sym = out.a_symbols[static_cast<std::size_t>(p - 1)];
    ms.language = [sym](int rr) {
      return std::vector<Word>{constant_word(sym, static_cast<std::size_t>(rr))};
    };
    image_ms.push_back(std::move(ms));
  }
  out.pi.set_image_minimal_systems(image_ms);
  out.phi.set_image_minimal_systems({});
  return out;
}

// Smallest r at which the analytic minimal languages become pairwise
// disjoint, searched incrementally.
inline int smallest_disjoint_r(const std::vector<MinimalSystemInfo>& systems,
                               int r_cap = 64) {
  if (systems.size() < 1) throw std::domain_error("no minimal systems");
  for (int r = 1; r <= r_cap; ++r) {
    std::vector<std::vector<Word>> langs;
    for (const auto& ms : systems) langs.push_back(ms.language(r));
    try {
      detail::require_disjoint_same_length(langs, r);
      return r;
    } catch (const std::domain_error&) {
      continue;
    }
  }
  throw std::domain_error("no disjoint r found within the search cap");
}

// Convenience: build the two-stage map for a generated family from its
// analytically known minimal systems.
inline PiMap build_pi_for(const Sequence& seq, int r_cap = 64) {
  const auto& systems = seq.provenance().minimal_systems;
  int r = smallest_disjoint_r(systems, r_cap);
  std::vector<std::vector<Word>> langs;
  for (const auto& ms : systems) langs.push_back(ms.language(r));
  return build_pi(langs, r, seq.alphabet());
}

// r-block collapse: 0 when the window lies in L_r(M), else 1.
inline BlockMap build_collapse(const std::vector<Word>& minimal_language, int r,
                               const Alphabet& source) {
  if (minimal_language.empty()) throw std::domain_error("empty minimal language");
  for (const auto& w : minimal_language)
    if (static_cast<int>(w.size()) != r)
      throw std::domain_error("minimal language word of wrong length");
  // the image must not be a single fixed point: L_r(M) != all r-words
  double all = std::pow(static_cast<double>(source.size()), r);
  if (all <= 1e18 && static_cast<double>(minimal_language.size()) >= all)
    throw std::domain_error("collapse needs L_r(M) to be a proper subset");

  auto lang = minimal_language;
  std::sort(lang.begin(), lang.end());
  auto rule = [lang](std::span<const Symbol> w) -> Symbol {
    Word key(reinterpret_cast<const char*>(w.data()), w.size());
    return std::binary_search(lang.begin(), lang.end(), key) ? 0 : 1;
  };
  BlockMap map(0, r - 1, source, Alphabet::binary(), rule, "collapse");
  MinimalSystemInfo ms;
  ms.kind = "periodic";
  ms.cycle = constant_word(0, 1);
  ms.label = "fixed(0)";
  ms.language = [](int rr) {
    return std::vector<Word>{constant_word(0, static_cast<std::size_t>(rr))};
  };
  map.set_image_minimal_systems({ms});
  return map;
}

// Custom rule given as an explicit window -> symbol table (total on the
// windows it will meet; missing windows fall back to the centre-first
// symbol, mirroring the "otherwise" branches of the named maps).
inline BlockMap block_map_from_table(int memory, int anticipation, Alphabet source,
                                     Alphabet target,
                                     std::vector<std::pair<Word, Symbol>> rules,
                                     std::string label = "custom") {
  int width = memory + anticipation + 1;
  for (const auto& [w, s] : rules) {
    if (static_cast<int>(w.size()) != width)
      throw std::domain_error("rule window of wrong width");
    if (!target.contains(s)) throw std::domain_error("rule output not in target");
  }
  std::sort(rules.begin(), rules.end());
  auto rule = [rules](std::span<const Symbol> w) -> Symbol {
    Word key(reinterpret_cast<const char*>(w.data()), w.size());
    auto it = std::lower_bound(rules.begin(), rules.end(), key,
                               [](const auto& a, const Word& b) { return a.first < b; });
    if (it != rules.end() && it->first == key) return it->second;
    return w[0];
  };
  return BlockMap(memory, anticipation, std::move(source), std::move(target), rule,
                  std::move(label));
}

}  // namespace shiftlab
