#pragma once

// Core vocabulary for the workbench: symbols, words, alphabets.
//
// A symbol is a small integer id (at most 255 distinct symbols per
// alphabet).  A word is a byte string whose bytes are symbol ids, so the
// standard string machinery (hashing, substring, lexicographic compare)
// works directly on words.  An Alphabet fixes the ordered symbol set and
// the printable token for each symbol.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace shiftlab {

using Symbol = std::uint8_t;

// Finite symbol string; bytes are symbol ids, not printable characters.
using Word = std::string;

class Alphabet {
 public:
  Alphabet() = default;

  // Symbols listed in canonical order; token[i] renders symbols[i].
  Alphabet(std::vector<Symbol> symbols, std::vector<std::string> tokens) {
    if (symbols.empty() || symbols.size() > 255)
      throw std::domain_error("alphabet size must be in [1,255]");
    if (symbols.size() != tokens.size())
      throw std::domain_error("alphabet: one token per symbol required");
    symbols_ = std::move(symbols);
    tokens_ = std::move(tokens);
    index_.fill(-1);
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      if (index_[symbols_[i]] >= 0)
        throw std::domain_error("alphabet symbols must be distinct");
      index_[symbols_[i]] = static_cast<int>(i);
    }
  }

  // Alphabet {base, base+1, ..., base+count-1} with decimal-ish tokens.
  static Alphabet integer_range(int base, int count) {
    std::vector<Symbol> syms;
    std::vector<std::string> toks;
    for (int v = base; v < base + count; ++v) {
      syms.push_back(static_cast<Symbol>(v));
      toks.push_back(default_token(v));
    }
    return Alphabet(std::move(syms), std::move(toks));
  }

  static Alphabet binary() { return integer_range(0, 2); }

  // Default rendering: single char 0-9 then a-z, else "s<NN>".
  static std::string default_token(int v) {
    if (v >= 0 && v <= 9) return std::string(1, static_cast<char>('0' + v));
    if (v >= 10 && v <= 35) return std::string(1, static_cast<char>('a' + v - 10));
    return "s" + std::to_string(v);
  }

  std::size_t size() const { return symbols_.size(); }
  const std::vector<Symbol>& symbols() const { return symbols_; }

  bool contains(Symbol s) const { return index_[s] >= 0; }

  // Position of s in the canonical ordering.
  int rank(Symbol s) const {
    int r = index_[s];
    if (r < 0) throw std::domain_error("symbol not in alphabet");
    return r;
  }

  const std::string& token(Symbol s) const { return tokens_[static_cast<std::size_t>(rank(s))]; }

  std::optional<Symbol> find_token(std::string_view tok) const {
    for (std::size_t i = 0; i < tokens_.size(); ++i)
      if (tokens_[i] == tok) return symbols_[i];
    return std::nullopt;
  }

  bool all_tokens_single_char() const {
    for (const auto& t : tokens_)
      if (t.size() != 1) return false;
    return true;
  }

  bool valid_word(const Word& w) const {
    for (unsigned char c : w)
      if (!contains(static_cast<Symbol>(c))) return false;
    return true;
  }

  // Union keeping this alphabet's order first, then the other's new symbols.
  Alphabet merged_with(const Alphabet& other) const {
    std::vector<Symbol> syms = symbols_;
    std::vector<std::string> toks = tokens_;
    for (std::size_t i = 0; i < other.symbols_.size(); ++i) {
      if (!contains(other.symbols_[i])) {
        syms.push_back(other.symbols_[i]);
        toks.push_back(other.tokens_[i]);
      }
    }
    return Alphabet(std::move(syms), std::move(toks));
  }

  bool operator==(const Alphabet& o) const {
    return symbols_ == o.symbols_ && tokens_ == o.tokens_;
  }

  std::string render(const Word& w, const char* sep = "") const {
    std::string out;
    bool first = true;
    for (unsigned char c : w) {
      if (!first) out += sep;
      out += token(static_cast<Symbol>(c));
      first = false;
    }
    return out;
  }

 private:
  std::vector<Symbol> symbols_;
  std::vector<std::string> tokens_;
  std::array<int, 256> index_{};
};

inline Word word_of(std::initializer_list<int> syms) {
  Word w;
  for (int s : syms) w.push_back(static_cast<char>(s));
  return w;
}

inline Word constant_word(Symbol s, std::size_t n) {
  return Word(n, static_cast<char>(s));
}

}  // namespace shiftlab
