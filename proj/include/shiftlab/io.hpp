#pragma once

// File formats: the sequence text format (header + symbol tokens), table
// and report exports, and atomic writes so reruns produce byte-identical
// bundles.
//
// Sequence file layout:
//   #alphabet: <token> <token> ...
//   #kind: bi-infinite            (optional; default right-infinite)
//   #origin: <O>                  (optional; first data symbol has index -O)
//   data as one token per line, or one line of single-character tokens

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "shiftlab/core.hpp"
#include "shiftlab/language.hpp"
#include "shiftlab/sequence.hpp"

namespace shiftlab {

using json = nlohmann::json;

inline void write_file_atomic(const std::filesystem::path& path, const std::string& data) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << data;
  }
  std::filesystem::rename(tmp, path);
}

inline std::string sequence_file_text(const Sequence& seq, std::int64_t lo,
                                      std::int64_t hi) {
  std::ostringstream out;
  out << "#alphabet:";
  for (Symbol s : seq.alphabet().symbols()) out << ' ' << seq.alphabet().token(s);
  out << '\n';
  if (lo < 0) {
    out << "#kind: bi-infinite\n";
    out << "#origin: " << -lo << '\n';
  }
  std::vector<Symbol> buf(static_cast<std::size_t>(hi - lo + 1));
  seq.fill(lo, hi, buf.data());
  if (seq.alphabet().all_tokens_single_char()) {
    std::string line;
    line.reserve(buf.size());
    for (Symbol s : buf) line += seq.alphabet().token(s);
    out << line << '\n';
  } else {
    for (Symbol s : buf) out << seq.alphabet().token(s) << '\n';
  }
  return out.str();
}

inline void write_sequence_file(const std::filesystem::path& path, const Sequence& seq,
                                std::int64_t lo, std::int64_t hi) {
  write_file_atomic(path, sequence_file_text(seq, lo, hi));
}

// Reads a sequence sample; the result carries finite support and flags its
// transitivity as a user assertion.
inline Sequence read_sequence_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  std::vector<std::string> tokens;
  bool bi_infinite = false;
  std::int64_t origin = 0;
  std::vector<Symbol> data;
  std::optional<Alphabet> alpha;

  auto parse_alphabet = [&](const std::string& rest) {
    std::istringstream ss(rest);
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
    if (tokens.empty()) throw std::runtime_error("empty alphabet header");
    std::vector<Symbol> syms;
    for (std::size_t i = 0; i < tokens.size(); ++i) syms.push_back(static_cast<Symbol>(i));
    alpha = Alphabet(syms, tokens);
  };

  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto colon = line.find(':');
      std::string key = line.substr(1, colon == std::string::npos ? std::string::npos
                                                                  : colon - 1);
      std::string rest = colon == std::string::npos ? "" : line.substr(colon + 1);
      if (key == "alphabet") {
        parse_alphabet(rest);
      } else if (key == "kind") {
        if (rest.find("bi-infinite") != std::string::npos) bi_infinite = true;
      } else if (key == "origin") {
        origin = std::stoll(rest);
      }
      continue;
    }
    if (!alpha) throw std::runtime_error("sequence data before #alphabet header");
    // token-per-line when the line is a known token; otherwise a line of
    // single-character symbols
    if (auto s = alpha->find_token(line)) {
      data.push_back(*s);
    } else {
      for (char c : line) {
        auto sym = alpha->find_token(std::string(1, c));
        if (!sym) throw std::runtime_error("unknown symbol token in data: " + line);
        data.push_back(*sym);
      }
    }
  }
  if (!alpha) throw std::runtime_error("missing #alphabet header");
  if (data.empty()) throw std::runtime_error("sequence file has no data");
  if (!bi_infinite && origin != 0)
    throw std::runtime_error("#origin needs #kind: bi-infinite");

  std::int64_t lo = -origin;
  std::int64_t hi = lo + static_cast<std::int64_t>(data.size()) - 1;
  Provenance prov;
  prov.family = "external-file";
  prov.set("path", path.string());
  prov.transitivity_asserted = true;
  auto shared = std::make_shared<std::vector<Symbol>>(std::move(data));
  Sequence seq(
      bi_infinite ? Sequence::Kind::BiInfinite : Sequence::Kind::RightInfinite,
      *alpha, std::move(prov),
      [shared, lo](std::int64_t i) { return (*shared)[static_cast<std::size_t>(i - lo)]; },
      [shared, lo](std::int64_t a, std::int64_t b, Symbol* out) {
        std::copy(shared->begin() + (a - lo), shared->begin() + (b - lo + 1), out);
      });
  return seq.with_support(lo, hi);
}

// TSV with columns n, count, saturated.
inline std::string table_tsv(const LanguageTable& table) {
  std::ostringstream out;
  out << "n\tcount\tsaturated\n";
  for (int n = 1; n <= table.n_max; ++n)
    out << n << '\t' << table.count(n) << '\t' << (table.saturated(n) ? 1 : 0) << '\n';
  return out.str();
}

// Optional JSON dump of words and extensions (rendered via the alphabet).
inline json table_json(const LanguageTable& table, bool include_words = true) {
  json j;
  j["window"] = {{"lo", table.window_lo}, {"hi", table.window_hi}};
  j["n_max"] = table.n_max;
  j["family"] = table.family;
  j["transitivity_asserted"] = table.transitivity_asserted;
  j["hit_cap"] = table.hit_cap;
  if (table.horizon_ceiling) j["horizon_ceiling"] = *table.horizon_ceiling;
  json levels = json::array();
  for (int n = 1; n <= table.n_max; ++n) {
    json lvl;
    lvl["n"] = n;
    lvl["count"] = table.count(n);
    lvl["saturated"] = table.saturated(n);
    lvl["certified"] = table.certified(n);
    if (include_words) {
      json words = json::array();
      const auto& level = table.level(n);
      for (std::size_t w = 0; w < level.words.size(); ++w) {
        json entry;
        entry["word"] = table.alphabet.render(level.words[w]);
        std::string right, left;
        for (Symbol s : mask_symbols(level.right_ext[w])) right += table.alphabet.token(s);
        for (Symbol s : mask_symbols(level.left_ext[w])) left += table.alphabet.token(s);
        entry["right"] = right;
        entry["left"] = left;
        words.push_back(entry);
      }
      lvl["words"] = words;
    }
    levels.push_back(lvl);
  }
  j["levels"] = levels;
  return j;
}

inline json provenance_json(const Provenance& prov) {
  json j;
  j["family"] = prov.family;
  json params = json::object();
  for (const auto& [k, v] : prov.params) params[k] = v;
  j["params"] = params;
  if (prov.transitivity_asserted) j["transitivity_asserted"] = true;
  json ms = json::array();
  for (const auto& m : prov.minimal_systems) ms.push_back(m.label);
  if (!ms.empty()) j["minimal_systems"] = ms;
  return j;
}

}  // namespace shiftlab
