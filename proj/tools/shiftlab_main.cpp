// Command-line front end: generate the sequence families, apply block
// maps, analyze language tables, estimate empirical measures, and run the
// named verification experiments.

#include <CLI11.hpp>

#include <iostream>

#include "shiftlab/experiments.hpp"
#include "shiftlab/io.hpp"

using namespace shiftlab;

namespace {

RealSpec parse_real(const std::string& text) {
  if (text == "golden") return RealSpec::golden();
  if (text.rfind("1/sqrt(", 0) == 0) {
    int k = std::stoi(text.substr(7));
    return RealSpec::inv_sqrt(k);
  }
  return RealSpec::decimal(text);
}

GrowthFunction parse_growth(const std::string& name) { return GrowthFunction::by_name(name); }

struct GenArgs {
  std::string family;
  std::int64_t length = 4096;
  std::int64_t origin = 0;
  std::string out;
  std::string beta = "golden", x0, beta2;
  std::string growth = "linear";
  std::uint64_t margin = 1;
  int j = 2, i = 1, N = 10;
  std::string nonrec_case = "i1";
  std::string relabel;
  std::string cycle = "01";
};

Sequence make_family(const GenArgs& a, json& extra) {
  if (a.family == "sturmian") {
    SturmianParams sp;
    sp.beta = parse_real(a.beta);
    if (!a.x0.empty()) sp.x0 = parse_real(a.x0);
    if (!a.relabel.empty()) {
      auto comma = a.relabel.find(',');
      if (comma == std::string::npos)
        throw CLI::ValidationError("--relabel expects two comma-separated symbols");
      sp.zero_symbol = static_cast<Symbol>(std::stoi(a.relabel.substr(0, comma)));
      sp.one_symbol = static_cast<Symbol>(std::stoi(a.relabel.substr(comma + 1)));
    }
    return sturmian(sp);
  }
  if (a.family == "sharp" || a.family == "stitched") {
    int i = a.family == "sharp" ? 0 : a.i;
    auto sched = make_schedule(a.j, i, parse_growth(a.growth), a.margin);
    Sequence seq = i == 0 ? recurrent_sharp_family(sched) : stitched_family(sched);
    // record the schedule entries actually used
    json entries = json::array();
    for (const auto& rec : sched.log()) {
      json e;
      e["k"] = rec.k;
      e["p"] = rec.p;
      e["value"] = rec.capped ? json("capped") : json(rec.value);
      if (rec.inflated) e["inflated_from"] = rec.pre_inflation;
      entries.push_back(e);
    }
    extra["schedule"] = entries;
    return seq;
  }
  if (a.family == "transitive")
    return transitive_family(a.j, parse_growth(a.growth), a.margin);
  if (a.family == "nonrecurrent") {
    auto which = a.nonrec_case == "i2" ? NonrecurrentCase::TwoInfinite
                                       : NonrecurrentCase::OneInfinite;
    std::optional<RealSpec> b1, b2, x0;
    if (a.beta != "golden") b1 = parse_real(a.beta);
    if (!a.beta2.empty()) b2 = parse_real(a.beta2);
    if (!a.x0.empty()) x0 = parse_real(a.x0);
    return nonrecurrent_example(which, a.N, b1, b2, x0);
  }
  if (a.family == "staircase") return staircase();
  if (a.family == "periodic") {
    Word cycle;
    for (char c : a.cycle) {
      if (c < '0' || c > '9') throw CLI::ValidationError("--cycle expects digits");
      cycle.push_back(static_cast<char>(c - '0'));
    }
    return periodic_sequence(cycle);
  }
  throw CLI::ValidationError("unknown family: " + a.family +
                             " (sturmian|sharp|stitched|transitive|nonrecurrent|"
                             "staircase|periodic)");
}

std::vector<std::vector<Word>> load_languages_json(const std::string& path,
                                                   const Alphabet& alpha, int& r) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  json j;
  in >> j;
  r = j.at("r").get<int>();
  std::vector<std::vector<Word>> langs;
  for (const auto& lang : j.at("languages")) {
    std::vector<Word> words;
    for (const auto& entry : lang) {
      std::string text = entry.get<std::string>();
      Word w;
      for (char c : text) {
        auto s = alpha.find_token(std::string(1, c));
        if (!s) throw std::runtime_error("unknown symbol in language file: " + text);
        w.push_back(static_cast<char>(*s));
      }
      words.push_back(w);
    }
    langs.push_back(words);
  }
  return langs;
}

int print_verdicts(const std::vector<Verdict>& verdicts) {
  bool any_fail = false, any_inc = false;
  for (const auto& v : verdicts) {
    const char* status = v.status == Verdict::Pass          ? "PASS"
                         : v.status == Verdict::Fail        ? "FAIL"
                                                            : "INCONCLUSIVE";
    std::cout << "[" << status << "] " << v.name;
    if (!v.detail.empty()) std::cout << ": " << v.detail;
    std::cout << "\n";
    any_fail = any_fail || v.status == Verdict::Fail;
    any_inc = any_inc || v.status == Verdict::Inconclusive;
  }
  return any_fail ? 1 : (any_inc ? 2 : 0);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shiftlab: a workbench for word complexity, block codes and "
               "empirical measures of low-complexity sequences"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::int64_t cap = SaturationPolicy{}.hard_cap;
  std::string out_dir = ".";
  std::string format = "tsv";
  app.add_option("--cap", cap, "hard cap on the analysis window, in symbols");
  app.add_option("--out-dir", out_dir, "directory for experiment bundles");
  app.add_option("--format", format, "trace format: tsv or json")
      ->check(CLI::IsMember({"tsv", "json"}));

  // --- gen -------------------------------------------------------------
  GenArgs ga;
  auto* gen = app.add_subcommand("gen", "generate a sequence family into a file");
  gen->add_option("family", ga.family,
                  "sturmian|sharp|stitched|transitive|nonrecurrent|staircase|periodic")
      ->required();
  gen->add_option("--length", ga.length, "number of symbols to emit");
  gen->add_option("--origin", ga.origin, "symbols emitted left of index 0");
  gen->add_option("--out", ga.out, "output sequence file")->required();
  gen->add_option("--beta", ga.beta, "rotation number (golden, 1/sqrt(k), or 0.ddd...)");
  gen->add_option("--x0", ga.x0, "orbit start (defaults to beta/2)");
  gen->add_option("--beta2", ga.beta2, "second rotation number (nonrecurrent i2)");
  gen->add_option("--g", ga.growth, "growth function: linear|log2|sqrt");
  gen->add_option("--margin", ga.margin, "schedule margin");
  gen->add_option("--j", ga.j, "number of minimal subsystems");
  gen->add_option("--i", ga.i, "number of infinite minimal subsystems");
  gen->add_option("--N", ga.N, "gap parameter for the junction examples");
  gen->add_option("--case", ga.nonrec_case, "i1 or i2");
  gen->add_option("--relabel", ga.relabel, "two symbols replacing 0,1");
  gen->add_option("--cycle", ga.cycle, "cycle for the periodic family");

  // --- map -------------------------------------------------------------
  std::string map_kind, map_in, map_out, map_rule, map_langs;
  int map_memory = 0, map_anticipation = 0;
  auto* mapcmd = app.add_subcommand("map", "apply a sliding block code to a sequence file");
  mapcmd->add_option("kind", map_kind, "pi|collapse|custom")->required();
  mapcmd->add_option("--in", map_in, "input sequence file")->required();
  mapcmd->add_option("--out", map_out, "output sequence file")->required();
  mapcmd->add_option("--rule", map_rule, "custom rule TSV (window<TAB>symbol)");
  mapcmd->add_option("--langs", map_langs,
                     "JSON {r, languages} with the minimal-system r-words");
  mapcmd->add_option("--memory", map_memory, "memory of a custom rule");
  mapcmd->add_option("--anticipation", map_anticipation, "anticipation of a custom rule");

  // --- analyze -----------------------------------------------------------
  std::string an_in, an_report = "profile", an_bound, an_out;
  int an_nmax = 50;
  auto* analyze = app.add_subcommand("analyze", "language table, census and bounds");
  analyze->add_option("--in", an_in, "input sequence file")->required();
  analyze->add_option("--nmax", an_nmax, "maximum word length");
  analyze->add_option("--report", an_report, "profile|special|bounds")
      ->check(CLI::IsMember({"profile", "special", "bounds"}));
  analyze->add_option("--bound", an_bound, "alpha,g,mode e.g. 2.5,zero,limsup");
  analyze->add_option("--out", an_out, "output TSV file (JSON verdicts beside it)");

  // --- measure -----------------------------------------------------------
  std::string me_in, me_lengths = "1000,2000,4000", me_out;
  std::int64_t me_start = 0;
  int me_depth = 4, me_g = 0;
  double me_tol = 0.0;
  auto* measure = app.add_subcommand("measure", "empirical measures and extraction");
  measure->add_option("--in", me_in, "input sequence file")->required();
  measure->add_option("--start", me_start, "start index of the shift averages");
  measure->add_option("--lengths", me_lengths, "comma-separated sample lengths");
  measure->add_option("--depth", me_depth, "cylinder depth");
  measure->add_option("--out", me_out, "output JSON file");
  measure->add_option("--g", me_g, "run the candidate extraction with this g");
  measure->add_option("--tol", me_tol, "cluster threshold (default 8x tail bound)");

  // --- verify / list -------------------------------------------------------
  std::string verify_tag;
  auto* verify = app.add_subcommand("verify", "run a named verification experiment");
  verify->add_option("tag", verify_tag, "experiment tag (see `list`)")->required();
  auto* list = app.add_subcommand("list", "list the experiment catalog");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      json extra = json::object();
      Sequence seq = make_family(ga, extra);
      std::int64_t lo = -ga.origin;
      std::int64_t hi = lo + ga.length - 1;
      write_sequence_file(ga.out, seq, lo, hi);
      json side = provenance_json(seq.provenance());
      side["version"] = kVersion;
      side["window"] = {{"lo", lo}, {"hi", hi}};
      for (auto& [k, v] : extra.items()) side[k] = v;
      write_file_atomic(ga.out + ".prov.json", side.dump(2) + "\n");
      std::cout << "wrote " << ga.out << " (" << ga.length << " symbols)\n";
      return 0;
    }

    if (*mapcmd) {
      Sequence in = read_sequence_file(map_in);
      auto support = in.support();
      BlockMap map;
      if (map_kind == "pi") {
        if (map_langs.empty())
          throw std::runtime_error("map pi needs --langs with the minimal languages");
        int r = 0;
        auto langs = load_languages_json(map_langs, in.alphabet(), r);
        map = build_pi(langs, r, in.alphabet()).pi;
      } else if (map_kind == "collapse") {
        if (map_langs.empty())
          throw std::runtime_error("map collapse needs --langs with one language");
        int r = 0;
        auto langs = load_languages_json(map_langs, in.alphabet(), r);
        if (langs.size() != 1)
          throw std::runtime_error("collapse expects exactly one language");
        map = build_collapse(langs[0], r, in.alphabet());
      } else if (map_kind == "custom") {
        if (map_rule.empty()) throw std::runtime_error("map custom needs --rule TSV");
        std::ifstream rules(map_rule);
        if (!rules) throw std::runtime_error("cannot read " + map_rule);
        std::vector<std::pair<Word, Symbol>> table;
        Alphabet target = in.alphabet();
        std::string line;
        while (std::getline(rules, line)) {
          if (line.empty() || line[0] == '#') continue;
          auto tab = line.find('\t');
          if (tab == std::string::npos) throw std::runtime_error("rule line without tab");
          Word w;
          for (char c : line.substr(0, tab)) {
            auto s = in.alphabet().find_token(std::string(1, c));
            if (!s) throw std::runtime_error("unknown symbol in rule window");
            w.push_back(static_cast<char>(*s));
          }
          auto sym = target.find_token(line.substr(tab + 1));
          if (!sym) throw std::runtime_error("unknown output symbol in rule");
          table.emplace_back(w, *sym);
        }
        map = block_map_from_table(map_memory, map_anticipation, in.alphabet(), target,
                                   table);
      } else {
        throw std::runtime_error("map kind must be pi|collapse|custom");
      }
      Sequence out = apply_to_sequence(map, in);
      std::int64_t lo = support->first + map.memory();
      std::int64_t hi = support->second - map.anticipation();
      write_sequence_file(map_out, out, lo, hi);
      std::cout << "wrote " << map_out << "\n";
      return 0;
    }

    if (*analyze) {
      Sequence seq = read_sequence_file(an_in);
      LanguageTable t = build_language(seq, an_nmax, SaturationPolicy{4096, cap});
      SpecialWordReport census = special_census(t);
      ComplexityProfile prof = profile(t);

      std::optional<BoundReport> bound;
      if (!an_bound.empty()) {
        std::istringstream ss(an_bound);
        std::string alpha_text, gname, mode_text;
        std::getline(ss, alpha_text, ',');
        std::getline(ss, gname, ',');
        std::getline(ss, mode_text, ',');
        double alpha = std::stod(alpha_text);
        std::int64_t den = std::abs(alpha - std::round(alpha)) < 1e-9 ? 1 : 2;
        std::int64_t num = static_cast<std::int64_t>(std::llround(alpha * den));
        BoundMode mode = mode_text == "limsup"   ? BoundMode::LimSupLower
                         : mode_text == "liminf" ? BoundMode::LimInfLower
                                                 : BoundMode::Ceiling;
        bound = bound_report(prof, num, den, GrowthFunction::by_name(gname), mode);
      }

      std::ostringstream tsv;
      tsv << "n\tc\trs\tls\tmargin\n";
      for (int n = 1; n <= an_nmax; ++n) {
        tsv << n << '\t' << prof.at(n) << '\t' << census.rs_count(n) << '\t'
            << census.ls_count(n) << '\t';
        if (bound)
          tsv << bound->margin[static_cast<std::size_t>(n - 1)];
        else
          tsv << "";
        tsv << '\n';
      }

      json verdicts;
      verdicts["version"] = kVersion;
      verdicts["family"] = provenance_json(seq.provenance());
      verdicts["window"] = {{"lo", t.window_lo}, {"hi", t.window_hi}};
      verdicts["hit_cap"] = t.hit_cap;
      verdicts["transitivity_asserted"] = t.transitivity_asserted;
      if (t.horizon_ceiling) verdicts["horizon_ceiling"] = *t.horizon_ceiling;
      auto counting = check_counting(prof, census);
      bool counting_ok = true;
      for (const auto& v : counting) counting_ok = counting_ok && v.identity_ok && v.inequality_ok;
      verdicts["counting_identity"] = counting_ok;
      auto mh = morse_hedlund_classify(prof, seq, 4096);
      verdicts["morse_hedlund"] = {{"triggered", mh.triggered},
                                   {"trigger_n", mh.trigger_n},
                                   {"aperiodic_through", mh.aperiodic_through}};
      if (bound) {
        verdicts["bound"] = {{"alpha_num", bound->alpha_num},
                             {"alpha_den", bound->alpha_den},
                             {"g", bound->g_name},
                             {"mode", bound_mode_name(bound->mode)},
                             {"pass", bound->pass},
                             {"detail", bound->detail}};
      }
      if (an_report == "special") {
        json specials = json::array();
        for (int n = 1; n <= an_nmax; ++n) {
          json lvl;
          lvl["n"] = n;
          json words = json::array();
          for (const auto& e : census.level(n).rs) {
            json w;
            w["word"] = t.alphabet.render(e.word);
            w["maximal"] = e.maximal;
            words.push_back(w);
          }
          lvl["rs"] = words;
          specials.push_back(lvl);
        }
        verdicts["right_special"] = specials;
      }

      if (!an_out.empty()) {
        write_file_atomic(an_out, format == "json" ? table_json(t).dump(2) + "\n"
                                                   : tsv.str());
        write_file_atomic(an_out + ".verdicts.json", verdicts.dump(2) + "\n");
        std::cout << "wrote " << an_out << "\n";
      } else {
        std::cout << tsv.str();
        std::cout << verdicts.dump(2) << "\n";
      }
      if (!counting_ok || (bound && !bound->pass)) return 1;
      if (t.hit_cap) return 2;
      return 0;
    }

    if (*measure) {
      Sequence seq = read_sequence_file(me_in);
      std::vector<std::int64_t> lengths;
      std::istringstream ss(me_lengths);
      std::string tok;
      while (std::getline(ss, tok, ',')) lengths.push_back(std::stoll(tok));
      json out;
      out["version"] = kVersion;
      out["family"] = provenance_json(seq.provenance());
      if (lengths.size() >= 2) {
        ConvergenceReport rep =
            generic_limit_probe(seq, me_start, lengths, me_depth, WeakMetricSpec{16},
                                me_tol > 0 ? me_tol : 0.01);
        out["step_distances"] = rep.step_distance;
        out["tail_bound"] = rep.tail_bound;
        out["cauchy_like"] = rep.cauchy_like;
        json freqs = json::object();
        for (const auto& [w, c] : rep.candidate.counts)
          freqs[seq.alphabet().render(w)] = {
              {"count", c},
              {"of", rep.candidate.sample_n},
              {"freq", static_cast<double>(c) / static_cast<double>(rep.candidate.sample_n)}};
        out["final_measure"] = freqs;
      } else {
        EmpiricalMeasure m = empirical(seq, me_start, lengths.at(0), me_depth);
        json freqs = json::object();
        for (const auto& [w, c] : m.counts)
          freqs[seq.alphabet().render(w)] = {{"count", c}, {"of", m.sample_n}};
        out["measure"] = freqs;
      }
      if (me_g >= 2) {
        int nmax = std::max(16, me_depth * 2);
        LanguageTable t = build_language(seq, nmax, SaturationPolicy{4096, cap});
        GenericCandidates got = extract_generic_candidates(
            seq, t, special_census(t), profile(t), me_g, me_depth, WeakMetricSpec{16},
            me_tol);
        json ext;
        ext["level"] = got.level;
        ext["rs_count"] = got.rs_count;
        ext["clusters"] = got.clusters.size();
        ext["tail_bound"] = got.tail_bound;
        ext["threshold"] = got.cluster_threshold;
        if (!got.diagnostic.empty()) ext["diagnostic"] = got.diagnostic;
        if (!got.caveat.empty()) ext["caveat"] = got.caveat;
        json reps = json::array();
        for (const auto& c : got.clusters) {
          json r;
          json members = json::array();
          for (const auto& w : c.members) members.push_back(seq.alphabet().render(w));
          r["members"] = members;
          json freqs = json::object();
          for (const auto& [w, cnt] : c.representative.counts)
            freqs[seq.alphabet().render(w)] = {{"count", cnt},
                                               {"of", c.representative.sample_n}};
          r["measure"] = freqs;
          reps.push_back(r);
        }
        ext["representatives"] = reps;
        out["extraction"] = ext;
      }
      if (!me_out.empty()) {
        write_file_atomic(me_out, out.dump(2) + "\n");
        std::cout << "wrote " << me_out << "\n";
      } else {
        std::cout << out.dump(2) << "\n";
      }
      return 0;
    }

    if (*verify) {
      std::string tag = verify_tag == "S5-staircase" ? "\xC2\xA7""5-staircase" : verify_tag;
      ExperimentBundle bundle = run_experiment(tag, RunOptions{cap});
      std::filesystem::path dir = std::filesystem::path(out_dir) / verify_tag;
      std::filesystem::create_directories(dir);
      write_file_atomic(dir / "provenance.json", bundle.provenance.dump(2) + "\n");
      json verdicts = json::array();
      for (const auto& v : bundle.verdicts)
        verdicts.push_back({{"name", v.name},
                            {"status", v.status == Verdict::Pass          ? "pass"
                                       : v.status == Verdict::Fail        ? "fail"
                                                                          : "inconclusive"},
                            {"detail", v.detail}});
      write_file_atomic(dir / "verdicts.json", verdicts.dump(2) + "\n");
      for (const auto& [name, content] : bundle.traces)
        write_file_atomic(dir / name, content);
      int code = print_verdicts(bundle.verdicts);
      std::cout << "bundle written to " << dir.string() << "\n";
      return code;
    }

    if (*list) {
      for (const auto& spec : experiment_catalog()) {
        std::cout << spec.tag << "\t" << spec.description << "\n";
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
