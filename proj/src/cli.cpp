#include "elemeq/cli.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "elemeq/formulas.hpp"
#include "elemeq/modelcheck.hpp"
#include "elemeq/suites.hpp"
#include "elemeq/translate.hpp"

namespace elemeq::cli {

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::size_t n = 3;
  std::string bound;
  std::string in, out, report, hints, corpus;
  std::string text;  // inline sentence, instead of a file
  std::string direction = "g2r";
  std::string model = "semiring";
  std::string perm;
  std::string expect;
  std::string only;
  std::size_t cap = TranslateOptions{}.blowup_cap;
  std::size_t closure = 0;
  unsigned jobs = 1;
  bool transvections = false;
  bool literal = false;
  bool shortest = false;
  bool json = false;
};

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path);
  f << text;
}

std::string sentence_text(const RunConfig& c) {
  if (!c.text.empty()) return c.text;
  if (!c.in.empty()) return read_file(c.in);
  throw InputError("no sentence: give --in FILE or --text SENTENCE");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, sep)) {
    cur.erase(0, cur.find_first_not_of(" \t"));
    cur.erase(cur.find_last_not_of(" \t") + 1);
    if (!cur.empty()) parts.push_back(cur);
  }
  return parts;
}

std::vector<Rational> rationals(const std::string& s) {
  std::vector<Rational> v;
  for (const auto& p : split(s, ',')) v.push_back(parse_rational(p));
  if (v.empty()) throw InputError("empty value list");
  return v;
}

// "N/D": numerators up to N, denominators up to D.
std::pair<long, long> semiring_bound(const std::string& s) {
  auto parts = split(s.empty() ? "2/2" : s, '/');
  try {
    if (parts.size() == 2) return {std::stol(parts[0]), std::stol(parts[1])};
  } catch (const std::exception&) {
  }
  throw InputError("semiring bound must be N/D, got " + s);
}

void need_frame(std::size_t n) {
  if (n < 3) throw InputError("n must be at least 3 for frame-dependent commands");
}

// -- translate ------------------------------------------------------------------

int cmd_translate(const RunConfig& c, std::ostream& out) {
  const Direction dir = parse_direction(c.direction);
  const std::string text = sentence_text(c);
  TranslationReport rep = [&] {
    if (dir == Direction::GroupToSemiring) {
      if (c.n < 1) throw InputError("n must be positive");
      return group_to_semiring(parse(text, semigroup_signature()), c.n, TranslateOptions{c.cap});
    }
    need_frame(c.n);
    return semiring_to_group(flatten(parse(text, semiring_signature())), c.n);
  }();
  const std::string printed = print(rep.output) + "\n";
  if (c.out.empty()) {
    out << printed;
  } else {
    write_file(c.out, printed);
    out << to_string(dir) << " n=" << c.n << ": " << rep.variables.size() << " variables, " << rep.node_count
        << " nodes, quantifier depth " << rep.quantifier_depth << "\n";
  }
  if (!c.report.empty()) write_file(c.report, to_json(rep).dump(2) + "\n");
  return kOk;
}

// -- eval -------------------------------------------------------------------------

nlohmann::json witnesses_json(const Model& m, const std::vector<Witness>& ws) {
  auto j = nlohmann::json::array();
  for (const auto& w : ws) j.push_back({{"var", w.var}, {"value", m.to_json(w.value)}, {"source", to_string(w.source)}});
  return j;
}

int cmd_eval(const RunConfig& c, std::ostream& out) {
  std::unique_ptr<Model> model;
  const Signature* sig = nullptr;
  if (c.model == "semiring") {
    auto [p, d] = semiring_bound(c.bound);
    model = std::make_unique<SemiringModel>(enum_semiring(p, d));
    sig = &semiring_signature();
  } else if (c.model == "group") {
    if (c.n < 1) throw InputError("n must be positive");
    GroupEnumOptions o;
    o.transvections = c.transvections;
    model = std::make_unique<GroupModel>(enum_group(c.n, rationals(c.bound.empty() ? "1/2,1,2" : c.bound), c.closure, o));
    sig = &semigroup_signature();
  } else {
    throw InputError("--model must be semiring or group");
  }
  Formula f = parse(sentence_text(c), *sig);
  Hints hints = c.hints.empty() ? Hints{} : parse_hints(*model, nlohmann::json::parse(read_file(c.hints)));
  EvalOptions opts;
  opts.admit_pinned = !c.literal;
  EvalResult r = eval(*model, f, hints, opts);

  if (c.json) {
    auto ext = nlohmann::json::array();
    for (ElemId e : r.external_witnesses) ext.push_back(model->to_json(e));
    nlohmann::json j{{"truth", r.truth},
                     {"sentence", print(f)},
                     {"witnesses", witnesses_json(*model, r.witnesses)},
                     {"counterexample", witnesses_json(*model, r.counterexample)},
                     {"hints_used", r.hints_used},
                     {"external_witnesses", ext},
                     {"domain_size", r.domain_size},
                     {"admit_pinned", opts.admit_pinned},
                     {"stats",
                      {{"quantifier_runs", r.stats.quantifier_runs},
                       {"memo_hits", r.stats.memo_hits},
                       {"candidates", r.stats.candidates},
                       {"pinned", r.stats.pinned}}},
                     {"seconds", r.seconds}};
    out << j.dump(2) << "\n";
  } else {
    out << (r.truth ? "true" : "false") << "\n";
    for (const auto& w : r.witnesses)
      out << "witness " << w.var << " = " << model->to_string(w.value) << " (" << to_string(w.source) << ")\n";
    for (const auto& w : r.counterexample)
      out << "counterexample " << w.var << " = " << model->to_string(w.value) << " (" << to_string(w.source) << ")\n";
    out << "domain " << r.domain_size << "\n";
  }
  if (c.expect.empty()) return kOk;
  if (c.expect != "true" && c.expect != "false") throw InputError("--expect must be true or false");
  return (c.expect == "true") == r.truth ? kOk : kMismatch;
}

// -- roundtrip ----------------------------------------------------------------------

int cmd_roundtrip(const RunConfig& c, std::ostream& out) {
  need_frame(c.n);
  RoundtripConfig cfg;
  cfg.n = c.n;
  std::tie(cfg.max_numerator, cfg.max_denominator) = semiring_bound(c.bound);

  std::map<std::string, std::vector<Rational>> hints;
  if (!c.hints.empty())
    for (const auto& [k, v] : nlohmann::json::parse(read_file(c.hints)).items())
      for (const auto& x : v) hints[k].push_back(parse_rational(x.get<std::string>()));

  std::vector<RoundtripItem> corpus;
  if (c.corpus.empty()) {
    corpus = roundtrip_corpus();
  } else {
    std::istringstream ss(read_file(c.corpus));
    for (std::string line; std::getline(ss, line);) {
      line.erase(0, line.find_first_not_of(" \t"));
      if (line.empty() || line[0] == '#') continue;
      corpus.push_back({line, hints});
    }
  }
  // Reject syntax errors before any model is built.
  for (const auto& item : corpus) parse(item.sentence, semiring_signature());

  auto rows = roundtrip(corpus, cfg);
  std::size_t matched = 0;
  for (const auto& r : rows) matched += r.match();
  if (c.json) {
    auto j = nlohmann::json::array();
    for (const auto& r : rows) j.push_back(to_json(r));
    out << nlohmann::json{{"n", cfg.n}, {"rows", j}, {"matched", matched}, {"total", rows.size()}}.dump(2) << "\n";
  } else {
    for (const auto& r : rows)
      out << (r.source_truth ? "true " : "false") << " " << (r.target_truth ? "true " : "false") << " "
          << (r.match() ? "match   " : "MISMATCH") << " " << r.sentence << "\n";
    out << matched << "/" << rows.size() << " match\n";
  }
  return matched == rows.size() ? kOk : kMismatch;
}

// -- perm-word ------------------------------------------------------------------------

int cmd_perm_word(const RunConfig& c, std::ostream& out) {
  if (c.perm.empty()) throw InputError("--perm is required");
  Permutation p = Permutation::parse(c.perm, c.n);
  GenWord w = c.shortest ? shortest_word(p) : perm_word(p);
  bool ok = eval_word(w) == p;
  if (c.json)
    out << nlohmann::json{{"perm", p.to_string()},   {"n", c.n},
                          {"word", w.to_string()},   {"length", w.length()},
                          {"verified", ok}}
               .dump(2)
        << "\n";
  else
    out << p.to_string() << " = " << w.to_string() << " (length " << w.length() << ")\n";
  return ok ? kOk : kMismatch;
}

// -- catalog --------------------------------------------------------------------------

int cmd_catalog(const RunConfig& c, std::ostream& out) {
  need_frame(c.n);
  FormulaLib lib(c.n);
  auto entries = lib.catalog();
  if (c.json) {
    auto j = nlohmann::json::array();
    for (const auto& e : entries)
      j.push_back({{"name", e.name},
                   {"params", e.params},
                   {"frame", e.frame_vars},
                   {"provenance", to_string(e.provenance)},
                   {"formula", print(e.formula)}});
    out << j.dump(2) << "\n";
    return kOk;
  }
  for (const auto& e : entries) {
    out << e.name << "(";
    for (std::size_t i = 0; i < e.params.size(); ++i) out << (i ? ", " : "") << e.params[i];
    out << ") [" << to_string(e.provenance);
    if (!e.frame_vars.empty()) {
      out << "; frame";
      for (const auto& v : e.frame_vars) out << " " << v;
    }
    out << "]\n  " << print(e.formula) << "\n";
  }
  return kOk;
}

// -- selftest ---------------------------------------------------------------------------

int cmd_selftest(const RunConfig& c, std::ostream& out) {
  std::vector<std::string> ids = c.only.empty() ? suite_ids() : split(c.only, ',');
  for (const auto& id : ids)
    if (std::find(suite_ids().begin(), suite_ids().end(), id) == suite_ids().end())
      throw InputError("unknown suite " + id);

  std::vector<SuiteResult> results(ids.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < ids.size();) results[i] = run_suite(ids[i]);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < std::max(1u, c.jobs); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::size_t passed = 0;
  for (const auto& r : results) passed += r.passed();
  if (c.json) {
    auto j = nlohmann::json::array();
    for (const auto& r : results) j.push_back(to_json(r));
    out << nlohmann::json{{"suites", j}, {"passed", passed}, {"total", results.size()}}.dump(2) << "\n";
  } else {
    for (const auto& r : results) {
      out << summary_line(r) << "\n";
      for (const auto& n : r.notes) out << "    " << n << "\n";
    }
    out << passed << "/" << results.size() << " suites passed\n";
  }
  return passed == results.size() ? kOk : kMismatch;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Translate and model-check sentences between matrix semigroups and semirings"};
  app.require_subcommand(1);

  auto* tr = app.add_subcommand("translate", "compile a sentence to the other language");
  tr->add_option("--dir", c.direction, "g2r or r2g")->check(CLI::IsMember({"g2r", "r2g"}));
  tr->add_option("--n", c.n, "matrix size");
  tr->add_option("--in", c.in, "sentence file");
  tr->add_option("--text", c.text, "sentence text, instead of --in");
  tr->add_option("--out", c.out, "output file (default stdout)");
  tr->add_option("--report", c.report, "JSON translation report");
  tr->add_option("--cap", c.cap, "blowup cap for g2r");

  auto* ev = app.add_subcommand("eval", "evaluate a sentence on a bounded model");
  ev->add_option("--model", c.model, "semiring or group");
  ev->add_option("--n", c.n, "matrix size (group)");
  ev->add_option("--bound", c.bound, "semiring: N/D (default 2/2); group: entry values (default 1/2,1,2)");
  ev->add_flag("--transvections", c.transvections, "add B_ij(x) for the entry values (group)");
  ev->add_option("--closure", c.closure, "product closure depth (group)");
  ev->add_option("--sentence,--in", c.in, "sentence file");
  ev->add_option("--text", c.text, "sentence text, instead of --sentence");
  ev->add_option("--hints", c.hints, "JSON {var: [element, ...]}");
  ev->add_flag("--literal", c.literal, "quantify over the domain only (no pinned values)");
  ev->add_option("--expect", c.expect, "true or false; exit 1 when the truth value differs");
  ev->add_flag("--json", c.json, "JSON output");

  auto* rt = app.add_subcommand("roundtrip", "compare bounded truth of semiring sentences and their translations");
  rt->add_option("--corpus", c.corpus, "one semiring sentence per line (default: built-in corpus)");
  rt->add_option("--n", c.n, "matrix size");
  rt->add_option("--bound", c.bound, "semiring bound N/D (default 2/2)");
  rt->add_option("--hints", c.hints, "JSON {var: [rational, ...]} shared by all sentences");
  rt->add_flag("--json", c.json, "JSON output");

  auto* pw = app.add_subcommand("perm-word", "spell a permutation in the generators (1,2) and (1,...,n)");
  pw->add_option("--perm", c.perm, "cycle or one-line notation")->required();
  pw->add_option("--n", c.n, "degree");
  pw->add_flag("--shortest", c.shortest, "shortest word by breadth-first search");
  pw->add_flag("--json", c.json, "JSON output");

  auto* cat = app.add_subcommand("catalog", "formula catalog");
  auto* dump = cat->add_subcommand("dump", "print every formula");
  cat->require_subcommand(1);
  dump->add_option("--n", c.n, "matrix size");
  dump->add_flag("--json", c.json, "JSON output");

  auto* st = app.add_subcommand("selftest", "run the acceptance suites");
  st->add_option("--only", c.only, "comma-separated suite ids");
  st->add_option("--jobs", c.jobs, "worker threads");
  st->add_flag("--json", c.json, "JSON output");

  std::vector<std::string> argv_store{"elemeq"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kInputError;
  }

  try {
    if (*tr) return cmd_translate(c, out);
    if (*ev) return cmd_eval(c, out);
    if (*rt) return cmd_roundtrip(c, out);
    if (*pw) return cmd_perm_word(c, out);
    if (*cat) return cmd_catalog(c, out);
    if (*st) return cmd_selftest(c, out);
  } catch (const BlowupRefused& e) {
    err << "refused: " << e.what() << "\n";
    return kRefused;
  } catch (const DomainExplosion& e) {
    err << "refused: " << e.what() << "\n";
    return kRefused;
  } catch (const nlohmann::json::exception& e) {
    err << "error: bad JSON: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    // Syntax errors, unknown symbols, non-flat input, bad files and options.
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace elemeq::cli
