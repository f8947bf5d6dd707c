#include "elemeq/suites.hpp"

#include <chrono>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "elemeq/formulas.hpp"
#include "elemeq/modelcheck.hpp"
#include "elemeq/translate.hpp"

namespace elemeq {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Rational q(long p, long d = 1) {
  Rational r(p, d);
  r.canonicalize();
  return r;
}

const std::size_t kMaxNotes = 12;

void check(SuiteResult& r, bool ok, const std::function<std::string()>& what) {
  ++r.checks;
  if (ok) return;
  ++r.failures;
  if (r.notes.size() < kMaxNotes) r.notes.push_back("FAIL " + what());
}

SuiteResult start(std::string id, std::string title) {
  SuiteResult r;
  r.id = std::move(id);
  r.title = std::move(title);
  return r;
}

void note(SuiteResult& r, std::string s) { r.notes.push_back(std::move(s)); }

Matrix S(const Permutation& p) { return Matrix::permutation(p); }
Matrix B(std::size_t n, std::size_t i, std::size_t j, const Rational& x) { return Matrix::transvection(n, i, j, x); }

std::vector<Rational> halves() { return {q(1, 2), q(1), q(2)}; }

EvalOptions pinned() {
  EvalOptions o;
  o.admit_pinned = true;
  return o;
}

const Term kM = Term::var("M");

// -- generator words ---------------------------------------------------------------

SuiteResult generator_words() {
  SuiteResult r = start("AC1", "generator words reproduce every permutation of degree 3, 4, 5");
  r.limit_seconds = 1;
  for (std::size_t n = 3; n <= 5; ++n) {
    const Matrix tau = S(generator_tau(n)), rho = S(generator_rho(n));
    for (const auto& sigma : all_permutations(n)) {
      for (const GenWord& w : {perm_word(sigma), shortest_word(sigma)}) {
        check(r, eval_word(w) == sigma, [&] { return sigma.to_string() + " word " + w.to_string(); });
        // Independent of eval_word: multiply generator matrices.
        Matrix prod = Matrix::identity(n);
        for (auto [i, j] : w.pairs) prod = prod * tau.power(static_cast<std::size_t>(i)) * rho.power(static_cast<std::size_t>(j));
        check(r, prod == S(sigma), [&] { return sigma.to_string() + " matrix product of " + w.to_string(); });
      }
    }
  }
  Permutation t13 = Permutation::transposition(3, 1, 3);
  check(r, generator_rho(3) * generator_tau(3) == t13, [] { return "(1,3) = (1,2,3)(1,2)"; });
  check(r, S(generator_rho(3)) * S(generator_tau(3)) == S(t13), [] { return "S_(1,3) = S_(1,2,3) S_(1,2)"; });
  return r;
}

SuiteResult sigma_table() {
  SuiteResult r = start("AC2", "symmetric-group table matches exact permutation-matrix products for degree 3, 4");
  r.limit_seconds = 1;
  for (std::size_t m : {3u, 4u}) {
    SymTable t = sym_table(m);
    std::vector<Matrix> mats;
    for (const auto& p : t.elements) mats.push_back(S(p));
    for (std::size_t i = 0; i < mats.size(); ++i)
      for (std::size_t j = 0; j < mats.size(); ++j) {
        auto g = static_cast<std::size_t>(t.gamma[i][j]);
        check(r, mats[i] * mats[j] == mats[g], [&] {
          return "m=" + std::to_string(m) + " gamma(" + std::to_string(i) + "," + std::to_string(j) + ")";
        });
      }
  }
  return r;
}

SuiteResult transvection_identity(const SuiteOptions& o) {
  SuiteResult r = start("AC3", "B13(x1) B32(x2) = B32(x2) B13(x1) B12(x1 x2) on 200 random nonnegative rationals");
  r.limit_seconds = 1;
  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<long> num(0, 100), den(1, 100);
  for (int k = 0; k < 200; ++k) {
    Rational x1 = q(num(rng), den(rng)), x2 = q(num(rng), den(rng));
    Matrix lhs = B(3, 1, 3, x1) * B(3, 3, 2, x2);
    Matrix rhs = B(3, 3, 2, x2) * B(3, 1, 3, x1) * B(3, 1, 2, x1 * x2);
    check(r, lhs == rhs, [&] { return "x1=" + to_string(x1) + " x2=" + to_string(x2); });
  }
  return r;
}

// -- characterizations ------------------------------------------------------------

void characterization(SuiteResult& r, Evaluator& ev, GroupModel& g, const std::string& name, const Formula& f,
                      const std::function<bool(const Matrix&)>& oracle) {
  auto rep = characterize(ev, f, [&](ElemId e) { return oracle(g.value(e)); });
  r.checks += rep.rows.size();
  r.failures += rep.disagreements.size();
  for (ElemId e : rep.disagreements)
    if (r.notes.size() < kMaxNotes) r.notes.push_back("FAIL " + name + " disagrees at " + g.to_string(e));
  note(r, name + ": " + std::to_string(rep.count_true()) + " of " + std::to_string(rep.rows.size()) + " satisfy");
}

SuiteResult involutions() {
  SuiteResult r = start("AC4", "Inv holds exactly on the involutions of the bounded monomial model");
  FormulaLib lib(3);
  auto g = enum_group(3, halves(), 0);
  Evaluator ev(g, {}, pinned());
  const Matrix id = Matrix::identity(3);
  characterization(r, ev, g, "Inv", lib.inv(kM), [&](const Matrix& m) { return m * m == id && m != id; });
  for (ElemId e : g.domain()) {
    if (!ev.holds(lib.inv(kM), {{"M", e}})) continue;
    auto mf = monomial_decompose(g.value(e));
    bool ok = mf && (mf->sigma * mf->sigma).is_identity();
    if (ok)
      for (int i = 1; i <= 3; ++i) {
        auto a = static_cast<std::size_t>(i - 1), b = static_cast<std::size_t>(mf->sigma(i) - 1);
        ok = ok && mf->diag[a] * mf->diag[b] == 1;
      }
    check(r, ok, [&] { return "normal form of " + g.to_string(e); });
  }
  return r;
}

SuiteResult invertibles_and_diagonals() {
  SuiteResult r = start("AC5", "Invert, Diag and CDiag characterize their matrix classes on the bounded model");
  FormulaLib lib(3);
  GroupEnumOptions o;
  o.transvections = true;
  auto g = enum_group(3, halves(), 0, o);
  Evaluator ev(g, {}, pinned());
  auto diagonal = [](const Matrix& m) {
    auto mf = monomial_decompose(m);
    return mf && mf->sigma.is_identity();
  };
  characterization(r, ev, g, "Invert", lib.invert(kM), [](const Matrix& m) { return gamma_n_member(m); });
  characterization(r, ev, g, "Diag", lib.diag(kM), diagonal);
  // Over the rationals the diagonal group is commutative, so its centralizer
  // part is all of it and CDiag selects the same set.
  characterization(r, ev, g, "CDiag", lib.cdiag(kM), diagonal);
  note(r, "domain " + std::to_string(g.domain_size()) + " (monomials and transvections over {1/2, 1, 2})");
  return r;
}

SuiteResult size_sentence() {
  SuiteResult r = start("AC6", "the six-coset sentence is true on bounded G3 and refuted on bounded G4");
  r.limit_seconds = 300;
  FormulaLib lib(3);
  Formula size = lib.size_sentence();

  auto g3 = enum_group(3, halves(), 0);
  Hints h;
  std::size_t i = 1;
  for (const auto& [p, w] : bfs_words(3)) h["X" + std::to_string(i++)] = {g3.intern(S(p))};
  auto t3 = eval(g3, size, h, pinned());
  check(r, t3.truth, [] { return "true on G3"; });
  note(r, "G3: domain " + std::to_string(g3.domain_size()) + ", " + std::to_string(t3.hints_used) + " hints used, " +
              std::to_string(t3.seconds) + " s");

  std::vector<Matrix> dom;
  for (const auto& p : all_permutations(4)) dom.push_back(S(p));
  for (const auto& d : std::vector<std::vector<Rational>>{{q(1, 2), q(1), q(2), q(3)},
                                                          {q(3), q(2), q(1), q(1, 2)},
                                                          {q(2), q(1), q(1), q(1)},
                                                          {q(2), q(2), q(2), q(2)}})
    dom.push_back(Matrix::diagonal(d));
  GroupModel g4(4, dom);
  Evaluator ev(g4, {}, pinned());
  // The refutation is only meaningful if Diag finds the diagonals.
  std::size_t diagonals = 0;
  for (ElemId e : g4.domain()) {
    bool d = ev.holds(lib.diag(kM), {{"M", e}});
    diagonals += d;
    check(r, d == g4.value(e).is_diagonal(), [&] { return "Diag on G4 at " + g4.to_string(e); });
  }
  auto t4 = ev.eval(size);
  check(r, !t4.truth, [] { return "false on G4"; });
  note(r, "G4: domain " + std::to_string(g4.domain_size()) + " (24 permutations, 4 diagonal samples), Diag holds on " +
              std::to_string(diagonals) + ", " + std::to_string(t4.stats.candidates) + " candidates, " +
              std::to_string(t4.seconds) + " s");
  return r;
}

// -- transvection arithmetic ----------------------------------------------------------

SuiteResult transvection_arithmetic() {
  SuiteResult r = start("AC7", "MainUnit core, Addit and Multipl agree with B12 arithmetic in two frames");
  FormulaLib lib(3);
  const Term X1 = Term::var("X1"), X2 = Term::var("X2"), X3 = Term::var("X3");
  const std::vector<Rational> grid{q(1, 2), q(1), q(3, 2), q(2), q(3)};
  std::set<Rational> values(grid.begin(), grid.end());
  for (const auto& a : grid)
    for (const auto& b : grid) {
      values.insert(a + b);
      values.insert(a * b);
    }
  const std::vector<Rational> unit_probe{q(1, 2), q(1), q(2), q(3)};
  GroupEnumOptions o;
  for (const auto& v : values) o.extra.push_back(B(3, 1, 2, v));
  for (const auto& x : unit_probe) o.extra.push_back(B(3, 2, 1, x));
  auto base = enum_group(3, halves(), 0, o);

  const Matrix id = Matrix::identity(3);
  const Matrix n = Matrix::diagonal({q(2), q(1), q(1, 2)}) * S(Permutation::parse("(1,2,3)", 3));
  for (const Matrix* frame : {&id, &n}) {
    const std::string fname = frame == &id ? "identity frame" : "frame diag[2,1,1/2] S_(1,2,3)";
    GroupModel g = frame == &id ? base : base.conjugated(*frame);
    Evaluator ev(g, {}, pinned());
    ElemId m1 = g.intern(conjugate(*frame, S(generator_rho(3))));
    ElemId m2 = g.intern(conjugate(*frame, S(generator_tau(3))));
    auto t = [&](std::size_t i, std::size_t j, const Rational& x) { return g.intern(conjugate(*frame, B(3, i, j, x))); };
    for (const auto& x : unit_probe) {
      check(r, ev.holds(lib.main_unit_core(kM), {{"M1", m1}, {"M2", m2}, {"M", t(1, 2, x)}}) == (x == 1),
            [&] { return fname + ": MainUnit core at B12(" + to_string(x) + ")"; });
      check(r, !ev.holds(lib.main_unit_core(kM), {{"M1", m1}, {"M2", m2}, {"M", t(2, 1, x)}}),
            [&] { return fname + ": MainUnit core at B21(" + to_string(x) + ")"; });
    }
    for (const auto& a : grid)
      for (const auto& b : grid)
        for (const auto& v : values) {
          Assignment as{{"M1", m1}, {"M2", m2}, {"X1", t(1, 2, a)}, {"X2", t(1, 2, b)}, {"X3", t(1, 2, v)}};
          auto label = [&](const char* what) {
            return fname + ": " + what + "(" + to_string(a) + ", " + to_string(b) + ", " + to_string(v) + ")";
          };
          check(r, ev.holds(lib.addit(X1, X2, X3), as) == (v == a + b), [&] { return label("Addit"); });
          check(r, ev.holds(lib.multipl(X1, X2, X3), as) == (v == a * b), [&] { return label("Multipl"); });
        }
  }
  note(r, std::to_string(grid.size() * grid.size()) + " pairs x " + std::to_string(values.size()) +
              " candidate results per frame");
  return r;
}

// -- translation ---------------------------------------------------------------------

std::size_t count_or_children(const Formula& f) {
  if (f.kind() == Formula::Kind::Or) return f.children().size();
  for (const auto& c : f.children())
    if (std::size_t k = count_or_children(c)) return k;
  return 0;
}

SuiteResult translation_purity() {
  SuiteResult r = start("AC8", "both compilers are signature-pure and byte-deterministic on 20-sentence corpora");
  for (const auto& s : group_corpus()) {
    Formula f = parse(s, semigroup_signature());
    auto a = group_to_semiring(f, 3), b = group_to_semiring(f, 3);
    check(r, uses_only(a.output, semiring_signature()), [&] { return "g2r purity: " + s; });
    check(r, print(a.output) == print(b.output) && to_json(a).dump() == to_json(b).dump(),
          [&] { return "g2r determinism: " + s; });
  }
  for (const auto& s : semiring_corpus()) {
    Formula f = flatten(parse(s, semiring_signature()));
    auto a = semiring_to_group(f, 3), b = semiring_to_group(f, 3);
    check(r, uses_only(a.output, semigroup_signature()), [&] { return "r2g purity: " + s; });
    check(r, print(a.output) == print(b.output) && to_json(a).dump() == to_json(b).dump(),
          [&] { return "r2g determinism: " + s; });
  }
  auto one = group_to_semiring(parse("exists X. X = X", semigroup_signature()), 3);
  check(r, one.variables.size() == 1 && one.variables[0].generated.size() == 9,
        [] { return "single variable gives 9 entry variables"; });
  std::size_t disjuncts = count_or_children(one.output);
  check(r, disjuncts == 512, [&] { return "G(X) has " + std::to_string(disjuncts) + " disjuncts"; });
  note(r, "g2r of exists X. X = X at n = 3: " + std::to_string(one.node_count) + " nodes, " +
              std::to_string(disjuncts) + " sign sets");
  return r;
}

SuiteResult roundtrip_suite() {
  SuiteResult r = start("AC9", "flat semiring sentences keep their truth value under translation to G3");
  r.limit_seconds = 600;
  for (const auto& row : roundtrip(roundtrip_corpus())) {
    check(r, row.match(), [&] {
      return row.sentence + ": source " + std::to_string(row.source_truth) + ", target " + std::to_string(row.target_truth);
    });
    std::ostringstream os;
    os << (row.source_truth ? "true " : "false") << "  " << row.sentence << "  (" << row.target_nodes << " nodes, "
       << row.target_seconds << " s)";
    note(r, os.str());
  }
  return r;
}

// -- flatten equivalence ------------------------------------------------------------------

Term random_term(std::mt19937_64& rng, int depth, const std::vector<std::string>& scope) {
  std::uniform_int_distribution<int> coin(0, 9);
  if (depth == 0 || coin(rng) < 4) {
    if (coin(rng) < 2) return Term::constant(coin(rng) < 5 ? "0" : "1");
    return Term::var(scope[std::uniform_int_distribution<std::size_t>(0, scope.size() - 1)(rng)]);
  }
  Term a = random_term(rng, depth - 1, scope), b = random_term(rng, depth - 1, scope);
  return coin(rng) < 5 ? a + b : a * b;
}

Formula random_body(std::mt19937_64& rng, int depth, const std::vector<std::string>& scope) {
  std::uniform_int_distribution<int> pick(0, 5);
  int k = depth == 0 ? 0 : pick(rng);
  switch (k) {
    case 2: return Formula::negation(random_body(rng, depth - 1, scope));
    case 3: return Formula::conj({random_body(rng, depth - 1, scope), random_body(rng, depth - 1, scope)});
    case 4: return Formula::disj({random_body(rng, depth - 1, scope), random_body(rng, depth - 1, scope)});
    case 5: return Formula::implies(random_body(rng, depth - 1, scope), random_body(rng, depth - 1, scope));
    default: return eq(random_term(rng, 2, scope), random_term(rng, 2, scope));
  }
}

// Up to three quantifiers over x, y, z and a body of connective depth <= 2.
Formula random_sentence(std::mt19937_64& rng) {
  const std::vector<std::string> all{"x", "y", "z"};
  std::size_t k = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
  std::vector<std::string> scope(all.begin(), all.begin() + static_cast<long>(k));
  Formula f = random_body(rng, 2, scope);
  for (std::size_t i = k; i-- > 0;)
    f = std::uniform_int_distribution<int>(0, 1)(rng) ? Formula::exists(scope[i], f) : Formula::forall(scope[i], f);
  return f;
}

SuiteResult flatten_equivalence(const SuiteOptions& o) {
  SuiteResult r = start("AC10", "bounded truth is unchanged by flatten on 20 random semiring sentences");
  std::mt19937_64 rng(o.seed);
  auto m = enum_semiring(2, 2);
  std::size_t truths = 0;
  for (int i = 0; i < 20; ++i) {
    Formula s = random_sentence(rng);
    Formula f = flatten(s);
    bool a = eval(m, s, {}, pinned()).truth;
    bool b = eval(m, f, {}, pinned()).truth;
    truths += a;
    check(r, a == b && is_flat(f), [&] { return print(s); });
  }
  note(r, std::to_string(truths) + " of 20 true on {0, 1/2, 1, 3/2, 2}");
  return r;
}

}  // namespace

const std::vector<std::string>& suite_ids() {
  static const std::vector<std::string> ids{"AC1", "AC2", "AC3", "AC4", "AC5", "AC6", "AC7", "AC8", "AC9", "AC10"};
  return ids;
}

SuiteResult run_suite(const std::string& id, const SuiteOptions& opts) {
  auto t0 = Clock::now();
  SuiteResult r;
  if (id == "AC1") r = generator_words();
  else if (id == "AC2") r = sigma_table();
  else if (id == "AC3") r = transvection_identity(opts);
  else if (id == "AC4") r = involutions();
  else if (id == "AC5") r = invertibles_and_diagonals();
  else if (id == "AC6") r = size_sentence();
  else if (id == "AC7") r = transvection_arithmetic();
  else if (id == "AC8") r = translation_purity();
  else if (id == "AC9") r = roundtrip_suite();
  else if (id == "AC10") r = flatten_equivalence(opts);
  else throw std::invalid_argument("unknown suite " + id);
  r.seconds = since(t0);
  return r;
}

std::string summary_line(const SuiteResult& r) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << (r.passed() ? "PASS " : "FAIL ") << r.id << " " << r.title << ": " << (r.checks - r.failures) << "/"
     << r.checks << " checks, " << r.seconds << " s";
  if (r.limit_seconds > 0) {
    os.precision(0);
    os << " (limit " << r.limit_seconds << " s)";
  }
  return os.str();
}

nlohmann::json to_json(const SuiteResult& r) {
  return {{"id", r.id},           {"title", r.title},     {"passed", r.passed()},
          {"checks", r.checks},   {"failures", r.failures}, {"seconds", r.seconds},
          {"limit_seconds", r.limit_seconds}, {"notes", r.notes}};
}

// -- round trip -----------------------------------------------------------------------------

const std::vector<RoundtripItem>& roundtrip_corpus() {
  static const std::vector<RoundtripItem> c{
      {"forall x. forall y. x + y = y + x", {}},
      {"forall x. forall y. x * y = y * x", {}},
      {"forall x. forall y. forall z. (x + y) + z = x + (y + z)", {}},
      {"forall x. forall y. forall z. (x * y) * z = x * (y * z)", {}},
      {"exists x. x + x = 1", {{"x", {q(1, 2)}}}},
      {"exists x. x * x = x", {}},
      {"exists x. (x * x = x and x != 0)", {{"x", {q(1)}}}},
      {"exists x. (x * x = x and x != 0 and x != 1)", {}},
      {"forall x. x * 1 = x", {}},
      {"exists x. x + 1 = 0", {}},
  };
  return c;
}

std::vector<RoundtripRow> roundtrip(const std::vector<RoundtripItem>& corpus, const RoundtripConfig& cfg) {
  const auto values = semiring_elements(cfg.max_numerator, cfg.max_denominator);
  SemiringModel src(values);
  GroupEnumOptions o;
  for (const auto& v : values)
    if (v > 0) o.extra.push_back(B(cfg.n, 1, 2, v));
  auto g = enum_group(cfg.n, cfg.entry_values.empty() ? halves() : cfg.entry_values, 0, o);
  const ElemId m1 = g.intern(S(generator_rho(cfg.n))), m2 = g.intern(S(generator_tau(cfg.n)));

  std::vector<RoundtripRow> rows;
  for (const auto& item : corpus) {
    RoundtripRow row;
    row.sentence = item.sentence;
    Formula flat = flatten(parse(item.sentence, semiring_signature()));
    row.flat = print(flat);

    Hints sh;
    for (const auto& [v, xs] : item.hints)
      for (const auto& x : xs) sh[v].push_back(src.intern(x));
    auto t0 = Clock::now();
    row.source_truth = eval(src, flat, sh, pinned()).truth;
    row.source_seconds = since(t0);

    auto rep = semiring_to_group(flat, cfg.n);
    row.target_nodes = rep.node_count;
    Hints gh{{rep.frame.at(0), {m1}}, {rep.frame.at(1), {m2}}};
    for (const auto& [v, xs] : item.hints)
      for (const auto& m : rep.variables)
        if (m.source == v)
          for (const auto& x : xs) gh[m.generated.at(0)].push_back(g.intern(B(cfg.n, 1, 2, x)));
    t0 = Clock::now();
    row.target_truth = eval(g, rep.output, gh, pinned()).truth;
    row.target_seconds = since(t0);
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json to_json(const RoundtripRow& r) {
  return {{"sentence", r.sentence},         {"flat", r.flat},
          {"source_truth", r.source_truth}, {"target_truth", r.target_truth},
          {"match", r.match()},             {"source_seconds", r.source_seconds},
          {"target_seconds", r.target_seconds}, {"target_nodes", r.target_nodes}};
}

// -- corpora ----------------------------------------------------------------------------------

const std::vector<std::string>& group_corpus() {
  static const std::vector<std::string> c{
      "exists X. X = X",
      "forall X. X * 1 = X",
      "forall X. 1 * X = X",
      "forall X. forall Y. X * Y = Y * X",
      "exists X. exists Y. X * Y != Y * X",
      "exists X. (X * X = 1 and X != 1)",
      "forall X. exists Y. X * Y = 1",
      "forall X. (X * X = X implies X = 1)",
      "exists X. forall Y. X * Y = Y * X",
      "forall X. forall Y. forall Z. X * (Y * Z) = (X * Y) * Z",
      "exists X. X * X * X = 1",
      "forall X. (X = 1 or X * X != 1)",
      "exists X. (X != 1 and X * X * X = 1)",
      "forall X. forall Y. (X * Y = 1 implies Y * X = 1)",
      "exists X. exists Y. (X * Y = Y and X != 1)",
      "not exists X. X * X = X * X * X and X != 1",
      "forall X. exists Y. Y * Y = X",
      "exists X. (X * X != X and X * X * X * X = X * X)",
      "forall X. forall Y. (X * X = Y * Y implies X = Y)",
      "exists X. exists Y. exists Z. (X * Y = Z and Y * X != Z)",
  };
  return c;
}

const std::vector<std::string>& semiring_corpus() {
  static const std::vector<std::string> c{
      "exists x. x = x",
      "forall x. forall y. x + y = y + x",
      "forall x. forall y. x * y = y * x",
      "exists x. x + x = 1",
      "exists x. x * x = x",
      "forall x. x * 1 = x",
      "forall x. x + 0 = x",
      "exists x. x + 1 = 0",
      "forall x. forall y. forall z. x * (y + z) = x * y + x * z",
      "forall x. (x != 0 implies exists y. x * y = 1)",
      "exists x. exists y. (x != y and x * x = y * y)",
      "forall x. exists y. y + y = x",
      "exists x. (x * x = x and x != 0 and x != 1)",
      "forall x. forall y. (x + y = 0 implies x = 0)",
      "exists x. x * x = 1 + 1",
      "forall x. forall y. (x * y = 0 implies (x = 0 or y = 0))",
      "exists x. (x + x = x * x and x != 0)",
      "forall x. x * 0 = 0",
      "forall x. forall y. exists z. (x + z = y or y + z = x)",
      "exists x. exists y. exists z. (x + y = z and x * y = z and x != 0)",
  };
  return c;
}

}  // namespace elemeq
