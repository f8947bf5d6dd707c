#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "elemeq/modelcheck.hpp"

using namespace elemeq;

namespace {

const Signature& SG = semigroup_signature();
const Signature& SR = semiring_signature();

Rational q(long p, long d = 1) {
  Rational r(p, d);
  r.canonicalize();
  return r;
}

std::vector<Rational> halves() { return {q(1, 2), q(1), q(2)}; }

Matrix swap12_scaled() {
  return Matrix::diagonal({q(2), q(1, 2), q(1)}) * Matrix::permutation(Permutation::transposition(3, 1, 2));
}

}  // namespace

TEST_CASE("enum_semiring examples") {
  auto m = semiring_elements(2, 2);
  CHECK(m == std::vector<Rational>{q(0), q(1, 2), q(1), q(3, 2), q(2)});
  CHECK(semiring_elements(1, 1) == std::vector<Rational>{q(0), q(1)});
  auto big = semiring_elements(4, 4);
  CHECK(std::count(big.begin(), big.end(), q(1, 2)) == 1);
  CHECK(std::count(big.begin(), big.end(), q(2)) == 1);
  CHECK(std::is_sorted(big.begin(), big.end()));
  CHECK_THROWS(semiring_elements(0, 1));
  auto model = enum_semiring(2, 2);
  CHECK(model.domain_size() == 5);
}

TEST_CASE("enum_group examples") {
  auto perms = group_elements(3, {q(1)}, 0);
  CHECK(perms.size() == 6);
  for (const auto& p : perms) CHECK(monomial_decompose(p).has_value());
  CHECK(perms.front() == Matrix::identity(3));

  auto mono = group_elements(3, halves(), 0);
  // Brute-force count of distinct D.S products.
  std::set<std::string> distinct;
  for (const auto& a : halves())
    for (const auto& b : halves())
      for (const auto& c : halves())
        for (const auto& s : all_permutations(3))
          distinct.insert((Matrix::diagonal({a, b, c}) * Matrix::permutation(s)).to_string());
  CHECK(mono.size() == distinct.size());
  CHECK(mono.size() == 162);
  for (const auto& m : mono) CHECK(gamma_n_member(m));

  GroupEnumOptions with_b;
  with_b.transvections = true;
  auto tv = group_elements(3, {q(1)}, 0, with_b);
  CHECK(tv.size() == 12);
  CHECK(std::count(tv.begin(), tv.end(), Matrix::transvection(3, 1, 2, q(1))) == 1);

  GroupEnumOptions capped;
  capped.cap = 10;
  CHECK_THROWS_AS(group_elements(3, halves(), 0, capped), DomainExplosion);
  CHECK_THROWS(group_elements(2, {q(1)}, 0));

  auto closed = group_elements(3, {q(1)}, 1, with_b);
  CHECK(closed.size() > tv.size());
  for (const auto& m : closed) CHECK(g_n_member(m));
}

TEST_CASE("eval finds the half in the bounded semiring") {
  auto model = enum_semiring(4, 4);
  auto r = eval(model, parse("exists x. x + x = 1", SR));
  CHECK(r.truth);
  REQUIRE(r.witnesses.size() == 1);
  CHECK(r.witnesses[0].var == "x");
  CHECK(model.value(r.witnesses[0].value) == q(1, 2));
  CHECK(r.domain_size == model.domain_size());

  auto small = enum_semiring(1, 1);
  CHECK_FALSE(eval(small, parse("exists x. x + x = 1", SR)).truth);
  auto f = eval(small, parse("forall x. x * x = x + x", SR));
  CHECK_FALSE(f.truth);
  REQUIRE(f.counterexample.size() == 1);
  CHECK(small.value(f.counterexample[0].value) == q(1));
}

TEST_CASE("bounded semiring facts") {
  auto m = enum_semiring(3, 3);
  CHECK(eval(m, parse("forall x. forall y. x + y = y + x", SR)).truth);
  auto inv = eval(m, parse("forall x. (x != 0 implies exists y. x * y = 1)", SR));
  CHECK_FALSE(inv.truth);
  REQUIRE(inv.counterexample.size() == 1);
  CHECK(m.value(inv.counterexample[0].value) == q(4, 3));
  auto unit = enum_semiring(1, 1);
  CHECK(eval(unit, parse("forall x. (x != 0 implies exists y. x * y = 1)", SR)).truth);
  CHECK_FALSE(eval(m, parse("forall x. exists y. x + y = 0", SR)).truth);
  CHECK(eval(m, parse("exists x. forall y. x * y = x", SR)).truth);
  CHECK(eval(m, parse("not (exists x. x + 1 = 0)", SR)).truth);
}

TEST_CASE("signature mismatch and free variables") {
  auto m = enum_semiring(1, 1);
  auto g = enum_group(3, {q(1)}, 0);
  CHECK_THROWS_AS(eval(g, parse("exists x. x + x = 1", SR)), SignatureMismatch);
  (void)m;
  Evaluator ev(g);
  CHECK_THROWS(ev.eval(parse("X = 1", SG)));
  CHECK_THROWS(ev.eval_with(parse("X = Y", SG), {{"X", g.domain()[0]}}));
  CHECK(ev.holds(parse("X = 1", SG), {{"X", g.constant(0)}}));
}

TEST_CASE("Inv holds exactly on involutions of the bounded domain") {
  auto g = enum_group(3, halves(), 0);
  Formula inv = parse("M * M = 1 and M != 1", SG);
  auto rep = characterize(g, inv, [&](ElemId e) {
    const Matrix& m = g.value(e);
    return m * m == Matrix::identity(3) && m != Matrix::identity(3);
  });
  CHECK(rep.pass());
  CHECK(rep.count_true() > 0);
  auto e = g.find(swap12_scaled());
  REQUIRE(e.has_value());
  Evaluator ev(g);
  CHECK(ev.holds(inv, {{"M", *e}}));
  CHECK_FALSE(ev.holds(inv, {{"M", g.constant(0)}}));
}

TEST_CASE("Invert characterizes membership in the inverse-closed part") {
  Formula invert = parse("exists X. (M * X = 1 and X * M = 1)", SG);
  GroupEnumOptions opts;
  opts.transvections = true;
  auto g = enum_group(3, halves(), 0, opts);
  auto rep = characterize(g, invert, [&](ElemId e) { return gamma_n_member(g.value(e)); });
  CHECK(rep.pass());
  CHECK(rep.count_true() == 162);

  auto b = g.find(Matrix::transvection(3, 1, 2, q(1)));
  REQUIRE(b.has_value());
  Evaluator plain(g);
  CHECK_FALSE(plain.holds(invert, {{"M", *b}}));

  // The inverse I - E12 lies in GL_3 only; widening the quantifier domain to
  // all of GL_3 makes the witness available.
  std::vector<Matrix> wide;
  for (ElemId e : g.domain()) wide.push_back(g.value(e));
  GroupModel gl(3, wide);
  ElemId bid = *gl.find(Matrix::transvection(3, 1, 2, q(1)));
  Matrix binv = mat_inverse(gl.value(bid));
  CHECK_FALSE(g_n_member(binv));
  ElemId binv_id = gl.intern(binv);
  Evaluator ext(gl, Hints{{"X", {binv_id}}});
  auto r = ext.eval_with(invert, {{"M", bid}});
  CHECK(r.truth);
  REQUIRE(r.witnesses.size() == 1);
  CHECK(r.witnesses[0].source == WitnessSource::External);
  CHECK(r.external_witnesses == std::vector<ElemId>{binv_id});
}

TEST_CASE("pinned values outside the domain") {
  auto m = enum_semiring(1, 1);
  Formula f = parse("exists x. x * (1 + 1) = 1", SR);
  CHECK_FALSE(eval(m, f).truth);
  EvalOptions o;
  o.admit_pinned = true;
  auto r = eval(m, f, {}, o);
  CHECK(r.truth);
  REQUIRE(r.witnesses.size() == 1);
  CHECK(r.witnesses[0].source == WitnessSource::Pinned);
  CHECK(m.value(r.witnesses[0].value) == q(1, 2));
  // A pinned value must still be a carrier element.
  CHECK_FALSE(eval(m, parse("exists x. x + 1 = 0", SR), {}, o).truth);
}

TEST_CASE("hints are tried first and witnesses re-verify") {
  auto g = enum_group(3, halves(), 0);
  Formula f = parse("exists X. exists Y. (X * Y = Y * X and X * X = 1 and X != 1 and Y != X and Y != 1)", SG);
  ElemId s = *g.find(swap12_scaled());
  Hints h{{"X", {s}}};
  auto r = eval(g, f, h);
  REQUIRE(r.truth);
  REQUIRE(r.witnesses.size() == 2);
  CHECK(r.witnesses[0].value == s);
  CHECK(r.witnesses[0].source == WitnessSource::Hint);
  CHECK(r.hints_used >= 1);
  const Matrix& x = g.value(r.witnesses[0].value);
  const Matrix& y = g.value(r.witnesses[1].value);
  CHECK(x * y == y * x);
  CHECK(x * x == Matrix::identity(3));
  CHECK(x != y);

  auto j = nlohmann::json::parse(R"({"X": [[["0","1","0"],["1","0","0"],["0","0","1"]]]})");
  Hints parsed = parse_hints(g, j);
  REQUIRE(parsed.at("X").size() == 1);
  CHECK(g.value(parsed.at("X")[0]) == Matrix::permutation(Permutation::transposition(3, 1, 2)));
  CHECK_THROWS(parse_hints(g, nlohmann::json::array()));
}

TEST_CASE("determinism") {
  auto g = enum_group(3, halves(), 0);
  Formula f = parse("exists A. exists B. (A * B != B * A and A * A = 1 and B * B = 1)", SG);
  auto r1 = eval(g, f);
  auto g2 = enum_group(3, halves(), 0);
  auto r2 = eval(g2, f);
  REQUIRE(r1.truth);
  REQUIRE(r1.witnesses.size() == r2.witnesses.size());
  for (std::size_t i = 0; i < r1.witnesses.size(); ++i) {
    CHECK(g.value(r1.witnesses[i].value) == g2.value(r2.witnesses[i].value));
    CHECK(r1.witnesses[i].source == r2.witnesses[i].source);
  }
  CHECK(r1.stats.candidates == r2.stats.candidates);
}

TEST_CASE("parallel counterexamples equal the sequential ones") {
  auto g = enum_group(3, halves(), 0);
  Formula body = parse("M * M = 1 or exists Y. (Y * M = M * Y and Y != M and Y != 1 and Y * Y = M)", SG);
  std::vector<std::size_t> seq;
  Evaluator ev(g);
  for (std::size_t i = 0; i < g.domain_size(); ++i)
    if (!ev.holds(body, {{"M", g.domain()[i]}})) seq.push_back(i);
  CHECK_FALSE(seq.empty());
  CHECK(counterexamples(g, body, {}, {}, 1) == seq);
  CHECK(counterexamples(g, body, {}, {}, 4) == seq);
}

TEST_CASE("existential monotonicity under domain growth") {
  std::mt19937 rng(11);
  const char* sentences[] = {
      "exists x. x + x = 1",
      "exists x. exists y. (x * y = 1 and x != y)",
      "exists x. x * x = x + x + x",
      "exists x. exists y. x + y = x * y",
  };
  for (const char* s : sentences) {
    Formula f = parse(s, SR);
    bool prev = false;
    for (long b = 1; b <= 4; ++b) {
      auto m = enum_semiring(b, b);
      bool t = eval(m, f).truth;
      INFO(s << " bound " << b);
      CHECK((!prev || t));
      prev = t;
    }
  }
}

TEST_CASE("search options do not change truth") {
  std::vector<std::string> sentences = {
      "forall x. forall y. forall z. x * (y + z) = x * y + x * z",
      "exists x. exists y. exists z. (x + y + z = 1 and x * y * z != 0)",
      "forall x. exists y. exists z. (y + z = x and y = z)",
      "exists x. exists y. (x != y and x * x = y * y)",
      "forall x. forall y. (x * y = 1 implies y * x = 1)",
      "forall x. exists y. (y != 0 and (x = y + y or x = y * y or x = y + 1))",
      "forall x. forall y. exists z. (z * z = z and (x = z * y or y = z * x))",
  };
  auto m = enum_semiring(3, 2);
  for (const auto& s : sentences) {
    Formula f = parse(s, SR);
    EvalOptions fast;
    EvalOptions slow;
    slow.symmetry = false;
    slow.memo_max_free = 0;
    slow.split_disjunctions = false;
    INFO(s);
    CHECK(eval(m, f, {}, fast).truth == eval(m, f, {}, slow).truth);
    // Flattening names intermediate values, which the bounded domain only
    // contains when pinned values are admitted.
    EvalOptions pinned;
    pinned.admit_pinned = true;
    CHECK(eval(m, f, {}, pinned).truth == eval(m, flatten(f), {}, pinned).truth);
  }
}

TEST_CASE("symmetric blocks are detected and agree with plain search") {
  auto g = enum_group(3, halves(), 0);
  Formula f = parse("exists A. exists B. exists C. (A != B and B != C and A != C and A * A = 1 and B * B = 1 and C * C = 1)",
                    SG);
  EvalOptions on, off;
  off.symmetry = false;
  auto a = eval(g, f, {}, on);
  auto b = eval(g, f, {}, off);
  CHECK(a.truth == b.truth);
  CHECK(a.truth);
  CHECK(a.stats.symmetric_blocks == 1);
  Formula none = parse("exists A. exists B. exists C. (A != B and B != C and A != C and A * B = C and A * A = 1)", SG);
  CHECK(eval(g, none, {}, on).truth == eval(g, none, {}, off).truth);
}

TEST_CASE("shadowed binders and renaming") {
  auto m = enum_semiring(2, 2);
  Formula f = parse("exists x. (x + x = 1 and exists x. x = 1 + 1)", SR);
  CHECK(eval(m, f).truth);
  Formula g = parse("forall y. exists x. (x = y and exists y. y + y = x)", SR);
  EvalOptions o;
  CHECK(eval(m, g, {}, o).truth == false);
  o.symmetry = false;
  o.memo_max_free = 0;
  CHECK(eval(m, g, {}, o).truth == false);
  Formula h = parse("forall y. exists x. (x = y and exists y. y * 1 = x)", SR);
  CHECK(eval(m, h).truth);
}

TEST_CASE("conjugated models keep enumeration order") {
  auto g = enum_group(3, {q(1)}, 0);
  Matrix n = Matrix::diagonal({q(2), q(1), q(1, 2)});
  auto c = g.conjugated(n);
  REQUIRE(c.domain_size() == g.domain_size());
  for (std::size_t i = 0; i < g.domain_size(); ++i)
    CHECK(c.value(c.domain()[i]) == conjugate(n, g.value(g.domain()[i])));
}
