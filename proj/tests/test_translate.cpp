#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "elemeq/formulas.hpp"
#include "elemeq/modelcheck.hpp"
#include "elemeq/translate.hpp"

using namespace elemeq;

namespace {

Rational q(long p, long d = 1) {
  Rational r(p, d);
  r.canonicalize();
  return r;
}

Formula group(const char* s) { return parse(s, semigroup_signature()); }
Formula ring(const char* s) { return parse(s, semiring_signature()); }

std::vector<Term> vars(const std::string& base, std::size_t n) {
  std::vector<Term> v;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= n; ++j) v.push_back(Term::var(base + std::to_string(i) + std::to_string(j)));
  return v;
}

// Binds x_ij and y_ij to the entries of the given matrices.
Assignment entries(SemiringModel& r, const Matrix& x, const Matrix& y) {
  Assignment a;
  for (std::size_t i = 0; i < x.n(); ++i)
    for (std::size_t j = 0; j < x.n(); ++j) {
      std::string ij = std::to_string(i + 1) + std::to_string(j + 1);
      a["x" + ij] = r.intern(x.at(i, j));
      a["y" + ij] = r.intern(y.at(i, j));
    }
  return a;
}

Matrix abs_inverse(const Matrix& m) {
  Matrix z = mat_inverse(m);
  for (std::size_t i = 0; i < z.n(); ++i)
    for (std::size_t j = 0; j < z.n(); ++j)
      if (z.at(i, j) < 0) z.at(i, j) = -z.at(i, j);
  return z;
}

// Oracle for a sign set: every nonzero inverse entry is negative iff marked.
bool sign_set_matches(const Matrix& m, std::uint64_t mask) {
  Matrix z = mat_inverse(m);
  const std::size_t n = m.n();
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      bool marked = (mask >> (j * n + k)) & 1u;
      if (z.at(j, k) != 0 && marked != (z.at(j, k) < 0)) return false;
    }
  return true;
}

const Formula* find_or(const Formula& f) {
  if (f.kind() == Formula::Kind::Or) return &f;
  for (const auto& c : f.children())
    if (auto* r = find_or(c)) return r;
  return nullptr;
}

Matrix P(const char* s) { return Matrix::permutation(Permutation::parse(s, 3)); }
Matrix B12(const Rational& x) { return Matrix::transvection(3, 1, 2, x); }

}  // namespace

TEST_CASE("product atoms become entry sums") {
  auto r = group_to_semiring(group("X = Y * Z"), 3);
  const Formula& out = r.output;
  REQUIRE(out.kind() == Formula::Kind::And);
  REQUIRE(out.children().size() == 9);
  CHECK(print(out.child(0)) == "x_11 = y_11 * z_11 + y_12 * z_21 + y_13 * z_31");
  CHECK(print(out.child(5)) == "x_23 = y_21 * z_13 + y_22 * z_23 + y_23 * z_33");

  auto id = group_to_semiring(group("X = 1"), 2);
  CHECK(print(id.output) == "(x_11 = 1 and x_12 = 0 and x_21 = 0 and x_22 = 1)");
  auto unit_right = group_to_semiring(group("X * 1 = X"), 2);
  CHECK(print(unit_right.output.child(1)) == "x_12 = x_12");
}

TEST_CASE("single matrix variable at n = 3") {
  auto r = group_to_semiring(group("exists X. X = X"), 3);
  REQUIRE(r.variables.size() == 1);
  CHECK(r.variables[0].source == "X");
  CHECK(r.variables[0].generated.size() == 9);
  CHECK(r.variables[0].witnesses.size() == 9);
  CHECK(r.variables[0].generated.front() == "x_11");
  CHECK(r.variables[0].witnesses.back() == "xi_33");
  const Formula* g = find_or(r.output);
  REQUIRE(g != nullptr);
  CHECK(g->children().size() == 512);
  CHECK(g->child(0).children().size() == 18);
  CHECK(uses_only(r.output, semiring_signature()));
  CHECK(is_sentence(r.output));
  CHECK(r.quantifier_depth == 18);
  CHECK(r.node_count == node_count(r.output));
  auto j = to_json(r);
  CHECK(j["direction"] == "g2r");
  CHECK(j["sign_sets_per_guard"] == 512);
  CHECK(j["variables"][0]["generated"].size() == 9);
}

TEST_CASE("sign block equations") {
  auto x = vars("x", 3), y = vars("y", 3);
  Formula b0 = sign_block(x, y, 3, 0);
  CHECK(print(b0.child(0)) == "1 = x11 * y11 + x12 * y21 + x13 * y31");
  CHECK(print(b0.child(1)) == "1 = y11 * x11 + y12 * x21 + y13 * x31");
  CHECK(print(b0.child(2)) == "0 = x11 * y12 + x12 * y22 + x13 * y32");
  // (1,2) of the inverse marked: x11 y12 moves left in the XY half, y12 x21
  // in the YX half.
  Formula b = sign_block(x, y, 3, 1u << 1);
  CHECK(print(b.child(2)) == "x11 * y12 = x12 * y22 + x13 * y32");
  CHECK(print(b.child(1)) == "1 + y12 * x21 = y11 * x11 + y13 * x31");
  Formula all = sign_block(x, y, 3, 511);
  CHECK(print(all.child(0)) == "1 + x11 * y11 + x12 * y21 + x13 * y31 = 0");
}

TEST_CASE("sign blocks against exact inverses") {
  auto x = vars("x", 3), y = vars("y", 3);
  SemiringModel r(semiring_elements(2, 2));
  Evaluator ev(r);

  Matrix s12 = P("(1,2)");
  CHECK(ev.holds(sign_block(x, y, 3, 0), entries(r, s12, s12)));

  for (const Matrix& m : {B12(q(1)), Matrix::transvection(3, 3, 1, q(1, 2)),
                          Matrix::transvection(3, 2, 3, q(2)) * B12(q(1)), P("(1,2,3)")}) {
    Matrix a = abs_inverse(m);
    std::size_t matching = 0;
    for (std::uint64_t mask = 0; mask < 512; ++mask) {
      bool want = sign_set_matches(m, mask);
      matching += want;
      INFO(m.to_string() << " mask " << mask);
      CHECK(ev.holds(sign_block(x, y, 3, mask), entries(r, m, a)) == want);
    }
    CHECK(matching > 0);
  }
  // B12(1): only sign sets containing (1,2) and no diagonal position.
  std::size_t with12 = 0;
  for (std::uint64_t mask = 0; mask < 512; ++mask)
    if (ev.holds(sign_block(x, y, 3, mask), entries(r, B12(q(1)), abs_inverse(B12(q(1)))))) {
      CHECK(((mask >> 1) & 1u) == 1u);
      ++with12;
    }
  CHECK(with12 == 32);
}

TEST_CASE("invertibility condition at n = 2") {
  std::vector<Term> x = vars("x", 2);
  std::vector<std::string> y{"y11", "y12", "y21", "y22"};
  Formula g = invertibility_condition(x, y, 2);
  SemiringModel r(semiring_elements(2, 2));
  Evaluator ev(r);
  auto at = [&](std::vector<Rational> e) {
    Assignment a;
    for (std::size_t i = 0; i < 4; ++i) a[x[i].name()] = r.intern(e[i]);
    return ev.holds(g, a);
  };
  CHECK(at({q(1), q(1), q(0), q(1)}));
  CHECK(at({q(2), q(0), q(0), q(1)}));
  CHECK(at({q(1), q(2), q(3), q(4)}));  // inverse [[-2, 1], [3/2, -1/2]]
  CHECK_FALSE(at({q(1), q(1), q(1), q(1)}));
  CHECK_FALSE(at({q(0), q(0), q(0), q(0)}));
  CHECK_FALSE(at({q(2), q(1), q(2), q(1)}));
}

TEST_CASE("g2r names, shadowing and refusal") {
  auto r = group_to_semiring(group("forall X. forall x. exists X. X * x = X"), 2);
  REQUIRE(r.variables.size() == 3);
  CHECK(r.variables[0].generated[0] == "x_11");
  CHECK(r.variables[1].generated[0] == "x1_11");
  CHECK(r.variables[2].generated[0] == "x2_11");
  std::set<std::string> seen;
  for (const auto& v : r.variables) {
    for (const auto& g : v.generated) CHECK(seen.insert(g).second);
    for (const auto& w : v.witnesses) CHECK(seen.insert(w).second);
  }
  CHECK(free_vars(r.output).empty());
  CHECK(print(r.output).find("x2_11 * x1_11") != std::string::npos);

  auto open = group_to_semiring(group("X = Y"), 2);
  CHECK(free_vars(open.output) == std::set<std::string>{"x_11", "x_12", "x_21", "x_22", "y_11", "y_12", "y_21", "y_22"});
  CHECK(open.variables[0].witnesses.empty());

  CHECK_THROWS_AS(group_to_semiring(group("exists X. X = X"), 4), BlowupRefused);
  TranslateOptions big;
  big.blowup_cap = 10;
  CHECK_THROWS_AS(group_to_semiring(group("X = X"), 3, big), BlowupRefused);
  CHECK_NOTHROW(group_to_semiring(group("exists X. X = X"), 1));
  CHECK_THROWS_AS(group_to_semiring(ring("x = y + z"), 3), std::invalid_argument);
}

TEST_CASE("r2g structure") {
  FormulaLib lib(3);
  auto r = semiring_to_group(ring("exists x. x = x"), 3);
  Term X = Term::var("X"), M1 = lib.m1(), M2 = lib.m2();
  Formula want = Formula::exists(
      std::vector<std::string>{"M1", "M2"}, Formula::conj({lib.cycle(M1), lib.trans(M1, M2),
                                   Formula::exists("X", Formula::conj({lib.main12(X), eq(X, X)}))}));
  CHECK(print(r.output) == print(want));
  CHECK(r.frame == std::vector<std::string>{"M1", "M2"});
  CHECK(uses_only(r.output, semigroup_signature()));

  auto atoms = semiring_to_group(ring("forall x. forall y. forall z. (x = y + z or x = y * z or x = 0 or x = 1)"), 3);
  // Past the frame prefix, Cycle and Trans, then three guarded universals.
  const Formula* d = &atoms.output.body().body().child(2);
  for (int k = 0; k < 3; ++k) d = &d->body().child(1);
  REQUIRE(d->kind() == Formula::Kind::Or);
  Term Y = Term::var("Y"), Z = Term::var("Z");
  CHECK(d->child(0) == lib.addit(Y, Z, X));
  CHECK(d->child(1) == lib.multipl(Y, Z, X));
  CHECK(print(d->child(2)) == "X = 1");
  CHECK(d->child(3) == lib.main_unit(X));
}

TEST_CASE("r2g naming avoids collisions") {
  auto r = semiring_to_group(flatten(ring("exists x. exists X. exists m1. exists M1. x = X + M1 * m1")), 3);
  std::set<std::string> names;
  for (const auto& v : r.variables) {
    CHECK(v.generated.size() == 1);
    CHECK(names.insert(v.generated[0]).second);
    CHECK(v.generated[0] != "M1");
    CHECK(v.generated[0] != "M2");
  }
  CHECK(r.variables[0].generated[0] == "X");
  CHECK(r.variables[1].generated[0] == "X1");
  CHECK(is_sentence(r.output));
  CHECK(to_json(r)["frame"].size() == 2);
  CHECK_THROWS_AS(semiring_to_group(ring("exists x. x + x = 1"), 3), NotFlat);
  CHECK_THROWS_AS(semiring_to_group(ring("exists x. x = 1"), 2), std::invalid_argument);
  CHECK_THROWS_AS(semiring_to_group(ring("exists x. x = 1 * x"), 3), NotFlat);
}

TEST_CASE("determinism") {
  for (const char* s : {"forall X. exists Y. X * Y = Y * X", "exists X. (X = 1 or not X * X = X)"}) {
    auto a = group_to_semiring(group(s), 2), b = group_to_semiring(group(s), 2);
    CHECK(print(a.output) == print(b.output));
    CHECK(to_json(a).dump() == to_json(b).dump());
  }
  auto f = flatten(ring("forall x. exists y. x * y = y + 1"));
  CHECK(print(semiring_to_group(f, 3).output) == print(semiring_to_group(f, 3).output));
}

TEST_CASE("r2g truth on the bounded transvection slice") {
  GroupEnumOptions o;
  for (const auto& x : {q(1, 2), q(1), q(2)}) o.extra.push_back(B12(x));
  auto g = enum_group(3, {q(1, 2), q(1), q(2)}, 0, o);
  EvalOptions eo;
  eo.admit_pinned = true;
  Hints frame{{"M1", {g.intern(P("(1,2,3)"))}}, {"M2", {g.intern(P("(1,2)"))}}};

  auto half = semiring_to_group(flatten(ring("exists x. x + x = 1")), 3);
  CHECK(print(flatten(ring("exists x. x + x = 1"))) == "exists x. exists u. exists o. (u = x + x and o = 1 and u = o)");
  Hints h = frame;
  h["X"] = {g.intern(B12(q(1, 2)))};
  auto res = eval(g, half.output, h, eo);
  CHECK(res.truth);
  CHECK(res.hints_used >= 2);

  auto unit = semiring_to_group(flatten(ring("forall x. x * 1 = x")), 3);
  CHECK(eval(g, unit.output, frame, eo).truth);

  auto none = semiring_to_group(flatten(ring("exists x. x + 1 = 0")), 3);
  CHECK_FALSE(eval(g, none.output, frame, eo).truth);
}
