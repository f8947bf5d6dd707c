#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>
#include <random>

#include "elemeq/logic.hpp"

using namespace elemeq;

namespace {

const Signature& SG = semigroup_signature();
const Signature& SR = semiring_signature();

Formula random_formula(std::mt19937& rng, int depth, std::vector<std::string>& scope) {
  auto pick = [&](int k) { return static_cast<int>(rng() % static_cast<unsigned>(k)); };
  std::function<Term(int)> term = [&](int d) -> Term {
    int c = pick(d > 0 ? 5 : 3);
    if (c == 0 || scope.empty()) return Term::constant(pick(2) ? "1" : "0");
    if (c <= 2) return Term::var(scope[pick(static_cast<int>(scope.size()))]);
    Term l = term(d - 1), r = term(d - 1);
    return c == 3 ? l + r : l * r;
  };
  int c = depth > 0 ? pick(7) : 0;
  switch (c) {
    case 0: return eq(term(2), term(2));
    case 1: return Formula::negation(random_formula(rng, depth - 1, scope));
    case 2:
    case 3: {
      std::vector<Formula> cs;
      int k = 2 + pick(2);
      for (int i = 0; i < k; ++i) cs.push_back(random_formula(rng, depth - 1, scope));
      return c == 2 ? Formula::conj(cs) : Formula::disj(cs);
    }
    case 4: return Formula::implies(random_formula(rng, depth - 1, scope), random_formula(rng, depth - 1, scope));
    default: {
      std::string v = "x" + std::to_string(scope.size());
      scope.push_back(v);
      Formula body = random_formula(rng, depth - 1, scope);
      scope.pop_back();
      return c == 5 ? Formula::exists(v, body) : Formula::forall(v, body);
    }
  }
}

void collect_atoms(const Formula& f, std::vector<Formula>& out) {
  if (f.kind() == Formula::Kind::Equal) {
    out.push_back(f);
    return;
  }
  for (const auto& c : f.children()) collect_atoms(c, out);
}

}  // namespace

TEST_CASE("parse reads the grammar directly") {
  Formula f = parse("exists X. X * X = X", SG);
  REQUIRE(f.kind() == Formula::Kind::Exists);
  CHECK(f.var() == "X");
  const Formula& b = f.body();
  REQUIRE(b.kind() == Formula::Kind::Equal);
  CHECK(b.lhs() == Term::var("X") * Term::var("X"));
  CHECK(b.rhs() == Term::var("X"));

  Formula g = parse("forall x. x * 1 = x", SR);
  REQUIRE(g.kind() == Formula::Kind::Forall);
  CHECK(g.body().lhs().rhs().is_const());
  CHECK(g.body().lhs().rhs().name() == "1");
}

TEST_CASE("parse reports the error position") {
  try {
    parse("exists X. (X *", SG);
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.position() == std::string("exists X. (X *").size());
  }
  CHECK_THROWS_AS(parse("exists X. X + X = X", SG), UnknownSymbol);
  CHECK_THROWS_AS(parse("exists x. x = 0", SG), UnknownSymbol);
  CHECK_THROWS_AS(parse("exists x. x = $", SR), UnknownSymbol);
  CHECK_THROWS_AS(parse("exists x. x = ", SR), SyntaxError);
  CHECK_THROWS_AS(parse("x = y extra", SR), SyntaxError);
}

TEST_CASE("precedence, associativity and sugar") {
  Formula f = parse("x + y * z = x * y + z", SR);
  CHECK(f.lhs() == Term::var("x") + Term::var("y") * Term::var("z"));
  CHECK(f.rhs() == Term::var("x") * Term::var("y") + Term::var("z"));
  CHECK(parse("a * b * c = d", SG).lhs() == (Term::var("a") * Term::var("b")) * Term::var("c"));
  CHECK(parse("x != y", SR) == ne(Term::var("x"), Term::var("y")));
  Formula imp = parse("x = y implies y = z implies z = x", SR);
  REQUIRE(imp.kind() == Formula::Kind::Implies);
  CHECK(imp.child(1).kind() == Formula::Kind::Implies);
  Formula mixed = parse("x = y or y = z and z = x", SR);
  REQUIRE(mixed.kind() == Formula::Kind::Or);
  CHECK(mixed.child(1).kind() == Formula::Kind::And);
  Formula paren = parse("(x + y) * z = 1", SR);
  CHECK(paren.lhs().lhs() == Term::var("x") + Term::var("y"));
  Formula grp = parse("(x = y)", SR);
  CHECK(grp.kind() == Formula::Kind::Equal);
}

TEST_CASE("print has a fixed canonical layout") {
  CHECK(print(parse("exists X. X = X", SG)) == "exists X. X = X");
  CHECK(print(eq(Term::var("X"), Term::var("X"))) == "X = X");
  Formula a = eq(Term::var("a"), Term::var("b"));
  Formula b = eq(Term::var("b"), Term::var("c"));
  Formula c = eq(Term::var("c"), Term::var("a"));
  CHECK(print(Formula::conj({a, b, c})) == "(a = b and b = c and c = a)");
  CHECK(print(Formula::negation(Formula::exists("x", a))) == "not (exists x. a = b)");
  CHECK(print(Term::var("x") * (Term::var("y") * Term::var("z"))) == "x * (y * z)");
  CHECK(print(Term::var("x") * Term::var("y") + Term::var("z")) == "x * y + z");
}

TEST_CASE("free variables") {
  Formula f = parse("forall x. exists y. x + y = z", SR);
  CHECK(free_vars(f) == std::set<std::string>{"z"});
  CHECK_FALSE(is_sentence(f));
  CHECK(is_sentence(parse("forall z. forall x. exists y. x + y = z", SR)));
  CHECK(all_vars(f) == std::set<std::string>{"x", "y", "z"});
  CHECK(quantifier_depth(f) == 2);
  Formula sh = parse("(exists x. x = y) and x = 1", SR);
  CHECK(free_vars(sh) == std::set<std::string>{"x", "y"});
}

TEST_CASE("n-ary connectives") {
  Formula a = eq(Term::var("a"), Term::var("b"));
  CHECK(Formula::conj({a}) == a);
  CHECK(Formula::disj({a}) == a);
  CHECK_THROWS(Formula::conj({}));
  Formula dup = Formula::exists(std::vector<std::string>{"p", "q"}, a);
  CHECK(dup.var() == "p");
  CHECK(dup.body().var() == "q");
}

TEST_CASE("node_count counts formula and term nodes") {
  CHECK(node_count(parse("x = y", SR)) == 3);
  CHECK(node_count(parse("exists x. x * x = x", SG)) == 6);
}

TEST_CASE("round trip on a random corpus") {
  std::mt19937 rng(20240601);
  for (int i = 0; i < 500; ++i) {
    std::vector<std::string> scope;
    Formula f = random_formula(rng, 4, scope);
    std::string s = print(f);
    Formula g = parse(s, SR);
    INFO(s);
    CHECK(g == f);
    CHECK(print(g) == s);
    CHECK(free_vars(g) == free_vars(f));
  }
}

TEST_CASE("NameSupply avoids used names") {
  NameSupply ns({"X", "X1"});
  CHECK(ns.fresh("X") == "X2");
  CHECK(ns.fresh("Y") == "Y");
  CHECK(ns.fresh("Y") == "Y1");
}

TEST_CASE("flatten examples") {
  CHECK(print(flatten(parse("forall x. forall y. x + y = y + x", SR))) ==
        "forall x. forall y. exists u. exists v. (u = x + y and v = y + x and u = v)");
  CHECK(print(flatten(parse("exists x. x + x = 1", SR))) ==
        "exists x. exists u. exists o. (u = x + x and o = 1 and u = o)");
  Formula flat = parse("forall x. exists y. (y = x * x and x = 1)", SR);
  CHECK(flatten(flat) == flat);
  CHECK(is_flat(flat));
  CHECK(print(flatten(parse("exists x. x * x + x = 0", SR))) ==
        "exists x. exists u. exists v. exists o. (u = x * x and v = u + x and o = 0 and v = o)");
  CHECK(print(flatten(parse("exists x. x = x * x + 1", SR))) ==
        "exists x. exists u. exists o. (u = x * x and o = 1 and x = u + o)");
  CHECK(print(flatten(parse("exists x. 1 + x = x", SR))) == "exists x. exists o. (o = 1 and x = o + x)");
}

TEST_CASE("flatten output atoms are flat and fresh names do not capture") {
  std::mt19937 rng(7);
  for (int i = 0; i < 300; ++i) {
    std::vector<std::string> scope;
    Formula f = random_formula(rng, 3, scope);
    Formula g = flatten(f);
    CHECK(is_flat(g));
    CHECK(free_vars(g) == free_vars(f));
    std::vector<Formula> atoms;
    collect_atoms(g, atoms);
    for (const auto& a : atoms) CHECK(is_flat_atom(a));
    CHECK(flatten(g) == g);
  }
  Formula clash = parse("exists u. exists o. u + o = 1", SR);
  Formula g = flatten(clash);
  CHECK(free_vars(g).empty());
  CHECK(print(g) == "exists u. exists o. exists v. exists o1. (v = u + o and o1 = 1 and v = o1)");
}

TEST_CASE("uses_only scans the signature") {
  CHECK(uses_only(parse("exists x. x + x = 1", SR), SR));
  CHECK_FALSE(uses_only(parse("exists x. x + x = 1", SR), SG));
  CHECK(uses_only(parse("exists X. X * X = 1", SG), SR));
}
