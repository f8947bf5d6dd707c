#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "elemeq/algebra.hpp"

using namespace elemeq;

namespace {

Rational q(long p, long d = 1) {
  Rational r(p, d);
  r.canonicalize();
  return r;
}

Matrix perm3(std::vector<int> cycle) { return Matrix::permutation(Permutation::cycle(3, cycle)); }

// Independent oracle: inverse via the adjugate with rational arithmetic.
std::optional<Matrix> adjugate_inverse3(const Matrix& a) {
  auto m = [&](int i, int j) { return a.at(i, j); };
  Rational det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                 m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                 m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
  if (det == 0) return std::nullopt;
  Matrix r(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      r.at(i, j) = (m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0)) / det;
    }
  return r;
}

}  // namespace

TEST_CASE("rationals parse, print and reduce") {
  CHECK(parse_rational("2/4") == q(1, 2));
  CHECK(to_string(parse_rational("-6/4")) == "-3/2");
  CHECK(to_string(parse_rational("3")) == "3");
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("abc"));
  CHECK(hash_value(q(1, 2)) == hash_value(parse_rational("2/4")));
}

TEST_CASE("mat_mul examples") {
  CHECK(Matrix::transvection(3, 1, 2, q(1, 2)) * Matrix::transvection(3, 1, 2, q(1, 2)) ==
        Matrix::transvection(3, 1, 2, 1));
  CHECK(perm3({1, 2, 3}) * perm3({1, 2}) == perm3({1, 3}));
  Matrix b13 = Matrix::transvection(3, 1, 3, 2), b32 = Matrix::transvection(3, 3, 2, 3);
  CHECK(b13 * b32 == b32 * b13 * Matrix::transvection(3, 1, 2, 6));
  CHECK_THROWS_AS(Matrix::identity(3) * Matrix::identity(4), DimensionMismatch);
}

TEST_CASE("mat_inverse examples") {
  Matrix inv = mat_inverse(Matrix::transvection(3, 1, 2, 1));
  CHECK(inv.at(0, 1) == -1);
  Matrix expect = Matrix::identity(3);
  expect.at(0, 1) = -1;
  CHECK(inv == expect);
  CHECK(mat_inverse(Matrix::diagonal({2, q(1, 2), 1})) == Matrix::diagonal({q(1, 2), 2, 1}));
  CHECK_THROWS_AS(mat_inverse(Matrix(3, std::vector<Rational>(9, Rational(1)))), Singular);
  CHECK_THROWS_AS(mat_inverse(Matrix(3)), Singular);
}

TEST_CASE("mat_inverse agrees with the adjugate on random matrices") {
  std::mt19937 rng(11);
  const Rational vals[] = {0, q(1, 2), 1, 2, 3};
  int invertible = 0;
  while (invertible < 200) {
    std::vector<Rational> e;
    for (int k = 0; k < 9; ++k) e.push_back(vals[rng() % 5]);
    Matrix a(3, e);
    auto oracle = adjugate_inverse3(a);
    auto got = try_inverse(a);
    REQUIRE(got.has_value() == oracle.has_value());
    if (!got) continue;
    ++invertible;
    CHECK(*got == *oracle);
    CHECK((a * *got).is_identity());
    CHECK((*got * a).is_identity());
  }
}

TEST_CASE("mat_inverse at n = 4 and 5") {
  std::mt19937 rng(3);
  for (std::size_t n : {4u, 5u}) {
    int done = 0;
    while (done < 30) {
      std::vector<Rational> e;
      for (std::size_t k = 0; k < n * n; ++k) e.push_back(q(static_cast<long>(rng() % 7), 1 + rng() % 3));
      Matrix a(n, e);
      auto inv = try_inverse(a);
      if (!inv) continue;
      ++done;
      CHECK((a * *inv).is_identity());
      CHECK((*inv * a).is_identity());
    }
  }
}

TEST_CASE("transvections add") {
  std::mt19937 rng(5);
  for (int k = 0; k < 100; ++k) {
    Rational x = q(rng() % 50, 1 + rng() % 20), y = q(rng() % 50, 1 + rng() % 20);
    int i = 1 + rng() % 3, j = 1 + (i + rng() % 2) % 3;
    CHECK(Matrix::transvection(3, i, j, x) * Matrix::transvection(3, i, j, y) ==
          Matrix::transvection(3, i, j, x + y));
  }
}

TEST_CASE("membership predicates") {
  Matrix b = Matrix::transvection(3, 1, 2, 1);
  CHECK(g_n_member(b));
  CHECK_FALSE(gamma_n_member(b));
  CHECK(gamma_n_member(Matrix::diagonal({2, q(1, 2), 1}) * perm3({1, 2})));
  CHECK_FALSE(g_n_member(Matrix(3)));
  Matrix neg = Matrix::identity(3);
  neg.at(0, 1) = -1;
  CHECK_FALSE(g_n_member(neg));
}

TEST_CASE("monomial_decompose") {
  Matrix a = Matrix::diagonal({2, q(1, 2), 1}) * perm3({1, 2});
  auto f = monomial_decompose(a);
  REQUIRE(f);
  CHECK(f->diag == std::vector<Rational>{2, q(1, 2), 1});
  CHECK(f->sigma == Permutation::transposition(3, 1, 2));
  CHECK_FALSE(monomial_decompose(Matrix::transvection(3, 1, 2, 1)));
  auto id = monomial_decompose(Matrix::identity(3));
  REQUIRE(id);
  CHECK(id->diag == std::vector<Rational>{1, 1, 1});
  CHECK(id->sigma.is_identity());
  for (const auto& s : all_permutations(4)) {
    std::vector<Rational> d{1, 2, q(1, 3), 5};
    auto g = monomial_decompose(Matrix::diagonal(d) * Matrix::permutation(s));
    REQUIRE(g);
    CHECK(g->sigma == s);
    CHECK(g->diag == d);
  }
}

TEST_CASE("Gamma_3 members of a nonnegative sample are monomial") {
  const Rational vals[] = {0, q(1, 2), 1, 2};
  std::mt19937 rng(17);
  int gamma = 0;
  for (int k = 0; k < 20000; ++k) {
    std::vector<Rational> e;
    for (int t = 0; t < 9; ++t) e.push_back(vals[rng() % 4]);
    Matrix a(3, e);
    if (!gamma_n_member(a)) continue;
    ++gamma;
    CHECK(monomial_decompose(a).has_value());
  }
  CHECK(gamma > 0);
}

TEST_CASE("composition convention S_sigma S_pi = S_{sigma o pi}") {
  for (std::size_t n : {3u, 4u})
    for (const auto& s : all_permutations(n))
      for (const auto& p : all_permutations(n)) {
        CHECK(Matrix::permutation(s) * Matrix::permutation(p) == Matrix::permutation(s * p));
        for (int x = 1; x <= static_cast<int>(n); ++x) CHECK((s * p)(x) == s(p(x)));
      }
}

TEST_CASE("permutation syntax") {
  Permutation r = Permutation::parse("(1,2,3)", 3);
  CHECK(r == generator_rho(3));
  CHECK(r.one_line() == std::vector<int>{2, 3, 1});
  CHECK(Permutation::parse("[2,3,1]", 3) == r);
  CHECK(Permutation::parse("()", 4).is_identity());
  CHECK(Permutation::parse("(1,2)(3,4)", 4).to_string() == "(1,2)(3,4)");
  CHECK(r.to_string() == "(1,2,3)");
  CHECK(r.order() == 3);
  CHECK(r.inverse() == r.power(2));
  CHECK_THROWS(Permutation(std::vector<int>{0, 0, 1}));
  CHECK_THROWS(Permutation::parse("[1,2]", 3));
}

TEST_CASE("perm_word reproduces every permutation") {
  CHECK(perm_word(Permutation::identity(3)).empty());
  for (std::size_t n : {3u, 4u, 5u})
    for (const auto& s : all_permutations(n)) {
      GenWord w = perm_word(s);
      CHECK(eval_word(w) == s);
      for (auto [i, j] : w.pairs) {
        CHECK(i >= 0);
        CHECK(i < 2);
        CHECK(j >= 0);
        CHECK(j < static_cast<int>(n));
      }
    }
  // rho * tau is the witness for (1,3).
  GenWord witness{3, {{0, 1}, {1, 0}}};
  CHECK(eval_word(witness) == Permutation::transposition(3, 1, 3));
  CHECK_THROWS(perm_word(Permutation::identity(2)));
}

TEST_CASE("shortest words follow the breadth-first listing") {
  auto words = bfs_words(3);
  REQUIRE(words.size() == 6);
  std::vector<std::string> listing;
  for (const auto& [p, w] : words) listing.push_back(w.to_string());
  CHECK(listing == std::vector<std::string>{"1", "rho", "tau", "rho^2", "rho tau", "tau rho"});
  CHECK(words[4].first == Permutation::transposition(3, 1, 3));
  CHECK(words[5].first == Permutation::transposition(3, 2, 3));
  for (std::size_t n : {3u, 4u, 5u}) {
    for (const auto& s : all_permutations(n)) {
      GenWord w = shortest_word(s);
      CHECK(eval_word(w) == s);
      CHECK(w.length() <= perm_word(s).length());
    }
  }
}

TEST_CASE("normalize merges powers") {
  GenWord w{3, {{0, 2}, {0, 2}, {2, 0}, {1, 3}}};
  GenWord v = normalize(w);
  CHECK(eval_word(v) == eval_word(w));
  CHECK(v.pairs == std::vector<std::pair<int, int>>{{0, 1}, {1, 0}});
}

TEST_CASE("conjugate examples") {
  Matrix a = Matrix::diagonal({2, 3, 5}) * perm3({1, 2});
  CHECK(conjugate(Matrix::identity(3), a) == a);
  Matrix s_rho = Matrix::permutation(generator_rho(3));
  CHECK(conjugate(s_rho, s_rho) == s_rho);
  // rho' = rho^{i-1} with i = 2 sends (2,3) to (1,2).
  Matrix rho1 = Matrix::permutation(generator_rho(3).power(1));
  CHECK(conjugate(mat_inverse(rho1), perm3({2, 3})) == perm3({1, 2}));
  CHECK_THROWS_AS(conjugate(Matrix(3), a), Singular);
  // S_sigma E_ij S_sigma^-1 = E_{sigma(i) sigma(j)}
  for (const auto& s : all_permutations(3))
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j)
        CHECK(conjugate(Matrix::permutation(s), Matrix::elementary(3, i, j)) ==
              Matrix::elementary(3, s(i), s(j)));
}

TEST_CASE("sym_table") {
  SymTable t2 = sym_table(2);
  REQUIRE(t2.elements.size() == 2);
  CHECK(t2.elements[0].is_identity());
  CHECK(t2.gamma == std::vector<std::vector<int>>{{0, 1}, {1, 0}});
  SymTable t3 = sym_table(3);
  int rho = t3.index_of(generator_rho(3)), tau = t3.index_of(generator_tau(3));
  CHECK(t3.gamma[rho][tau] == t3.index_of(Permutation::transposition(3, 1, 3)));
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      for (int k = 0; k < 6; ++k) CHECK(t3.gamma[t3.gamma[i][j]][k] == t3.gamma[i][t3.gamma[j][k]]);
  for (std::size_t m : {3u, 4u}) {
    SymTable t = sym_table(m);
    for (std::size_t i = 0; i < t.elements.size(); ++i)
      for (std::size_t j = 0; j < t.elements.size(); ++j)
        CHECK(Matrix::permutation(t.elements[i]) * Matrix::permutation(t.elements[j]) ==
              Matrix::permutation(t.elements[t.gamma[i][j]]));
  }
  CHECK_THROWS(sym_table(7));
}

TEST_CASE("matrix JSON") {
  Matrix a = Matrix::diagonal({q(1, 2), 1, 2}) * perm3({1, 3});
  nlohmann::json j = a.to_json();
  CHECK(j[0][2] == "1/2");
  CHECK(Matrix::from_json(j) == a);
  CHECK_THROWS(Matrix::from_json(nlohmann::json::parse(R"([["1","0"],["0"]])")));
}
