#include "elemeq/formulas.hpp"

#include <stdexcept>

namespace elemeq {

namespace {

Term one() { return Term::constant("1"); }
Term var(const std::string& s) { return Term::var(s); }

Formula commutes(const Term& a, const Term& b) { return eq(a * b, b * a); }

// y is a two-sided inverse of w.
Formula inverse_pair(const Term& w, const Term& y) { return Formula::conj({eq(w * y, one()), eq(y * w, one())}); }

std::size_t factorial(std::size_t k) {
  std::size_t f = 1;
  for (std::size_t i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

std::string to_string(Provenance p) { return p == Provenance::Verbatim ? "verbatim" : "reconstructed"; }

FormulaLib::FormulaLib(std::size_t n, std::string m1, std::string m2)
    : n_(n), m1_(Term::var(std::move(m1))), m2_(Term::var(std::move(m2))) {
  if (n < 3) throw std::invalid_argument("formulas need n >= 3");
  if (m1_ == m2_) throw std::invalid_argument("frame variables must be distinct");
}

Term FormulaLib::power(const Term& t, std::size_t k) {
  if (k == 0) return one();
  Term r = t;
  for (std::size_t i = 1; i < k; ++i) r = r * t;
  return r;
}

Term FormulaLib::word(const Permutation& sigma) const {
  if (sigma.n() != n_) throw std::invalid_argument("permutation of the wrong degree");
  GenWord w = shortest_word(sigma);
  std::vector<Term> letters;
  for (auto [i, j] : w.pairs) {
    for (int k = 0; k < i; ++k) letters.push_back(m2_);
    for (int k = 0; k < j; ++k) letters.push_back(m1_);
  }
  if (letters.empty()) return one();
  Term r = letters[0];
  for (std::size_t k = 1; k < letters.size(); ++k) r = r * letters[k];
  return r;
}

// Frame names are reserved everywhere so that no binder shadows them.
NameSupply FormulaLib::names(std::initializer_list<Term> args) const {
  NameSupply ns;
  for (const auto& a : args) ns.reserve(free_vars(a));
  ns.reserve(m1_.name());
  ns.reserve(m2_.name());
  return ns;
}

std::string FormulaLib::key(const char* name, std::initializer_list<Term> args) const {
  std::string k = name;
  for (const auto& a : args) k += "|" + print(a);
  return k;
}

#define ELEMEQ_CACHED(NAME, ...)                     \
  const std::string cache_key = key(NAME, {__VA_ARGS__}); \
  if (auto it = cache_.find(cache_key); it != cache_.end()) return it->second

#define ELEMEQ_STORE(F) return cache_.emplace(cache_key, (F)).first->second

// -- frame-free ---------------------------------------------------------------

Formula FormulaLib::invert(const Term& m) {
  ELEMEQ_CACHED("Invert", m);
  auto ns = names({m});
  Term x = var(ns.fresh("X"));
  ELEMEQ_STORE(Formula::exists(x.name(), inverse_pair(m, x)));
}

Formula FormulaLib::inv(const Term& m) {
  ELEMEQ_CACHED("Inv", m);
  ELEMEQ_STORE(Formula::conj({eq(m * m, one()), ne(m, one())}));
}

Formula FormulaLib::comcon(const Term& a) {
  ELEMEQ_CACHED("ComCon", a);
  auto ns = names({a});
  Term m = var(ns.fresh("M")), nn = var(ns.fresh("N")), y = var(ns.fresh("Y"));
  Formula conjugate = Formula::exists(
      {nn.name(), y.name()}, Formula::conj({eq(nn * y, one()), eq(y * nn, one()), eq(m, nn * a * y)}));
  ELEMEQ_STORE(Formula::conj({invert(a), Formula::forall(m.name(), Formula::implies(conjugate, commutes(a, m)))}));
}

Formula FormulaLib::ncominv(const Term& a) {
  ELEMEQ_CACHED("NComInv", a);
  auto ns = names({a});
  Term m = var(ns.fresh("M"));
  ELEMEQ_STORE(Formula::conj(
      {comcon(a), Formula::forall(m.name(), Formula::implies(inv(m), Formula::negation(commutes(a, m))))}));
}

Formula FormulaLib::diag(const Term& m) {
  ELEMEQ_CACHED("Diag", m);
  auto ns = names({m});
  Term a = var(ns.fresh("A"));
  ELEMEQ_STORE(Formula::exists(a.name(), Formula::conj({ncominv(a), eq(m * a, a * m), invert(m)})));
}

Formula FormulaLib::cdiag(const Term& m) {
  ELEMEQ_CACHED("CDiag", m);
  auto ns = names({m});
  Term a = var(ns.fresh("A"));
  ELEMEQ_STORE(Formula::conj({invert(m), Formula::forall(a.name(), Formula::implies(diag(a), commutes(a, m)))}));
}

Formula FormulaLib::size_sentence() {
  ELEMEQ_CACHED("Size");
  const std::size_t count = factorial(n_);
  auto ns = names({});
  std::vector<Term> xs;
  std::vector<std::string> xnames;
  for (std::size_t i = 1; i <= count; ++i) {
    xnames.push_back(ns.fresh("X" + std::to_string(i)));
    xs.push_back(var(xnames.back()));
  }
  Term m = var(ns.fresh("M")), x = var(ns.fresh("X"));
  std::vector<Formula> distinct;
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < count; ++j)
      if (i != j) distinct.push_back(ne(xs[i], m * xs[j]));
  std::vector<Formula> cover;
  for (const auto& xi : xs) cover.push_back(eq(x, m * xi));
  Formula body = Formula::conj(
      {Formula::forall(m.name(), Formula::implies(diag(m), Formula::conj(distinct))),
       Formula::forall(x.name(), Formula::implies(invert(x), Formula::exists(m.name(), Formula::conj(
                                                                                     {diag(m), Formula::disj(cover)}))))});
  ELEMEQ_STORE(Formula::exists(xnames, body));
}

Formula FormulaLib::cd_block(const Term& m, std::size_t m_dim) {
  const SymTable tbl = sym_table(m_dim);
  const std::size_t count = tbl.elements.size();
  auto ns = names({m});
  std::vector<Term> xs;
  std::vector<std::string> xnames;
  for (std::size_t i = 1; i <= count; ++i) {
    xnames.push_back(ns.fresh("X" + std::to_string(i)));
    xs.push_back(var(xnames.back()));
  }
  Term a = var(ns.fresh("A")), x = var(ns.fresh("X"));
  std::vector<Formula> parts;
  for (const auto& xi : xs) parts.push_back(eq(xi * m, m * xi));
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < count; ++j)
      if (i != j)
        parts.push_back(Formula::forall(a.name(), Formula::implies(diag(a), ne(xs[i], xs[j] * a))));
  for (const auto& xi : xs) parts.push_back(invert(xi));
  std::vector<Formula> cover;
  for (const auto& xi : xs) cover.push_back(eq(x, a * xi));
  parts.push_back(Formula::forall(
      x.name(), Formula::implies(Formula::conj({invert(x), eq(x * m, m * x)}),
                                 Formula::exists(a.name(), Formula::conj({diag(a), Formula::disj(cover)})))));
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < count; ++j) {
      const Term& target = xs[static_cast<std::size_t>(tbl.gamma[i][j])];
      parts.push_back(Formula::exists(a.name(), Formula::conj({diag(a), eq(xs[i] * xs[j], a * target)})));
    }
  return Formula::exists(xnames, Formula::conj(parts));
}

Formula FormulaLib::cd_one_many(const Term& m) {
  ELEMEQ_CACHED("CDOneMany", m);
  ELEMEQ_STORE(cd_block(m, n_ - 1));
}

Formula FormulaLib::cd_all(const Term& m) {
  ELEMEQ_CACHED("CDAll", m);
  ELEMEQ_STORE(cd_block(m, n_));
}

Formula FormulaLib::dsame(const Term& a, const Term& m) {
  ELEMEQ_CACHED("DSame", a, m);
  auto ns = names({a, m});
  Term y = var(ns.fresh("Y"));
  Formula quotient = Formula::exists(
      y.name(), Formula::conj({inverse_pair(m, y), Formula::disj({cd_one_many(a * y), cd_all(a * y)})}));
  ELEMEQ_STORE(Formula::conj(
      {cd_one_many(a), cd_one_many(m), Formula::disj({cd_one_many(a * m), cd_all(a * m)}), quotient}));
}

Formula FormulaLib::k_one_many(const Term& x, const Term& m) {
  ELEMEQ_CACHED("KOneMany", x, m);
  auto ns = names({x, m});
  Term mp = var(ns.fresh("M'"));
  ELEMEQ_STORE(Formula::exists(mp.name(), Formula::conj({eq(x * mp, mp * x), dsame(mp, m)})));
}

Formula FormulaLib::k_one_many_stmt(const Term& a, const Term& m) {
  ELEMEQ_CACHED("KOneManyStmt", a, m);
  auto ns = names({a, m});
  Term mp = var(ns.fresh("M'"));
  ELEMEQ_STORE(Formula::exists(mp.name(), Formula::conj({eq(m * mp, mp * m), dsame(mp, a)})));
}

Formula FormulaLib::cycle(const Term& m) {
  ELEMEQ_CACHED("Cycle", m);
  auto ns = names({m});
  Term x = var(ns.fresh("X"));
  ELEMEQ_STORE(Formula::conj(
      {eq(power(m, n_), one()),
       Formula::forall(x.name(), Formula::implies(Formula::conj({cdiag(x), eq(m * x, x * m)}), cd_all(x)))}));
}

Formula FormulaLib::trans(const Term& m, const Term& mp) {
  ELEMEQ_CACHED("Trans", m, mp);
  auto ns = names({m, mp});
  Term x = var(ns.fresh("X"));
  ELEMEQ_STORE(Formula::conj({eq(mp * mp, one()), eq(power(m * mp, n_ - 1), one()),
                              Formula::exists(x.name(), Formula::conj({cd_one_many(x), k_one_many_stmt(x, m * mp)}))}));
}

Formula FormulaLib::zd_all(const Term& m) {
  ELEMEQ_CACHED("ZDAll", m);
  auto ns = names({m});
  Term x = var(ns.fresh("X"));
  ELEMEQ_STORE(Formula::forall(x.name(), eq(x * m, m * x)));
}

// -- frame formulas --------------------------------------------------------------

Formula FormulaLib::perm(const Term& m, const Permutation& sigma) {
  ELEMEQ_CACHED("Perm", m, Term::var(sigma.to_string()));
  ELEMEQ_STORE(eq(m, word(sigma)));
}

Formula FormulaLib::perm_all(const Term& m) {
  ELEMEQ_CACHED("PermAll", m);
  std::vector<Formula> ds;
  for (const auto& [sigma, w] : bfs_words(n_)) ds.push_back(perm(m, sigma));
  ELEMEQ_STORE(Formula::disj(ds));
}

Formula FormulaLib::gd_one_many(const Term& m) {
  ELEMEQ_CACHED("GDOneMany", m);
  Term c = m2_ * m1_;
  ELEMEQ_STORE(Formula::conj({eq(c * m, m * c), diag(m)}));
}

Formula FormulaLib::d_one_many(const Term& m) {
  ELEMEQ_CACHED("DOneMany", m);
  ELEMEQ_STORE(Formula::conj({gd_one_many(m), ne(m2_ * m, m * m2_)}));
}

Formula FormulaLib::d_two_many(const Term& m) {
  ELEMEQ_CACHED("DTwoMany", m);
  std::vector<Formula> parts{diag(m), commutes(m, word(Permutation::transposition(n_, 1, 2)))};
  for (std::size_t k = 3; k + 1 <= n_; ++k)
    parts.push_back(commutes(m, word(Permutation::transposition(n_, static_cast<int>(k), static_cast<int>(k + 1)))));
  parts.push_back(Formula::negation(commutes(m, word(Permutation::transposition(n_, 2, 3)))));
  ELEMEQ_STORE(Formula::conj(parts));
}

Formula FormulaLib::d_transp(const Term& m) {
  ELEMEQ_CACHED("DTransp", m);
  auto ns = names({m});
  Term x = var(ns.fresh("X"));
  ELEMEQ_STORE(Formula::conj({eq(m * m, one()), Formula::exists(x.name(), Formula::conj({diag(x), eq(m, x * m2_)}))}));
}

Formula FormulaLib::cd_transp(const Term& m) {
  ELEMEQ_CACHED("CDTransp", m);
  auto ns = names({m});
  Term x = var(ns.fresh("X"));
  ELEMEQ_STORE(Formula::conj({eq(m * m, one()), Formula::exists(x.name(), Formula::conj({cdiag(x), eq(m, x * m2_)}))}));
}

Formula FormulaLib::cd2_dn2(const Term& m) {
  ELEMEQ_CACHED("CD2Dn2", m);
  auto ns = names({m});
  Term x = var(ns.fresh("X"));
  ELEMEQ_STORE(Formula::conj({d_two_many(m), Formula::forall(x.name(), Formula::implies(d_transp(x), eq(x * m, m * x)))}));
}

Formula FormulaLib::g2_cdn2(const Term& m) {
  ELEMEQ_CACHED("G2CDn2", m);
  auto ns = names({m});
  Term x = var(ns.fresh("X")), y = var(ns.fresh("Y"));
  std::vector<Formula> inner{cd_all(y), eq(m * x * y, x * y * m)};
  if (n_ > 3) {
    std::vector<int> tail;
    for (std::size_t k = 3; k <= n_; ++k) tail.push_back(static_cast<int>(k));
    Term w = word(Permutation::cycle(n_, tail));
    inner.push_back(eq(w * m, m * w));
  }
  ELEMEQ_STORE(Formula::forall(x.name(), Formula::implies(cd2_dn2(x), Formula::exists(y.name(), Formula::conj(inner)))));
}

Formula FormulaLib::cdn2_g2(const Term& m) {
  ELEMEQ_CACHED("CDn2G2", m);
  auto ns = names({m});
  Term y = var(ns.fresh("Y"));
  std::vector<int> rev(n_);
  for (std::size_t i = 0; i < n_; ++i) rev[i] = static_cast<int>(n_ - i);
  Term w = word(Permutation::from_one_line(rev));
  ELEMEQ_STORE(Formula::exists(y.name(), Formula::conj({inverse_pair(w, y), g2_cdn2(y * m * w)})));
}

Formula FormulaLib::zd_one_many(const Term& m) {
  ELEMEQ_CACHED("ZDOneMany", m);
  auto ns = names({m});
  Term x = var(ns.fresh("X"));
  std::vector<std::string> ynames;
  std::vector<Formula> parts;
  Term prod = m;
  for (std::size_t l = 2; l <= n_; ++l) {
    ynames.push_back(ns.fresh("Y" + std::to_string(l)));
    Term y = var(ynames.back());
    Term w = word(Permutation::transposition(n_, 1, static_cast<int>(l)));
    parts.push_back(inverse_pair(w, y));
    prod = prod * (w * m * y);
  }
  parts.push_back(zd_all(prod));
  ELEMEQ_STORE(Formula::conj({d_one_many(m), Formula::forall(x.name(), Formula::implies(cdn2_g2(x), eq(m * x, x * m))),
                              Formula::exists(ynames, Formula::conj(parts))}));
}

Formula FormulaLib::main(const Term& m) {
  ELEMEQ_CACHED("Main", m);
  auto ns = names({m});
  Term x = var(ns.fresh("X")), y = var(ns.fresh("Y"));
  Term c = x * m * y;
  Formula square = Formula::exists(
      x.name(), Formula::conj({zd_one_many(x), Formula::exists(y.name(), Formula::conj({inverse_pair(x, y), eq(m * m, c)}))}));
  Formula commuting = Formula::forall(
      x.name(), Formula::implies(zd_one_many(x), Formula::exists(y.name(), Formula::conj({inverse_pair(x, y), eq(m * c, c * m)}))));
  ELEMEQ_STORE(Formula::conj({g2_cdn2(m), square, commuting}));
}

Formula FormulaLib::main_unit_core(const Term& m) {
  ELEMEQ_CACHED("MainUnitCore", m);
  ELEMEQ_STORE(multipl_core(m, m, m));
}

Formula FormulaLib::main_unit(const Term& m) {
  ELEMEQ_CACHED("MainUnit", m);
  ELEMEQ_STORE(Formula::conj({main(m), ne(m, one()), main_unit_core(m)}));
}

Formula FormulaLib::main12(const Term& m) {
  ELEMEQ_CACHED("Main12", m);
  auto ns = names({m});
  Term x = var(ns.fresh("X"));
  ELEMEQ_STORE(Formula::conj({main(m), Formula::forall(x.name(), Formula::implies(main_unit(x), eq(x * m, m * x)))}));
}

Formula FormulaLib::addit(const Term& x1, const Term& x2, const Term& x3) {
  ELEMEQ_CACHED("Addit", x1, x2, x3);
  ELEMEQ_STORE(Formula::conj({main12(x1), main12(x2), main12(x3), eq(x3, x1 * x2)}));
}

Formula FormulaLib::multipl_core(const Term& x1, const Term& x2, const Term& x3) {
  ELEMEQ_CACHED("MultiplCore", x1, x2, x3);
  auto ns = names({x1, x2, x3});
  Term y1 = var(ns.fresh("Y1")), y2 = var(ns.fresh("Y2"));
  Term w1 = word(Permutation::transposition(n_, 2, 3));
  Term w2 = word(Permutation::transposition(n_, 1, 3));
  Term c1 = w1 * x1 * y1;  // B13(x1) when x1 = B12(x1)
  Term c2 = w2 * x2 * y2;  // B32(x2)
  ELEMEQ_STORE(Formula::exists(
      {y1.name(), y2.name()}, Formula::conj({inverse_pair(w1, y1), inverse_pair(w2, y2), eq(c1 * c2, c2 * c1 * x3)})));
}

Formula FormulaLib::multipl(const Term& x1, const Term& x2, const Term& x3) {
  ELEMEQ_CACHED("Multipl", x1, x2, x3);
  ELEMEQ_STORE(Formula::conj({main12(x1), main12(x2), main12(x3), multipl_core(x1, x2, x3)}));
}

#undef ELEMEQ_CACHED
#undef ELEMEQ_STORE

std::vector<CatalogEntry> FormulaLib::catalog() {
  const Term M = var("M"), A = var("A"), X = var("X"), Mp = var("M'");
  const Term X1 = var("X1"), X2 = var("X2"), X3 = var("X3");
  const std::vector<std::string> frame{m1_.name(), m2_.name()};
  const std::vector<std::string> m2_only{m2_.name()};
  const auto V = Provenance::Verbatim;
  const auto R = Provenance::Reconstructed;
  return {
      {"Invert", {}, {"M"}, V, invert(M)},
      {"Inv", {}, {"M"}, V, inv(M)},
      {"ComCon", {}, {"A"}, V, comcon(A)},
      {"NComInv", {}, {"A"}, V, ncominv(A)},
      {"Diag", {}, {"M"}, V, diag(M)},
      {"CDiag", {}, {"M"}, V, cdiag(M)},
      {"Size_n", {}, {}, V, size_sentence()},
      {"CDOneMany", {}, {"M"}, V, cd_one_many(M)},
      {"CDAll", {}, {"M"}, R, cd_all(M)},
      {"DSame", {}, {"A", "M"}, V, dsame(A, M)},
      {"KOneMany", {}, {"X", "M"}, V, k_one_many(X, M)},
      {"KOneManyStmt", {}, {"A", "M"}, R, k_one_many_stmt(A, M)},
      {"Cycle", {}, {"M"}, V, cycle(M)},
      {"Trans", {}, {"M", "M'"}, V, trans(M, Mp)},
      {"Perm", frame, {"M"}, V, perm_all(M)},
      {"GDOneMany", frame, {"M"}, V, gd_one_many(M)},
      {"DOneMany", frame, {"M"}, V, d_one_many(M)},
      {"DTwoMany", frame, {"M"}, R, d_two_many(M)},
      {"DTransp", m2_only, {"M"}, V, d_transp(M)},
      {"CDTransp", m2_only, {"M"}, V, cd_transp(M)},
      {"CD2Dn2", frame, {"M"}, V, cd2_dn2(M)},
      {"G2CDn2", frame, {"M"}, V, g2_cdn2(M)},
      {"CDn2G2", frame, {"M"}, R, cdn2_g2(M)},
      {"ZDAll", {}, {"M"}, V, zd_all(M)},
      {"ZDOneMany", frame, {"M"}, V, zd_one_many(M)},
      {"Main", frame, {"M"}, V, main(M)},
      {"MainUnit", frame, {"M"}, R, main_unit(M)},
      {"Main12", frame, {"M"}, V, main12(M)},
      {"Addit", frame, {"X1", "X2", "X3"}, V, addit(X1, X2, X3)},
      {"Multipl", frame, {"X1", "X2", "X3"}, R, multipl(X1, X2, X3)},
  };
}

}  // namespace elemeq
