#include "elemeq/translate.hpp"

#include <cctype>
#include <cmath>
#include <map>

#include "elemeq/formulas.hpp"

namespace elemeq {

namespace {

const Term& zero() {
  static const Term t = Term::constant("0");
  return t;
}
const Term& unit() {
  static const Term t = Term::constant("1");
  return t;
}

bool is_zero(const Term& t) { return t.is_const() && t.name() == "0"; }
bool is_unit(const Term& t) { return t.is_const() && t.name() == "1"; }

Term sum(const std::vector<Term>& ts) {
  if (ts.empty()) return zero();
  Term r = ts[0];
  for (std::size_t i = 1; i < ts.size(); ++i) r = r + ts[i];
  return r;
}

Term times(const Term& a, const Term& b) {
  if (is_zero(a) || is_zero(b)) return zero();
  if (is_unit(a)) return b;
  if (is_unit(b)) return a;
  return a * b;
}

std::string entry_name(const std::string& base, std::size_t i, std::size_t j, std::size_t n) {
  std::string s = base + "_" + std::to_string(i + 1);
  if (n > 9) s += "_";
  return s + std::to_string(j + 1);
}

// Products of the two halves, shared by every sign block.
struct Products {
  std::vector<Term> xy, yx;  // index (i*n + j)*n + k
};

Products products(const std::vector<Term>& x, const std::vector<Term>& y, std::size_t n) {
  Products p;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        p.xy.push_back(x[i * n + j] * y[j * n + k]);
        p.yx.push_back(y[i * n + j] * x[j * n + k]);
      }
  return p;
}

Formula block(const Products& p, std::size_t n, std::uint64_t mask) {
  auto in_s = [&](std::size_t a, std::size_t b) { return (mask >> (a * n + b)) & 1u; };
  std::vector<Formula> eqs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      for (int half = 0; half < 2; ++half) {
        std::vector<Term> left, right;
        if (i == k) left.push_back(unit());
        for (std::size_t j = 0; j < n; ++j) {
          // XY: the inverse entry is y_jk; YX: it is y_ij.
          bool moved = half == 0 ? in_s(j, k) : in_s(i, j);
          const Term& t = (half == 0 ? p.xy : p.yx)[(i * n + j) * n + k];
          (moved ? left : right).push_back(t);
        }
        eqs.push_back(eq(sum(left), sum(right)));
      }
    }
  return Formula::conj(std::move(eqs));
}

double expanded_size(const Term& t, std::size_t n) {
  if (!t.is_apply()) return 1;
  return static_cast<double>(n) * expanded_size(t.lhs(), n) * expanded_size(t.rhs(), n);
}

double atom_estimate(const Formula& f, std::size_t n) {
  if (f.kind() == Formula::Kind::Equal)
    return static_cast<double>(n * n) * (expanded_size(f.lhs(), n) + expanded_size(f.rhs(), n));
  double m = 0;
  for (const auto& c : f.children()) m = std::max(m, atom_estimate(c, n));
  return m;
}

const Formula* first_non_flat(const Formula& f) {
  if (f.kind() == Formula::Kind::Equal) return is_flat_atom(f) ? nullptr : &f;
  for (const auto& c : f.children())
    if (auto* bad = first_non_flat(c)) return bad;
  return nullptr;
}

class GroupToSemiring {
 public:
  GroupToSemiring(std::size_t n, TranslationReport& r) : n_(n), report_(r) {}

  Formula run(const Formula& s) {
    for (const auto& v : free_vars(s)) {
      scope_[v].push_back(allocate(v).first);
      report_.variables.back().witnesses.clear();  // no guard for free variables
    }
    return tr(s);
  }

 private:
  std::size_t n_;
  TranslationReport& report_;
  NameSupply names_;
  std::map<std::string, std::vector<std::vector<Term>>> scope_;

  bool base_free(const std::string& b) const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if (names_.used(entry_name(b, i, j, n_)) || names_.used(entry_name(b + "i", i, j, n_))) return false;
    return true;
  }

  // Entry terms and inverse-entry names for a fresh copy of v.
  std::pair<std::vector<Term>, std::vector<std::string>> allocate(const std::string& v) {
    std::string lower;
    for (char c : v) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    std::string base = lower;
    for (std::size_t k = 1; !base_free(base); ++k) base = lower + std::to_string(k);
    VariableMapping m{v, {}, {}};
    std::vector<Term> xs;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        m.generated.push_back(names_.fresh(entry_name(base, i, j, n_)));
        m.witnesses.push_back(names_.fresh(entry_name(base + "i", i, j, n_)));
        xs.push_back(Term::var(m.generated.back()));
      }
    auto ws = m.witnesses;
    report_.variables.push_back(std::move(m));
    return {std::move(xs), std::move(ws)};
  }

  Formula tr(const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::Equal: {
        auto of = [&](const std::string& v) -> const std::vector<Term>& { return scope_.at(v).back(); };
        auto l = entry_terms(f.lhs(), n_, of), r = entry_terms(f.rhs(), n_, of);
        std::vector<Formula> eqs;
        for (std::size_t i = 0; i < l.size(); ++i) eqs.push_back(eq(l[i], r[i]));
        return Formula::conj(std::move(eqs));
      }
      case K::Not: return Formula::negation(tr(f.child()));
      case K::And:
      case K::Or: {
        std::vector<Formula> cs;
        for (const auto& c : f.children()) cs.push_back(tr(c));
        return f.kind() == K::And ? Formula::conj(std::move(cs)) : Formula::disj(std::move(cs));
      }
      case K::Implies: return Formula::implies(tr(f.child(0)), tr(f.child(1)));
      case K::Exists:
      case K::Forall: {
        auto [xs, ys] = allocate(f.var());
        std::vector<std::string> xnames;
        for (const auto& x : xs) xnames.push_back(x.name());
        Formula g = invertibility_condition(xs, ys, n_);
        scope_[f.var()].push_back(xs);
        Formula body = tr(f.body());
        scope_[f.var()].pop_back();
        if (f.kind() == K::Exists) return Formula::exists(xnames, Formula::conj({g, body}));
        return Formula::forall(xnames, Formula::implies(g, body));
      }
    }
    throw std::logic_error("unreachable");
  }
};

std::string capitalized(const std::string& v) {
  std::string s = v;
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

class SemiringToGroup {
 public:
  SemiringToGroup(std::size_t n, TranslationReport& r) : lib_(n), report_(r) {
    names_.reserve(lib_.m1().name());
    names_.reserve(lib_.m2().name());
  }

  Formula run(const Formula& s) {
    Formula body = tr(s);
    const Term& m1 = lib_.m1();
    const Term& m2 = lib_.m2();
    report_.frame = {m1.name(), m2.name()};
    return Formula::exists({m1.name(), m2.name()}, Formula::conj({lib_.cycle(m1), lib_.trans(m1, m2), body}));
  }

 private:
  FormulaLib lib_;
  TranslationReport& report_;
  NameSupply names_;
  std::map<std::string, std::string> map_;

  Term matrix(const std::string& v) {
    auto it = map_.find(v);
    if (it == map_.end()) {
      it = map_.emplace(v, names_.fresh(capitalized(v))).first;
      report_.variables.push_back({v, {it->second}, {}});
    }
    return Term::var(it->second);
  }

  Formula atom(const Formula& f) {
    Term x = matrix(f.lhs().name());
    const Term& r = f.rhs();
    if (r.is_var()) return eq(x, matrix(r.name()));
    if (r.is_const()) return r.name() == "0" ? eq(x, unit()) : lib_.main_unit(x);
    Term y = matrix(r.lhs().name()), z = matrix(r.rhs().name());
    return r.name() == "+" ? lib_.addit(y, z, x) : lib_.multipl(y, z, x);
  }

  Formula tr(const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::Equal: return atom(f);
      case K::Not: return Formula::negation(tr(f.child()));
      case K::And:
      case K::Or: {
        std::vector<Formula> cs;
        for (const auto& c : f.children()) cs.push_back(tr(c));
        return f.kind() == K::And ? Formula::conj(std::move(cs)) : Formula::disj(std::move(cs));
      }
      case K::Implies: return Formula::implies(tr(f.child(0)), tr(f.child(1)));
      case K::Exists:
      case K::Forall: {
        Term x = matrix(f.var());
        Formula guard = lib_.main12(x);
        Formula body = tr(f.body());
        if (f.kind() == K::Exists) return Formula::exists(x.name(), Formula::conj({guard, body}));
        return Formula::forall(x.name(), Formula::implies(guard, body));
      }
    }
    throw std::logic_error("unreachable");
  }
};

TranslationReport make_report(Direction d, std::size_t n) {
  return TranslationReport{d, n, {}, {}, eq(unit(), unit()), 0, 0};
}

void finish(TranslationReport& r, Formula out) {
  r.node_count = node_count(out);
  r.quantifier_depth = quantifier_depth(out);
  r.output = std::move(out);
}

}  // namespace

std::string to_string(Direction d) { return d == Direction::GroupToSemiring ? "g2r" : "r2g"; }

Direction parse_direction(const std::string& s) {
  if (s == "g2r") return Direction::GroupToSemiring;
  if (s == "r2g") return Direction::SemiringToGroup;
  throw std::invalid_argument("direction must be g2r or r2g, got '" + s + "'");
}

BlowupRefused::BlowupRefused(double estimate, std::size_t cap)
    : std::runtime_error("translation refused: estimated " + std::to_string(static_cast<long long>(estimate)) +
                         " nodes exceeds cap " + std::to_string(cap)),
      estimate_(estimate),
      cap_(cap) {}

NotFlat::NotFlat(const std::string& atom)
    : std::invalid_argument("atom is not flat: " + atom + " (run flatten first)"), atom_(atom) {}

std::vector<Term> entry_terms(const Term& t, std::size_t n,
                              const std::function<const std::vector<Term>&(const std::string&)>& entries_of) {
  if (t.is_var()) return entries_of(t.name());
  if (t.is_const()) {
    if (t.name() != "1") throw std::invalid_argument("unknown semigroup constant " + t.name());
    std::vector<Term> id;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) id.push_back(i == j ? unit() : zero());
    return id;
  }
  if (t.name() != "*") throw std::invalid_argument("unknown semigroup operation " + t.name());
  auto a = entry_terms(t.lhs(), n, entries_of), b = entry_terms(t.rhs(), n, entries_of);
  std::vector<Term> c;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<Term> terms;
      for (std::size_t j = 0; j < n; ++j) {
        Term p = times(a[i * n + j], b[j * n + k]);
        if (!is_zero(p)) terms.push_back(p);
      }
      c.push_back(sum(terms));
    }
  return c;
}

Formula sign_block(const std::vector<Term>& x, const std::vector<Term>& y, std::size_t n, std::uint64_t mask) {
  return block(products(x, y, n), n, mask);
}

Formula invertibility_condition(const std::vector<Term>& x, const std::vector<std::string>& y, std::size_t n) {
  if (n * n >= 64) throw std::invalid_argument("sign sets need n^2 < 64");
  std::vector<Term> ys;
  for (const auto& v : y) ys.push_back(Term::var(v));
  Products p = products(x, ys, n);
  std::vector<Formula> blocks;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n * n)); ++mask) blocks.push_back(block(p, n, mask));
  return Formula::exists(y, Formula::disj(std::move(blocks)));
}

TranslationReport group_to_semiring(const Formula& s, std::size_t n, const TranslateOptions& opts) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (!uses_only(s, semigroup_signature())) throw std::invalid_argument("g2r input must be a semigroup formula");
  double g = static_cast<double>(n * n) * std::pow(2.0, static_cast<double>(n * n));
  double est = std::max(g, atom_estimate(s, n));
  if (est > static_cast<double>(opts.blowup_cap)) throw BlowupRefused(est, opts.blowup_cap);
  TranslationReport r = make_report(Direction::GroupToSemiring, n);
  GroupToSemiring t(n, r);
  finish(r, t.run(s));
  return r;
}

TranslationReport semiring_to_group(const Formula& s, std::size_t n) {
  if (n < 3) throw std::invalid_argument("r2g needs n >= 3");
  if (!uses_only(s, semiring_signature())) throw std::invalid_argument("r2g input must be a semiring formula");
  if (auto* bad = first_non_flat(s)) throw NotFlat(print(*bad));
  TranslationReport r = make_report(Direction::SemiringToGroup, n);
  SemiringToGroup t(n, r);
  finish(r, t.run(s));
  return r;
}

nlohmann::json to_json(const TranslationReport& r) {
  nlohmann::json vars = nlohmann::json::array();
  for (const auto& v : r.variables) {
    nlohmann::json j{{"source", v.source}, {"generated", v.generated}};
    if (!v.witnesses.empty()) j["witnesses"] = v.witnesses;
    vars.push_back(std::move(j));
  }
  nlohmann::json j{{"direction", to_string(r.direction)},
                   {"n", r.n},
                   {"variables", vars},
                   {"output", print(r.output)},
                   {"node_count", r.node_count},
                   {"quantifier_depth", r.quantifier_depth}};
  if (!r.frame.empty()) j["frame"] = r.frame;
  if (r.direction == Direction::GroupToSemiring) j["sign_sets_per_guard"] = std::uint64_t{1} << (r.n * r.n);
  return j;
}

}  // namespace elemeq
