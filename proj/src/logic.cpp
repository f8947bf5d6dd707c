#include "elemeq/logic.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>
#include <unordered_map>

namespace elemeq {

// ---------------------------------------------------------------------------
// Signatures

bool Signature::has_op(std::string_view op) const { return op_index(op) >= 0; }
bool Signature::has_constant(std::string_view c) const { return constant_index(c) >= 0; }

int Signature::op_index(std::string_view op) const {
  for (std::size_t i = 0; i < binary_ops.size(); ++i)
    if (binary_ops[i] == op) return static_cast<int>(i);
  return -1;
}

int Signature::constant_index(std::string_view c) const {
  for (std::size_t i = 0; i < constants.size(); ++i)
    if (constants[i] == c) return static_cast<int>(i);
  return -1;
}

const Signature& semigroup_signature() {
  static const Signature sig{"semigroup", {"*"}, {"1"}};
  return sig;
}

const Signature& semiring_signature() {
  static const Signature sig{"semiring", {"+", "*"}, {"0", "1"}};
  return sig;
}

// ---------------------------------------------------------------------------
// Terms and formulas

Term Term::var(std::string name) {
  return Term(std::make_shared<const Node>(Node{Kind::Var, std::move(name), {}}));
}

Term Term::constant(std::string symbol) {
  return Term(std::make_shared<const Node>(Node{Kind::Const, std::move(symbol), {}}));
}

Term Term::apply(std::string op, Term lhs, Term rhs) {
  return Term(std::make_shared<const Node>(
      Node{Kind::Apply, std::move(op), {std::move(lhs), std::move(rhs)}}));
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.name() != b.name()) return false;
  if (!a.is_apply()) return true;
  return a.lhs() == b.lhs() && a.rhs() == b.rhs();
}

Term operator*(const Term& a, const Term& b) { return Term::apply(std::string(kMul), a, b); }
Term operator+(const Term& a, const Term& b) { return Term::apply(std::string(kAdd), a, b); }

Formula Formula::equal(Term lhs, Term rhs) {
  return Formula(std::make_shared<const Node>(
      Node{Kind::Equal, {std::move(lhs), std::move(rhs)}, {}, {}}));
}

Formula Formula::negation(Formula f) {
  return Formula(std::make_shared<const Node>(Node{Kind::Not, {}, {std::move(f)}, {}}));
}

Formula Formula::conj(std::vector<Formula> fs) {
  if (fs.empty()) throw std::invalid_argument("empty conjunction");
  if (fs.size() == 1) return std::move(fs.front());
  return Formula(std::make_shared<const Node>(Node{Kind::And, {}, std::move(fs), {}}));
}

Formula Formula::disj(std::vector<Formula> fs) {
  if (fs.empty()) throw std::invalid_argument("empty disjunction");
  if (fs.size() == 1) return std::move(fs.front());
  return Formula(std::make_shared<const Node>(Node{Kind::Or, {}, std::move(fs), {}}));
}

Formula Formula::implies(Formula a, Formula b) {
  return Formula(std::make_shared<const Node>(
      Node{Kind::Implies, {}, {std::move(a), std::move(b)}, {}}));
}

Formula Formula::exists(std::string var, Formula body) {
  return Formula(std::make_shared<const Node>(
      Node{Kind::Exists, {}, {std::move(body)}, std::move(var)}));
}

Formula Formula::forall(std::string var, Formula body) {
  return Formula(std::make_shared<const Node>(
      Node{Kind::Forall, {}, {std::move(body)}, std::move(var)}));
}

Formula Formula::exists(const std::vector<std::string>& vars, Formula body) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = exists(*it, std::move(body));
  return body;
}

Formula Formula::forall(const std::vector<std::string>& vars, Formula body) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = forall(*it, std::move(body));
  return body;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Formula::Kind::Equal:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      return a.var() == b.var() && a.body() == b.body();
    default:
      if (a.children().size() != b.children().size()) return false;
      for (std::size_t i = 0; i < a.children().size(); ++i)
        if (a.children()[i] != b.children()[i]) return false;
      return true;
  }
}

// ---------------------------------------------------------------------------
// Traversals

namespace {

void term_vars(const Term& t, std::set<std::string>& out) {
  switch (t.kind()) {
    case Term::Kind::Var: out.insert(t.name()); break;
    case Term::Kind::Const: break;
    case Term::Kind::Apply:
      term_vars(t.lhs(), out);
      term_vars(t.rhs(), out);
      break;
  }
}

class FreeVarCache {
 public:
  const std::set<std::string>& get(const Formula& f) {
    auto it = memo_.find(f.id());
    if (it != memo_.end()) return it->second;
    std::set<std::string> out;
    switch (f.kind()) {
      case Formula::Kind::Equal:
        term_vars(f.lhs(), out);
        term_vars(f.rhs(), out);
        break;
      case Formula::Kind::Exists:
      case Formula::Kind::Forall:
        out = get(f.body());
        out.erase(f.var());
        break;
      default:
        for (const auto& c : f.children()) {
          const auto& s = get(c);
          out.insert(s.begin(), s.end());
        }
    }
    keep_.push_back(f);
    return memo_.emplace(f.id(), std::move(out)).first->second;
  }

 private:
  std::unordered_map<const void*, std::set<std::string>> memo_;
  std::vector<Formula> keep_;
};

}  // namespace

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  term_vars(t, out);
  return out;
}

std::set<std::string> free_vars(const Formula& f) {
  FreeVarCache cache;
  return cache.get(f);
}

std::set<std::string> all_vars(const Formula& f) {
  std::set<std::string> out;
  std::unordered_map<const void*, bool> seen;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (!seen.emplace(g.id(), true).second) return;
    switch (g.kind()) {
      case Formula::Kind::Equal:
        term_vars(g.lhs(), out);
        term_vars(g.rhs(), out);
        break;
      case Formula::Kind::Exists:
      case Formula::Kind::Forall:
        out.insert(g.var());
        walk(g.body());
        break;
      default:
        for (const auto& c : g.children()) walk(c);
    }
  };
  walk(f);
  return out;
}

bool is_sentence(const Formula& f) { return free_vars(f).empty(); }

namespace {

std::size_t term_size(const Term& t) {
  return t.is_apply() ? 1 + term_size(t.lhs()) + term_size(t.rhs()) : 1;
}

}  // namespace

std::size_t node_count(const Formula& f) {
  std::unordered_map<const void*, std::size_t> memo;
  std::function<std::size_t(const Formula&)> go = [&](const Formula& g) -> std::size_t {
    auto it = memo.find(g.id());
    if (it != memo.end()) return it->second;
    std::size_t n = 1;
    if (g.kind() == Formula::Kind::Equal) {
      n += term_size(g.lhs()) + term_size(g.rhs());
    } else {
      for (const auto& c : g.children()) n += go(c);
    }
    memo.emplace(g.id(), n);
    return n;
  };
  return go(f);
}

std::size_t quantifier_depth(const Formula& f) {
  std::unordered_map<const void*, std::size_t> memo;
  std::function<std::size_t(const Formula&)> go = [&](const Formula& g) -> std::size_t {
    auto it = memo.find(g.id());
    if (it != memo.end()) return it->second;
    std::size_t d = 0;
    for (const auto& c : g.children()) d = std::max(d, go(c));
    if (g.is_quantifier()) ++d;
    memo.emplace(g.id(), d);
    return d;
  };
  return go(f);
}

namespace {

bool term_uses_only(const Term& t, const Signature& sig) {
  switch (t.kind()) {
    case Term::Kind::Var: return true;
    case Term::Kind::Const: return sig.has_constant(t.name());
    case Term::Kind::Apply:
      return sig.has_op(t.name()) && term_uses_only(t.lhs(), sig) && term_uses_only(t.rhs(), sig);
  }
  return false;
}

}  // namespace

bool uses_only(const Formula& f, const Signature& sig) {
  std::unordered_map<const void*, bool> memo;
  std::function<bool(const Formula&)> go = [&](const Formula& g) -> bool {
    auto it = memo.find(g.id());
    if (it != memo.end()) return it->second;
    bool ok = true;
    if (g.kind() == Formula::Kind::Equal) {
      ok = term_uses_only(g.lhs(), sig) && term_uses_only(g.rhs(), sig);
    } else {
      for (const auto& c : g.children())
        if (!go(c)) { ok = false; break; }
    }
    memo.emplace(g.id(), ok);
    return ok;
  };
  return go(f);
}

// ---------------------------------------------------------------------------
// Errors

SyntaxError::SyntaxError(std::size_t position, std::string expected)
    : std::runtime_error("syntax error at offset " + std::to_string(position) + ": expected " +
                         expected),
      position_(position),
      expected_(std::move(expected)) {}

UnknownSymbol::UnknownSymbol(std::size_t position, std::string name)
    : std::runtime_error("unknown symbol '" + name + "' at offset " + std::to_string(position)),
      name_(std::move(name)),
      position_(position) {}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { Ident, Number, Star, Plus, Eq, Neq, LParen, RParen, Dot, Forall, Exists, Not,
                 And, Or, Implies, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
    std::size_t start = i;
    if (ident_start(c)) {
      while (i < s.size() && ident_char(s[i])) ++i;
      std::string w(s.substr(start, i - start));
      Tok k = Tok::Ident;
      if (w == "forall") k = Tok::Forall;
      else if (w == "exists") k = Tok::Exists;
      else if (w == "not") k = Tok::Not;
      else if (w == "and") k = Tok::And;
      else if (w == "or") k = Tok::Or;
      else if (w == "implies") k = Tok::Implies;
      out.push_back({k, std::move(w), start});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      out.push_back({Tok::Number, std::string(s.substr(start, i - start)), start});
      continue;
    }
    ++i;
    switch (c) {
      case '*': out.push_back({Tok::Star, "*", start}); break;
      case '+': out.push_back({Tok::Plus, "+", start}); break;
      case '=': out.push_back({Tok::Eq, "=", start}); break;
      case '(': out.push_back({Tok::LParen, "(", start}); break;
      case ')': out.push_back({Tok::RParen, ")", start}); break;
      case '.': out.push_back({Tok::Dot, ".", start}); break;
      case '!':
        if (i < s.size() && s[i] == '=') {
          ++i;
          out.push_back({Tok::Neq, "!=", start});
          break;
        }
        throw SyntaxError(start, "'!='");
      default:
        throw UnknownSymbol(start, std::string(1, c));
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, const Signature& sig) : toks_(tokenize(text)), sig_(sig) {
    match_.assign(toks_.size(), kNone);
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < toks_.size(); ++i) {
      if (toks_[i].kind == Tok::LParen) stack.push_back(i);
      else if (toks_[i].kind == Tok::RParen && !stack.empty()) {
        match_[stack.back()] = i;
        stack.pop_back();
      }
    }
  }

  Formula formula_to_end() {
    Formula f = formula();
    if (peek().kind != Tok::End) fail("end of input");
    return f;
  }

  Term term_to_end() {
    Term t = term();
    if (peek().kind != Tok::End) fail("end of input");
    return t;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  [[noreturn]] void fail(const std::string& expected) const {
    throw SyntaxError(peek().pos, expected);
  }
  void expect(Tok k, const std::string& what) {
    if (peek().kind != k) fail(what);
    next();
  }

  Formula formula() {
    Formula lhs = disjunction();
    if (peek().kind == Tok::Implies) {
      next();
      Formula rhs = formula();
      return Formula::implies(std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Formula disjunction() {
    std::vector<Formula> parts{conjunction()};
    while (peek().kind == Tok::Or) {
      next();
      parts.push_back(conjunction());
    }
    return Formula::disj(std::move(parts));
  }

  Formula conjunction() {
    std::vector<Formula> parts{unary()};
    while (peek().kind == Tok::And) {
      next();
      parts.push_back(unary());
    }
    return Formula::conj(std::move(parts));
  }

  Formula unary() {
    switch (peek().kind) {
      case Tok::Not:
        next();
        return Formula::negation(unary());
      case Tok::Forall:
      case Tok::Exists: {
        bool universal = next().kind == Tok::Forall;
        if (peek().kind != Tok::Ident) fail("variable name");
        std::string v = next().text;
        expect(Tok::Dot, "'.'");
        Formula body = formula();
        return universal ? Formula::forall(std::move(v), std::move(body))
                         : Formula::exists(std::move(v), std::move(body));
      }
      case Tok::LParen: {
        // A parenthesized group followed by an operator or '=' is a term.
        std::size_t close = match_[pos_];
        bool term_group = false;
        if (close != kNone) {
          Tok after = toks_[close + 1].kind;
          term_group = after == Tok::Star || after == Tok::Plus || after == Tok::Eq ||
                       after == Tok::Neq;
        }
        if (!term_group) {
          next();
          Formula f = formula();
          expect(Tok::RParen, "')'");
          return f;
        }
        return atom();
      }
      default:
        return atom();
    }
  }

  Formula atom() {
    Term lhs = term();
    if (peek().kind == Tok::Eq) {
      next();
      return Formula::equal(std::move(lhs), term());
    }
    if (peek().kind == Tok::Neq) {
      next();
      return ne(std::move(lhs), term());
    }
    fail("'='");
  }

  Term term() {
    Term t = product();
    while (peek().kind == Tok::Plus) {
      std::size_t at = peek().pos;
      next();
      if (!sig_.has_op("+")) throw UnknownSymbol(at, "+");
      t = Term::apply("+", std::move(t), product());
    }
    return t;
  }

  Term product() {
    Term t = factor();
    while (peek().kind == Tok::Star) {
      std::size_t at = peek().pos;
      next();
      if (!sig_.has_op("*")) throw UnknownSymbol(at, "*");
      t = Term::apply("*", std::move(t), factor());
    }
    return t;
  }

  Term factor() {
    const Token& tk = peek();
    switch (tk.kind) {
      case Tok::Ident: {
        std::string name = next().text;
        return Term::var(std::move(name));
      }
      case Tok::Number: {
        if (!sig_.has_constant(tk.text)) throw UnknownSymbol(tk.pos, tk.text);
        std::string c = next().text;
        return Term::constant(std::move(c));
      }
      case Tok::LParen: {
        next();
        Term t = term();
        expect(Tok::RParen, "')'");
        return t;
      }
      default:
        fail("term");
    }
  }

  std::vector<Token> toks_;
  std::vector<std::size_t> match_;
  std::size_t pos_ = 0;
  const Signature& sig_;
};

}  // namespace

Formula parse(std::string_view text, const Signature& sig) {
  return Parser(text, sig).formula_to_end();
}

Term parse_term(std::string_view text, const Signature& sig) {
  return Parser(text, sig).term_to_end();
}

// ---------------------------------------------------------------------------
// Printer

namespace {

int precedence(const Term& t) {
  if (!t.is_apply()) return 3;
  return t.name() == "*" ? 2 : 1;
}

void print_term(const Term& t, std::string& out) {
  if (!t.is_apply()) {
    out += t.name();
    return;
  }
  int p = precedence(t);
  bool lp = precedence(t.lhs()) < p;
  bool rp = precedence(t.rhs()) <= p;
  if (lp) out += '(';
  print_term(t.lhs(), out);
  if (lp) out += ')';
  out += ' ';
  out += t.name();
  out += ' ';
  if (rp) out += '(';
  print_term(t.rhs(), out);
  if (rp) out += ')';
}

void print_formula(const Formula& f, std::string& out);

// Operands of connectives: atoms and negations print bare, quantifiers are
// wrapped, n-ary connectives bring their own parentheses.
void print_operand(const Formula& f, std::string& out) {
  if (f.is_quantifier()) {
    out += '(';
    print_formula(f, out);
    out += ')';
  } else {
    print_formula(f, out);
  }
}

void print_formula(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case Formula::Kind::Equal:
      print_term(f.lhs(), out);
      out += " = ";
      print_term(f.rhs(), out);
      break;
    case Formula::Kind::Not:
      out += "not ";
      print_operand(f.child(), out);
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      const char* sep = f.kind() == Formula::Kind::And ? " and " : " or ";
      out += '(';
      bool first = true;
      for (const auto& c : f.children()) {
        if (!first) out += sep;
        first = false;
        print_operand(c, out);
      }
      out += ')';
      break;
    }
    case Formula::Kind::Implies:
      out += '(';
      print_operand(f.child(0), out);
      out += " implies ";
      print_operand(f.child(1), out);
      out += ')';
      break;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      out += f.kind() == Formula::Kind::Exists ? "exists " : "forall ";
      out += f.var();
      out += ". ";
      print_formula(f.body(), out);
      break;
  }
}

}  // namespace

std::string print(const Formula& f) {
  std::string out;
  print_formula(f, out);
  return out;
}

std::string print(const Term& t) {
  std::string out;
  print_term(t, out);
  return out;
}

// ---------------------------------------------------------------------------
// Flattening

bool is_flat_atom(const Formula& atom) {
  if (atom.kind() != Formula::Kind::Equal || !atom.lhs().is_var()) return false;
  const Term& r = atom.rhs();
  if (r.is_var() || r.is_const()) return true;
  return r.lhs().is_var() && r.rhs().is_var();
}

bool is_flat(const Formula& f) {
  if (f.kind() == Formula::Kind::Equal) return is_flat_atom(f);
  for (const auto& c : f.children())
    if (!is_flat(c)) return false;
  return true;
}

std::string NameSupply::fresh(const std::string& base) {
  if (used_.insert(base).second) return base;
  for (std::size_t k = 1;; ++k) {
    std::string cand = base + std::to_string(k);
    if (used_.insert(cand).second) return cand;
  }
}

namespace {

class Flattener {
 public:
  explicit Flattener(const Formula& f) : names_(all_vars(f)) {}

  Formula run(const Formula& f) {
    switch (f.kind()) {
      case Formula::Kind::Equal: return atom(f);
      case Formula::Kind::Not: return Formula::negation(run(f.child()));
      case Formula::Kind::And:
      case Formula::Kind::Or: {
        std::vector<Formula> cs;
        for (const auto& c : f.children()) cs.push_back(run(c));
        return f.kind() == Formula::Kind::And ? Formula::conj(std::move(cs))
                                              : Formula::disj(std::move(cs));
      }
      case Formula::Kind::Implies: return Formula::implies(run(f.child(0)), run(f.child(1)));
      case Formula::Kind::Exists: return Formula::exists(f.var(), run(f.body()));
      case Formula::Kind::Forall: return Formula::forall(f.var(), run(f.body()));
    }
    return f;
  }

 private:
  Formula atom(const Formula& a) {
    if (is_flat_atom(a)) return a;
    Formula swapped = eq(a.rhs(), a.lhs());
    if (is_flat_atom(swapped)) return swapped;

    fresh_.clear();
    defs_.clear();
    Formula last = a;
    if (a.lhs().is_var() || a.rhs().is_var()) {
      const Term& v = a.lhs().is_var() ? a.lhs() : a.rhs();
      const Term& other = a.lhs().is_var() ? a.rhs() : a.lhs();
      // other is compound (otherwise the atom would already be flat)
      Term l = name(other.lhs());
      Term r = name(other.rhs());
      last = eq(v, Term::apply(other.name(), l, r));
    } else {
      Term l = name(a.lhs());
      Term r = name(a.rhs());
      last = eq(l, r);
    }
    std::vector<Formula> parts = defs_;
    parts.push_back(last);
    return Formula::exists(fresh_, Formula::conj(std::move(parts)));
  }

  // Returns a variable standing for t, emitting definitions for compound
  // subterms and constants.
  Term name(const Term& t) {
    if (t.is_var()) return t;
    if (t.is_const()) {
      Term v = Term::var(next_name(false));
      defs_.push_back(eq(v, t));
      return v;
    }
    Term l = name(t.lhs());
    Term r = name(t.rhs());
    Term v = Term::var(next_name(true));
    defs_.push_back(eq(v, Term::apply(t.name(), l, r)));
    return v;
  }

  std::string next_name(bool compound) {
    static const char* bases[] = {"u", "v", "w"};
    for (std::size_t round = 0;; ++round) {
      if (compound) {
        for (const char* b : bases) {
          std::string cand = round == 0 ? b : b + std::to_string(round);
          if (!names_.used(cand)) return take(cand);
        }
      } else {
        std::string cand = round == 0 ? "o" : "o" + std::to_string(round);
        if (!names_.used(cand)) return take(cand);
      }
    }
  }

  std::string take(const std::string& n) {
    names_.reserve(n);
    fresh_.push_back(n);
    return n;
  }

  NameSupply names_;
  std::vector<std::string> fresh_;
  std::vector<Formula> defs_;
};

}  // namespace

Formula flatten(const Formula& f) { return Flattener(f).run(f); }

}  // namespace elemeq
