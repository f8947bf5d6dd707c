// Signatures, terms and formulas of first-order logic with equality, plus the
// text syntax (parser/printer) and the three-address flattening pass for
// semiring sentences.

#ifndef ELEMEQ_LOGIC_HPP
#define ELEMEQ_LOGIC_HPP

#include <cstddef>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace elemeq {

// A purely functional signature: binary operation symbols and constants.
struct Signature {
  std::string name;
  std::vector<std::string> binary_ops;
  std::vector<std::string> constants;

  bool has_op(std::string_view op) const;
  bool has_constant(std::string_view c) const;
  // Index of the operation symbol, -1 if absent.
  int op_index(std::string_view op) const;
  int constant_index(std::string_view c) const;

  bool operator==(const Signature& o) const { return name == o.name; }
};

// {"*"} with constant "1".
const Signature& semigroup_signature();
// {"+", "*"} with constants "0", "1".
const Signature& semiring_signature();

inline constexpr std::string_view kMul = "*";
inline constexpr std::string_view kAdd = "+";

class Term {
 public:
  enum class Kind { Var, Const, Apply };

  static Term var(std::string name);
  static Term constant(std::string symbol);
  static Term apply(std::string op, Term lhs, Term rhs);

  Kind kind() const { return node_->kind; }
  bool is_var() const { return kind() == Kind::Var; }
  bool is_const() const { return kind() == Kind::Const; }
  bool is_apply() const { return kind() == Kind::Apply; }
  // Variable name, constant symbol or operation symbol depending on kind.
  const std::string& name() const { return node_->name; }
  const Term& lhs() const { return node_->children[0]; }
  const Term& rhs() const { return node_->children[1]; }

  const void* id() const { return node_.get(); }

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::vector<Term> children;
  };
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

Term operator*(const Term& a, const Term& b);
Term operator+(const Term& a, const Term& b);

class Formula {
 public:
  enum class Kind { Equal, Not, And, Or, Implies, Exists, Forall };

  static Formula equal(Term lhs, Term rhs);
  static Formula negation(Formula f);
  // n-ary connectives; a single operand is returned unchanged, an empty list
  // is rejected.
  static Formula conj(std::vector<Formula> fs);
  static Formula disj(std::vector<Formula> fs);
  static Formula implies(Formula a, Formula b);
  static Formula exists(std::string var, Formula body);
  static Formula forall(std::string var, Formula body);
  // Nested quantifier prefix, outermost first.
  static Formula exists(const std::vector<std::string>& vars, Formula body);
  static Formula forall(const std::vector<std::string>& vars, Formula body);

  Kind kind() const { return node_->kind; }
  bool is_quantifier() const { return kind() == Kind::Exists || kind() == Kind::Forall; }

  const Term& lhs() const { return node_->terms[0]; }
  const Term& rhs() const { return node_->terms[1]; }
  const std::vector<Formula>& children() const { return node_->children; }
  const Formula& child(std::size_t i = 0) const { return node_->children[i]; }
  // Bound variable of a quantifier.
  const std::string& var() const { return node_->var; }
  const Formula& body() const { return node_->children[0]; }

  const void* id() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  struct Node {
    Kind kind;
    std::vector<Term> terms;
    std::vector<Formula> children;
    std::string var;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

inline Formula eq(Term a, Term b) { return Formula::equal(std::move(a), std::move(b)); }
inline Formula ne(Term a, Term b) { return Formula::negation(eq(std::move(a), std::move(b))); }

std::set<std::string> free_vars(const Formula& f);
std::set<std::string> free_vars(const Term& t);
// Every variable name occurring in f, bound or free.
std::set<std::string> all_vars(const Formula& f);
bool is_sentence(const Formula& f);

// Tree size (formula nodes plus term nodes); shared subtrees count once per
// occurrence.
std::size_t node_count(const Formula& f);
std::size_t quantifier_depth(const Formula& f);

// True if every operation and constant symbol used belongs to sig.
bool uses_only(const Formula& f, const Signature& sig);

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(std::size_t position, std::string expected);
  std::size_t position() const { return position_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

class UnknownSymbol : public std::runtime_error {
 public:
  UnknownSymbol(std::size_t position, std::string name);
  const std::string& name() const { return name_; }
  std::size_t position() const { return position_; }

 private:
  std::string name_;
  std::size_t position_;
};

// Grammar (whitespace-insensitive):
//   formula := quant* body | ...
//   quant   := ("forall" | "exists") ident "."
//   body    := implication of disjunctions of conjunctions of
//              ("not" unary | quant formula | "(" formula ")" | atom)
//   atom    := term ("=" | "!=") term
//   term    := term "+" term | term "*" term | ident | "0" | "1" | "(" term ")"
// "*" binds tighter than "+", both associate to the left; "implies" is right
// associative and binds loosest.  A quantifier extends as far right as
// possible.
Formula parse(std::string_view text, const Signature& sig);
Term parse_term(std::string_view text, const Signature& sig);

std::string print(const Formula& f);
std::string print(const Term& t);

// Atom shapes accepted by the semiring-to-semigroup compiler:
// x = y, x = y + z, x = y * z, x = 0, x = 1.
bool is_flat_atom(const Formula& atom);
bool is_flat(const Formula& f);

// Rewrites every atom of a semiring formula into flat atoms, naming compound
// subterms by fresh existential variables at the atom's position.
Formula flatten(const Formula& f);

// Generates variable names that avoid a growing set of used names.
class NameSupply {
 public:
  NameSupply() = default;
  explicit NameSupply(std::set<std::string> used) : used_(std::move(used)) {}

  void reserve(const std::string& name) { used_.insert(name); }
  void reserve(const std::set<std::string>& names) { used_.insert(names.begin(), names.end()); }
  bool used(const std::string& name) const { return used_.count(name) != 0; }
  // Returns base itself if unused, otherwise base1, base2, ...
  std::string fresh(const std::string& base);

 private:
  std::set<std::string> used_;
};

}  // namespace elemeq

#endif  // ELEMEQ_LOGIC_HPP
