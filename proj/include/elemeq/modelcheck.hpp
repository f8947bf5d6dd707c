// Bounded (finite-domain) evaluation of first-order formulas over explicit
// models of the semiring of nonnegative rationals and of the semigroup of
// nonnegative invertible matrices.
//
// Elements are interned: every value the evaluator ever touches (domain
// members, hint candidates, intermediate products) gets a dense ElemId, and
// operation results are memoized per id pair.  Quantifiers range over the
// model's domain, preceded by any hint candidates for the bound variable.

#ifndef ELEMEQ_MODELCHECK_HPP
#define ELEMEQ_MODELCHECK_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "elemeq/algebra.hpp"
#include "elemeq/logic.hpp"
#include "json.hpp"

namespace elemeq {

using ElemId = std::uint32_t;

class SignatureMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DomainExplosion : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SolveStatus { NoSolution, Unique, Unknown };

struct Solved {
  SolveStatus status = SolveStatus::NoSolution;
  ElemId value = 0;
};

class Model {
 public:
  virtual ~Model() = default;

  const Signature& signature() const { return *sig_; }
  const std::vector<ElemId>& domain() const { return domain_; }
  std::size_t domain_size() const { return domain_.size(); }
  bool in_domain(ElemId e) const { return e < in_domain_.size() && in_domain_[e]; }
  std::size_t element_count() const { return carrier_.size(); }

  // Satisfies the carrier predicate (nonnegative rational, or member of G_n).
  bool in_carrier(ElemId e) const { return carrier_[e]; }
  ElemId constant(int index) const { return constants_.at(static_cast<std::size_t>(index)); }
  ElemId apply(int op, ElemId a, ElemId b);
  // Solves known . z = result (known_is_left) or z . known = result.  The
  // solution may lie outside the carrier.  Unknown means "not determined by
  // the equation".
  Solved solve(int op, ElemId known, bool known_is_left, ElemId result);

  virtual std::string to_string(ElemId e) const = 0;
  virtual nlohmann::json to_json(ElemId e) const = 0;
  virtual ElemId from_json(const nlohmann::json& j) = 0;
  virtual std::unique_ptr<Model> clone() const = 0;

 protected:
  explicit Model(const Signature& sig) : sig_(&sig) {}
  Model(const Model&) = default;
  Model& operator=(const Model&) = default;

  // Registers a freshly interned element.
  void on_intern(ElemId e, bool carrier);
  void add_to_domain(ElemId e);
  void set_constants(std::vector<ElemId> c) { constants_ = std::move(c); }

  virtual ElemId compute(int op, ElemId a, ElemId b) = 0;
  virtual Solved compute_solve(int op, ElemId known, bool known_is_left, ElemId result) = 0;

 private:
  const Signature* sig_;
  std::vector<ElemId> domain_;
  std::vector<bool> in_domain_;
  std::vector<bool> carrier_;
  std::vector<ElemId> constants_;
  std::vector<std::unordered_map<std::uint64_t, ElemId>> apply_memo_;
};

class SemiringModel final : public Model {
 public:
  explicit SemiringModel(const std::vector<Rational>& domain);

  ElemId intern(const Rational& q);
  std::optional<ElemId> find(const Rational& q) const;
  const Rational& value(ElemId e) const { return values_[e]; }

  std::string to_string(ElemId e) const override;
  nlohmann::json to_json(ElemId e) const override;
  ElemId from_json(const nlohmann::json& j) override;
  std::unique_ptr<Model> clone() const override;

 protected:
  ElemId compute(int op, ElemId a, ElemId b) override;
  Solved compute_solve(int op, ElemId known, bool known_is_left, ElemId result) override;

 private:
  struct RationalHash {
    std::size_t operator()(const Rational& q) const { return hash_value(q); }
  };
  std::vector<Rational> values_;
  std::unordered_map<Rational, ElemId, RationalHash> index_;
};

class GroupModel final : public Model {
 public:
  GroupModel(std::size_t n, const std::vector<Matrix>& domain);

  std::size_t n() const { return n_; }
  ElemId intern(const Matrix& m);
  std::optional<ElemId> find(const Matrix& m) const;
  const Matrix& value(ElemId e) const { return values_[e]; }
  // Inverse in GL_n, interned even when it leaves the carrier.
  std::optional<ElemId> inverse(ElemId e);

  // The model obtained by applying A -> N A N^-1 to every domain element,
  // keeping the enumeration order.
  GroupModel conjugated(const Matrix& N) const;

  std::string to_string(ElemId e) const override;
  nlohmann::json to_json(ElemId e) const override;
  ElemId from_json(const nlohmann::json& j) override;
  std::unique_ptr<Model> clone() const override;

 protected:
  ElemId compute(int op, ElemId a, ElemId b) override;
  Solved compute_solve(int op, ElemId known, bool known_is_left, ElemId result) override;

 private:
  std::size_t n_;
  std::vector<Matrix> values_;
  std::unordered_map<Matrix, ElemId, MatrixHash> index_;
  std::unordered_map<ElemId, std::optional<ElemId>> inverse_memo_;
};

// All rationals p/q with 1 <= q <= max_denominator and 0 <= p/q <= max_numerator,
// sorted ascending.  (2, 2) gives {0, 1/2, 1, 3/2, 2}.
std::vector<Rational> semiring_elements(long max_numerator, long max_denominator);
SemiringModel enum_semiring(long max_numerator, long max_denominator);

struct GroupEnumOptions {
  // Add B_ij(x) for every x in the entry values and i != j.
  bool transvections = false;
  // Diagonal matrices plus permutation matrices instead of all products D.S.
  bool split_monomials = false;
  std::vector<Matrix> extra;
  std::size_t cap = 20000;
};

// Elements in enumeration order: monomials D.S_sigma ordered by the number of
// diagonal entries different from 1, then lexicographically by diagonal and
// permutation; then transvections; then extras; then closure products.
std::vector<Matrix> group_elements(std::size_t n, const std::vector<Rational>& entry_values,
                                   std::size_t closure_depth, const GroupEnumOptions& opts = {});
GroupModel enum_group(std::size_t n, const std::vector<Rational>& entry_values, std::size_t closure_depth,
                      const GroupEnumOptions& opts = {});

// Candidate lists for bound variables, keyed by variable name.  The same
// name bound at several places receives the same candidates everywhere.
using Hints = std::map<std::string, std::vector<ElemId>>;

enum class WitnessSource { Hint, Domain, Pinned, External };
std::string to_string(WitnessSource s);

struct Witness {
  std::string var;
  ElemId value = 0;
  WitnessSource source = WitnessSource::Domain;
};

struct EvalOptions {
  // A value forced by an equation with the variable on one side is admitted
  // even when it lies outside the domain, provided it is a carrier element.
  bool admit_pinned = false;
  // Quantifier nodes with at most this many free variables are memoized.
  std::size_t memo_max_free = 4;
  // Enumerate only sorted tuples for blocks whose body is invariant under
  // permuting the block's variables.
  bool symmetry = true;
  // Evaluate exists v. (P and (D1 or ... or Dk)) branch by branch when each
  // branch has an equation that determines v.
  bool split_disjunctions = true;
};

struct EvalStats {
  std::uint64_t quantifier_runs = 0;
  std::uint64_t memo_hits = 0;
  std::uint64_t candidates = 0;
  std::uint64_t pinned = 0;
  std::uint64_t symmetric_blocks = 0;
};

struct EvalResult {
  bool truth = false;
  // Satisfying assignment of the outermost existential block.
  std::vector<Witness> witnesses;
  // Falsifying assignment of the outermost universal block.
  std::vector<Witness> counterexample;
  std::size_t hints_used = 0;
  std::vector<ElemId> external_witnesses;
  std::size_t domain_size = 0;
  double seconds = 0;
  EvalStats stats;
};

using Assignment = std::map<std::string, ElemId>;

// Keeps compiled formulas, search plans and the memo table across calls, so
// repeated evaluation of related formulas over one model is cheap.  Not
// thread-safe; use one Evaluator per thread over a cloned model.
class Evaluator {
 public:
  Evaluator(Model& model, Hints hints = {}, EvalOptions opts = {});
  ~Evaluator();
  Evaluator(const Evaluator&) = delete;
  Evaluator& operator=(const Evaluator&) = delete;

  Model& model() { return model_; }

  // f must be a sentence.  Throws SignatureMismatch.
  EvalResult eval(const Formula& f);
  // Free variables of f must all be assigned.
  EvalResult eval_with(const Formula& f, const Assignment& assignment);
  bool holds(const Formula& f, const Assignment& assignment) { return eval_with(f, assignment).truth; }

  const EvalStats& stats() const;

 private:
  struct Impl;
  Model& model_;
  std::unique_ptr<Impl> impl_;
};

EvalResult eval(Model& model, const Formula& sentence, const Hints& hints = {}, EvalOptions opts = {});

struct CharacterizeRow {
  ElemId element = 0;
  bool formula = false;
  bool oracle = false;
};

struct CharacterizeReport {
  std::string var;
  std::vector<CharacterizeRow> rows;
  std::vector<ElemId> disagreements;
  bool pass() const { return disagreements.empty(); }
  std::size_t count_true() const;
};

// Compares the one-free-variable formula against the oracle on every domain
// element, in domain order.
CharacterizeReport characterize(Evaluator& ev, const Formula& formula,
                                const std::function<bool(ElemId)>& oracle);
CharacterizeReport characterize(Model& model, const Formula& formula,
                                const std::function<bool(ElemId)>& oracle, const Hints& hints = {},
                                EvalOptions opts = {});

// Domain elements e for which the one-free-variable body is false, i.e. the
// counterexamples of "forall var. body".  The domain is split across threads,
// each with its own model clone and evaluator; the result is sorted by
// domain position, so it does not depend on the thread count.
std::vector<std::size_t> counterexamples(const Model& model, const Formula& body, const Hints& hints,
                                         EvalOptions opts, unsigned threads);

// Parses {"var": [element, ...]} with elements in the model's JSON format.
Hints parse_hints(Model& model, const nlohmann::json& j);

}  // namespace elemeq

#endif  // ELEMEQ_MODELCHECK_HPP
