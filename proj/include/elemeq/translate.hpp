// Compilers between the two languages.
//
// group_to_semiring spells every n x n matrix variable as n^2 entry variables
// and guards each quantifier with G(X), a subtraction-free statement that X is
// invertible: the inverse's entries are held as absolute values and a sign set
// S chooses which products move to the left of each defining equation.
//
// semiring_to_group reads a flat sentence inside the transvection slice
// B12(x) of a coordinate frame (M1, M2) pinned by Cycle and Trans.

#ifndef ELEMEQ_TRANSLATE_HPP
#define ELEMEQ_TRANSLATE_HPP

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "elemeq/logic.hpp"

namespace elemeq {

enum class Direction { GroupToSemiring, SemiringToGroup };
std::string to_string(Direction d);  // "g2r" / "r2g"
Direction parse_direction(const std::string& s);

class BlowupRefused : public std::runtime_error {
 public:
  BlowupRefused(double estimate, std::size_t cap);
  double estimate() const { return estimate_; }
  std::size_t cap() const { return cap_; }

 private:
  double estimate_;
  std::size_t cap_;
};

class NotFlat : public std::invalid_argument {
 public:
  explicit NotFlat(const std::string& atom);
  const std::string& atom() const { return atom_; }

 private:
  std::string atom_;
};

// One binder (or free variable) of the source and what it became.  For g2r
// `generated` lists x_11..x_nn row-major and `witnesses` the inverse entries
// bound by G(X); for r2g `generated` is the single matrix variable.
struct VariableMapping {
  std::string source;
  std::vector<std::string> generated;
  std::vector<std::string> witnesses;
};

struct TranslationReport {
  Direction direction;
  std::size_t n;
  std::vector<VariableMapping> variables;
  std::vector<std::string> frame;  // r2g only
  Formula output;
  std::size_t node_count;
  std::size_t quantifier_depth;
};

nlohmann::json to_json(const TranslationReport& r);

struct TranslateOptions {
  // Refuse when n^2 2^(n^2) (one G block) or an atom's expanded size exceeds
  // this.  The default admits n <= 3.
  std::size_t blowup_cap = 100000;
};

TranslationReport group_to_semiring(const Formula& s, std::size_t n, const TranslateOptions& opts = {});
// s must be flat; run flatten first.
TranslationReport semiring_to_group(const Formula& s, std::size_t n);

// Pieces of G(X), row-major entry terms.  Bit j*n+k of the mask puts inverse
// position (j, k) in S.
Formula sign_block(const std::vector<Term>& x, const std::vector<Term>& y, std::size_t n, std::uint64_t mask);
Formula invertibility_condition(const std::vector<Term>& x, const std::vector<std::string>& y, std::size_t n);

// Entries of a semigroup term as semiring terms, with 0 and 1 folded.
std::vector<Term> entry_terms(const Term& t, std::size_t n,
                              const std::function<const std::vector<Term>&(const std::string&)>& entries_of);

}  // namespace elemeq

#endif  // ELEMEQ_TRANSLATE_HPP
