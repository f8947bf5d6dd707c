// Defining formulas over the semigroup signature for n x n nonnegative
// matrices.  Formulas that depend on a coordinate frame refer to two frame
// variables (default names M1 and M2) standing for conjugates of S_rho and
// S_tau, rho = (1,2,...,n), tau = (1,2).
//
// Builders take terms, so a formula can be instantiated at a product such as
// A * M.  Bound variables are chosen by NameSupply to avoid the free variables
// of the arguments and the frame names.  Built formulas are cached by name
// and arguments; repeated subformulas are shared nodes.

#ifndef ELEMEQ_FORMULAS_HPP
#define ELEMEQ_FORMULAS_HPP

#include <map>
#include <string>
#include <vector>

#include "elemeq/algebra.hpp"
#include "elemeq/logic.hpp"

namespace elemeq {

enum class Provenance { Verbatim, Reconstructed };
std::string to_string(Provenance p);

struct CatalogEntry {
  std::string name;
  std::vector<std::string> frame_vars;
  std::vector<std::string> params;
  Provenance provenance = Provenance::Verbatim;
  Formula formula;
};

class FormulaLib {
 public:
  explicit FormulaLib(std::size_t n, std::string m1 = "M1", std::string m2 = "M2");

  std::size_t n() const { return n_; }
  const Term& m1() const { return m1_; }
  const Term& m2() const { return m2_; }

  // Product of frame variables spelling the shortest generator word of sigma;
  // the constant 1 for the identity.
  Term word(const Permutation& sigma) const;
  static Term power(const Term& t, std::size_t k);

  // Frame-free formulas.
  Formula invert(const Term& m);
  Formula inv(const Term& m);
  Formula comcon(const Term& a);
  Formula ncominv(const Term& a);
  Formula diag(const Term& m);
  Formula cdiag(const Term& m);
  Formula size_sentence();
  Formula cd_one_many(const Term& m);
  Formula cd_all(const Term& m);
  Formula dsame(const Term& a, const Term& m);
  // Reading of the displayed body: X commutes with some M' of the same
  // diagonal type as M.
  Formula k_one_many(const Term& x, const Term& m);
  // Reading of the statement: M commutes with some M' of A's type.
  Formula k_one_many_stmt(const Term& a, const Term& m);
  Formula cycle(const Term& m);
  Formula trans(const Term& m, const Term& mp);
  Formula zd_all(const Term& m);

  // Frame formulas.
  Formula perm(const Term& m, const Permutation& sigma);
  Formula perm_all(const Term& m);
  Formula gd_one_many(const Term& m);
  Formula d_one_many(const Term& m);
  Formula d_two_many(const Term& m);
  Formula d_transp(const Term& m);
  Formula cd_transp(const Term& m);
  Formula cd2_dn2(const Term& m);
  Formula g2_cdn2(const Term& m);
  Formula cdn2_g2(const Term& m);
  Formula zd_one_many(const Term& m);
  Formula main(const Term& m);
  Formula main_unit_core(const Term& m);
  Formula main_unit(const Term& m);
  Formula main12(const Term& m);
  Formula addit(const Term& x1, const Term& x2, const Term& x3);
  Formula multipl_core(const Term& x1, const Term& x2, const Term& x3);
  Formula multipl(const Term& x1, const Term& x2, const Term& x3);

  // Every formula at default parameter names, in a fixed order.
  std::vector<CatalogEntry> catalog();

 private:
  std::size_t n_;
  Term m1_, m2_;
  std::map<std::string, Formula> cache_;

  NameSupply names(std::initializer_list<Term> args) const;
  std::string key(const char* name, std::initializer_list<Term> args) const;
  Formula cd_block(const Term& m, std::size_t m_dim);
};

}  // namespace elemeq

#endif  // ELEMEQ_FORMULAS_HPP
