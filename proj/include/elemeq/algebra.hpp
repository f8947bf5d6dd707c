// Exact rational matrices, permutations of {1..n} and their generator words.
//
// Index conventions: Matrix::at is 0-based; the named constructors that
// mirror matrix notation (elementary, transvection) take 1-based indices.
// Permutations store 0-based images internally and print 1-based.

#ifndef ELEMEQ_ALGEBRA_HPP
#define ELEMEQ_ALGEBRA_HPP

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace elemeq {

using Rational = mpq_class;

// Accepts "p", "p/q" and "-p/q"; the result is canonical.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
std::size_t hash_value(const Rational& q);

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class Singular : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class Permutation;

class Matrix {
 public:
  Matrix() = default;
  // Zero matrix.
  explicit Matrix(std::size_t n);
  Matrix(std::size_t n, std::vector<Rational> row_major);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(const std::vector<Rational>& d);
  static Matrix scalar(std::size_t n, const Rational& a);
  // E_ij, 1-based.
  static Matrix elementary(std::size_t n, std::size_t i, std::size_t j);
  // B_ij(x) = I + x E_ij, 1-based, i != j.
  static Matrix transvection(std::size_t n, std::size_t i, std::size_t j, const Rational& x);
  // S_sigma = (delta_{i, sigma(j)}).
  static Matrix permutation(const Permutation& sigma);

  std::size_t n() const { return n_; }
  const Rational& at(std::size_t r, std::size_t c) const { return a_[r * n_ + c]; }
  Rational& at(std::size_t r, std::size_t c) { return a_[r * n_ + c]; }

  Matrix operator*(const Matrix& o) const;
  Matrix power(std::size_t k) const;
  bool operator==(const Matrix& o) const { return n_ == o.n_ && a_ == o.a_; }
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  bool is_nonnegative() const;
  bool is_identity() const;
  bool is_diagonal() const;
  std::size_t hash() const;

  std::string to_string() const;
  nlohmann::json to_json() const;
  static Matrix from_json(const nlohmann::json& j);

 private:
  std::size_t n_ = 0;
  std::vector<Rational> a_;
};

struct MatrixHash {
  std::size_t operator()(const Matrix& m) const { return m.hash(); }
};

Matrix mat_mul(const Matrix& a, const Matrix& b);
// Fraction-free Gauss-Jordan elimination over the integers after clearing
// row denominators.  Throws Singular.
Matrix mat_inverse(const Matrix& a);
std::optional<Matrix> try_inverse(const Matrix& a);
// N A N^-1.  Throws Singular.
Matrix conjugate(const Matrix& n, const Matrix& a);

// Nonnegative and invertible over Q.
bool g_n_member(const Matrix& m);
// Nonnegative with nonnegative inverse.
bool gamma_n_member(const Matrix& m);

class Permutation {
 public:
  Permutation() = default;
  // 0-based one-line images; throws std::invalid_argument if not bijective.
  explicit Permutation(std::vector<int> images);
  static Permutation identity(std::size_t n);
  // 1-based one-line notation.
  static Permutation from_one_line(const std::vector<int>& one_based);
  // Cycle of 1-based points, e.g. {1,2,3} -> (1,2,3).
  static Permutation cycle(std::size_t n, const std::vector<int>& points);
  static Permutation transposition(std::size_t n, int i, int j);
  // Parses "(1,2,3)(4,5)", "()" or one-line "[2,3,1]" / "2 3 1".
  static Permutation parse(std::string_view text, std::size_t n);

  std::size_t n() const { return img_.size(); }
  // 1-based application.
  int operator()(int point) const { return img_[point - 1] + 1; }
  const std::vector<int>& images() const { return img_; }
  std::vector<int> one_line() const;

  // (a * b)(x) = a(b(x)): b is applied first.
  Permutation operator*(const Permutation& b) const;
  Permutation inverse() const;
  Permutation power(long k) const;
  bool is_identity() const;
  std::size_t order() const;

  bool operator==(const Permutation& o) const { return img_ == o.img_; }
  bool operator!=(const Permutation& o) const { return img_ != o.img_; }
  bool operator<(const Permutation& o) const { return img_ < o.img_; }

  // Cycle notation, "()" for the identity.
  std::string to_string() const;

 private:
  std::vector<int> img_;
};

// All of Sigma_n in lexicographic one-line order.
std::vector<Permutation> all_permutations(std::size_t n);

//   tau = (1,2), rho = (1,2,...,n)
Permutation generator_tau(std::size_t n);
Permutation generator_rho(std::size_t n);

// tau^{i_1} rho^{j_1} tau^{i_2} rho^{j_2} ... as (i_t, j_t) pairs with
// 0 <= i_t < 2 and 0 <= j_t < n.
struct GenWord {
  std::size_t n = 0;
  std::vector<std::pair<int, int>> pairs;

  bool empty() const { return pairs.empty(); }
  // Total number of generator letters.
  std::size_t length() const;
  std::string to_string() const;
  bool operator==(const GenWord& o) const { return n == o.n && pairs == o.pairs; }
};

Permutation eval_word(const GenWord& w);
// Merges adjacent powers and reduces exponents.
GenWord normalize(GenWord w);
// Bubble-sort decomposition into adjacent transpositions, each rewritten as
// rho^{i-1} tau rho^{n-i+1}.  Requires n >= 3.
GenWord perm_word(const Permutation& sigma);
// A shortest word, found by breadth-first search from the identity that
// extends words on the right by rho before tau.  Requires 3 <= n <= 8.
GenWord shortest_word(const Permutation& sigma);
// Sigma_n in breadth-first discovery order with their shortest words.
std::vector<std::pair<Permutation, GenWord>> bfs_words(std::size_t n);

// Decomposition A = diag(d) * S_sigma when A has exactly one nonzero entry in
// every row and column.
struct MonomialForm {
  std::vector<Rational> diag;
  Permutation sigma;
};
std::optional<MonomialForm> monomial_decompose(const Matrix& a);

// Numbering of Sigma_m (lexicographic) with gamma(i, j) = index of
// elements[i] * elements[j].  Requires m <= 6.
struct SymTable {
  std::vector<Permutation> elements;
  std::vector<std::vector<int>> gamma;
  int index_of(const Permutation& p) const;
};
SymTable sym_table(std::size_t m);

}  // namespace elemeq

#endif  // ELEMEQ_ALGEBRA_HPP
