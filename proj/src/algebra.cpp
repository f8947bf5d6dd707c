#include "elemeq/algebra.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

namespace elemeq {

// ---------------------------------------------------------------------------
// Rationals

Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' '; }), s.end());
  if (s.empty()) throw std::invalid_argument("empty rational");
  Rational q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::size_t hash_value(const Rational& q) {
  auto limb = [](const mpz_class& z) -> std::size_t {
    std::size_t h = mpz_size(z.get_mpz_t()) == 0 ? 0 : mpz_getlimbn(z.get_mpz_t(), 0);
    return h * 31 + static_cast<std::size_t>(mpz_sgn(z.get_mpz_t()) + 1);
  };
  return limb(q.get_num()) * 0x9E3779B97F4A7C15ULL ^ limb(q.get_den());
}

// ---------------------------------------------------------------------------
// Matrices

Matrix::Matrix(std::size_t n) : n_(n), a_(n * n) {}

Matrix::Matrix(std::size_t n, std::vector<Rational> row_major) : n_(n), a_(std::move(row_major)) {
  if (a_.size() != n * n) throw DimensionMismatch("matrix entry count does not match n*n");
}

Matrix Matrix::identity(std::size_t n) { return scalar(n, 1); }

Matrix Matrix::scalar(std::size_t n, const Rational& a) {
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = a;
  return m;
}

Matrix Matrix::diagonal(const std::vector<Rational>& d) {
  Matrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m.at(i, i) = d[i];
  return m;
}

Matrix Matrix::elementary(std::size_t n, std::size_t i, std::size_t j) {
  if (i < 1 || j < 1 || i > n || j > n) throw std::out_of_range("elementary matrix index");
  Matrix m(n);
  m.at(i - 1, j - 1) = 1;
  return m;
}

Matrix Matrix::transvection(std::size_t n, std::size_t i, std::size_t j, const Rational& x) {
  if (i == j) throw std::invalid_argument("transvection needs i != j");
  Matrix m = identity(n);
  if (i < 1 || j < 1 || i > n || j > n) throw std::out_of_range("transvection index");
  m.at(i - 1, j - 1) = x;
  return m;
}

Matrix Matrix::permutation(const Permutation& sigma) {
  std::size_t n = sigma.n();
  Matrix m(n);
  for (std::size_t j = 0; j < n; ++j) m.at(static_cast<std::size_t>(sigma.images()[j]), j) = 1;
  return m;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (n_ != o.n_) throw DimensionMismatch("matrix product of different dimensions");
  Matrix r(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t k = 0; k < n_; ++k) {
      const Rational& x = at(i, k);
      if (sgn(x) == 0) continue;
      for (std::size_t j = 0; j < n_; ++j)
        if (sgn(o.at(k, j)) != 0) r.at(i, j) += x * o.at(k, j);
    }
  return r;
}

Matrix Matrix::power(std::size_t k) const {
  Matrix r = identity(n_);
  for (std::size_t i = 0; i < k; ++i) r = r * *this;
  return r;
}

bool Matrix::is_nonnegative() const {
  return std::all_of(a_.begin(), a_.end(), [](const Rational& q) { return sgn(q) >= 0; });
}

bool Matrix::is_identity() const { return *this == identity(n_); }

bool Matrix::is_diagonal() const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if (i != j && sgn(at(i, j)) != 0) return false;
  return true;
}

std::size_t Matrix::hash() const {
  std::size_t h = n_;
  for (const auto& q : a_) h = h * 1000003ULL ^ hash_value(q);
  return h;
}

std::string Matrix::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < n_; ++i) {
    if (i) s += "; ";
    for (std::size_t j = 0; j < n_; ++j) {
      if (j) s += ' ';
      s += elemeq::to_string(at(i, j));
    }
  }
  return s + "]";
}

nlohmann::json Matrix::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < n_; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < n_; ++j) row.push_back(elemeq::to_string(at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix Matrix::from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix JSON must be a non-empty array of rows");
  std::size_t n = j.size();
  std::vector<Rational> entries;
  entries.reserve(n * n);
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != n) throw DimensionMismatch("matrix JSON must be square");
    for (const auto& e : row) {
      if (e.is_string()) entries.push_back(parse_rational(e.get<std::string>()));
      else if (e.is_number_integer()) entries.emplace_back(e.get<long>());
      else throw std::invalid_argument("matrix entries must be \"p/q\" strings");
    }
  }
  return Matrix(n, std::move(entries));
}

Matrix mat_mul(const Matrix& a, const Matrix& b) { return a * b; }

std::optional<Matrix> try_inverse(const Matrix& a) {
  const std::size_t n = a.n();
  // Clear denominators row by row: A' = diag(l) A has integer entries.
  std::vector<mpz_class> scale(n, 1);
  std::vector<std::vector<mpz_class>> m(n, std::vector<mpz_class>(2 * n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    mpz_class l = 1;
    for (std::size_t j = 0; j < n; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a.at(i, j).get_den_mpz_t());
    scale[i] = l;
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a.at(i, j).get_num() * (l / a.at(i, j).get_den());
    m[i][n + i] = 1;
  }
  mpz_class prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && m[p][k] == 0) ++p;
    if (p == n) return std::nullopt;
    std::swap(m[p], m[k]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      for (std::size_t j = 0; j < 2 * n; ++j) {
        if (j == k) continue;
        mpz_class num = m[k][k] * m[i][j] - m[i][k] * m[k][j];
        mpz_class q;
        mpz_divexact(q.get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
        m[i][j] = q;
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  // Left block is det * I; A^-1 = A'^-1 diag(l).
  Matrix inv(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rational q(m[i][n + j] * scale[j], m[i][i]);
      q.canonicalize();
      inv.at(i, j) = q;
    }
  return inv;
}

Matrix mat_inverse(const Matrix& a) {
  auto inv = try_inverse(a);
  if (!inv) throw Singular("matrix is singular");
  return *inv;
}

Matrix conjugate(const Matrix& n, const Matrix& a) { return n * a * mat_inverse(n); }

bool g_n_member(const Matrix& m) { return m.is_nonnegative() && try_inverse(m).has_value(); }

bool gamma_n_member(const Matrix& m) {
  if (!m.is_nonnegative()) return false;
  auto inv = try_inverse(m);
  return inv && inv->is_nonnegative();
}

// ---------------------------------------------------------------------------
// Permutations

Permutation::Permutation(std::vector<int> images) : img_(std::move(images)) {
  std::vector<bool> hit(img_.size(), false);
  for (int v : img_) {
    if (v < 0 || static_cast<std::size_t>(v) >= img_.size() || hit[v])
      throw std::invalid_argument("not a permutation");
    hit[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return Permutation(std::move(v));
}

Permutation Permutation::from_one_line(const std::vector<int>& one_based) {
  std::vector<int> v;
  v.reserve(one_based.size());
  for (int x : one_based) v.push_back(x - 1);
  return Permutation(std::move(v));
}

Permutation Permutation::cycle(std::size_t n, const std::vector<int>& points) {
  Permutation p = identity(n);
  for (std::size_t k = 0; k < points.size(); ++k) {
    int from = points[k], to = points[(k + 1) % points.size()];
    if (from < 1 || to < 1 || static_cast<std::size_t>(from) > n || static_cast<std::size_t>(to) > n)
      throw std::invalid_argument("cycle point out of range");
    p.img_[from - 1] = to - 1;
  }
  return Permutation(p.img_);
}

Permutation Permutation::transposition(std::size_t n, int i, int j) { return cycle(n, {i, j}); }

Permutation Permutation::parse(std::string_view text, std::size_t n) {
  std::string s(text);
  auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) throw std::invalid_argument("empty permutation");
  if (s[first] == '(') {
    Permutation p = identity(n);
    std::size_t i = first;
    while (i < s.size()) {
      if (s[i] == ' ' || s[i] == '\t') { ++i; continue; }
      if (s[i] != '(') throw std::invalid_argument("bad cycle notation: " + s);
      auto close = s.find(')', i);
      if (close == std::string::npos) throw std::invalid_argument("unclosed cycle: " + s);
      std::vector<int> pts;
      std::stringstream in(s.substr(i + 1, close - i - 1));
      std::string item;
      while (std::getline(in, item, ',')) {
        if (item.find_first_not_of(" ") == std::string::npos) continue;
        pts.push_back(std::stoi(item));
      }
      if (!pts.empty()) p = p * cycle(n, pts);
      i = close + 1;
    }
    return p;
  }
  for (char& c : s)
    if (c == '[' || c == ']' || c == ',') c = ' ';
  std::stringstream in(s);
  std::vector<int> v;
  int x;
  while (in >> x) v.push_back(x);
  if (v.size() != n) throw std::invalid_argument("one-line permutation has wrong length");
  return from_one_line(v);
}

std::vector<int> Permutation::one_line() const {
  std::vector<int> v;
  for (int x : img_) v.push_back(x + 1);
  return v;
}

Permutation Permutation::operator*(const Permutation& b) const {
  if (n() != b.n()) throw DimensionMismatch("composing permutations of different degree");
  std::vector<int> v(n());
  for (std::size_t x = 0; x < n(); ++x) v[x] = img_[b.img_[x]];
  return Permutation(std::move(v));
}

Permutation Permutation::inverse() const {
  std::vector<int> v(n());
  for (std::size_t x = 0; x < n(); ++x) v[img_[x]] = static_cast<int>(x);
  return Permutation(std::move(v));
}

Permutation Permutation::power(long k) const {
  Permutation base = k < 0 ? inverse() : *this;
  Permutation r = identity(n());
  for (long i = 0; i < (k < 0 ? -k : k); ++i) r = r * base;
  return r;
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < img_.size(); ++i)
    if (img_[i] != static_cast<int>(i)) return false;
  return true;
}

std::size_t Permutation::order() const {
  std::size_t k = 1;
  Permutation p = *this;
  while (!p.is_identity()) {
    p = p * *this;
    ++k;
  }
  return k;
}

std::string Permutation::to_string() const {
  std::string s;
  std::vector<bool> seen(n(), false);
  for (std::size_t i = 0; i < n(); ++i) {
    if (seen[i] || img_[i] == static_cast<int>(i)) continue;
    s += '(';
    std::size_t j = i;
    bool first = true;
    while (!seen[j]) {
      seen[j] = true;
      if (!first) s += ',';
      first = false;
      s += std::to_string(j + 1);
      j = static_cast<std::size_t>(img_[j]);
    }
    s += ')';
  }
  return s.empty() ? "()" : s;
}

std::vector<Permutation> all_permutations(std::size_t n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  std::vector<Permutation> out;
  do {
    out.emplace_back(v);
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

Permutation generator_tau(std::size_t n) { return Permutation::transposition(n, 1, 2); }

Permutation generator_rho(std::size_t n) {
  std::vector<int> pts(n);
  std::iota(pts.begin(), pts.end(), 1);
  return Permutation::cycle(n, pts);
}

// ---------------------------------------------------------------------------
// Generator words

std::size_t GenWord::length() const {
  std::size_t k = 0;
  for (auto [i, j] : pairs) k += static_cast<std::size_t>(i + j);
  return k;
}

std::string GenWord::to_string() const {
  if (pairs.empty()) return "1";
  std::string s;
  auto part = [&](const char* g, int e) {
    if (e == 0) return;
    if (!s.empty()) s += ' ';
    s += g;
    if (e != 1) s += "^" + std::to_string(e);
  };
  for (auto [i, j] : pairs) {
    part("tau", i);
    part("rho", j);
  }
  return s;
}

Permutation eval_word(const GenWord& w) {
  Permutation tau = generator_tau(w.n), rho = generator_rho(w.n);
  Permutation p = Permutation::identity(w.n);
  for (auto [i, j] : w.pairs) p = p * tau.power(i) * rho.power(j);
  return p;
}

GenWord normalize(GenWord w) {
  const int n = static_cast<int>(w.n);
  std::vector<std::pair<int, int>> out;
  for (auto [i, j] : w.pairs) {
    i = ((i % 2) + 2) % 2;
    j = ((j % n) + n) % n;
    if (!out.empty()) {
      auto& last = out.back();
      if (last.second == 0) {
        // tau^a tau^b rho^j
        last.first = (last.first + i) % 2;
        last.second = j;
      } else if (i == 0) {
        last.second = (last.second + j) % n;
      } else {
        out.emplace_back(i, j);
      }
    } else {
      out.emplace_back(i, j);
    }
    if (out.back().first == 0 && out.back().second == 0) out.pop_back();
  }
  w.pairs = std::move(out);
  return w;
}

GenWord perm_word(const Permutation& sigma) {
  const std::size_t n = sigma.n();
  if (n < 3) throw std::invalid_argument("perm_word needs n >= 3");
  // Sort the one-line array by adjacent swaps: a * s_1 * ... * s_k = id with
  // s_t = (p_t, p_t + 1), hence sigma = s_k * ... * s_1.
  std::vector<int> a = sigma.images();
  std::vector<int> swaps;
  for (std::size_t pass = 0; pass < n; ++pass)
    for (std::size_t p = 0; p + 1 < n; ++p)
      if (a[p] > a[p + 1]) {
        std::swap(a[p], a[p + 1]);
        swaps.push_back(static_cast<int>(p) + 1);
      }
  GenWord w{n, {}};
  const int nn = static_cast<int>(n);
  for (auto it = swaps.rbegin(); it != swaps.rend(); ++it) {
    int i = *it;  // (i, i+1) = rho^{i-1} tau rho^{-(i-1)}
    w.pairs.emplace_back(0, i - 1);
    w.pairs.emplace_back(1, (nn - (i - 1)) % nn);
  }
  return normalize(std::move(w));
}

namespace {

GenWord letters_to_word(std::size_t n, const std::vector<char>& letters) {
  GenWord w{n, {}};
  for (char c : letters) w.pairs.emplace_back(c == 't' ? 1 : 0, c == 'r' ? 1 : 0);
  return normalize(std::move(w));
}

}  // namespace

std::vector<std::pair<Permutation, GenWord>> bfs_words(std::size_t n) {
  if (n < 3 || n > 8) throw std::invalid_argument("bfs_words needs 3 <= n <= 8");
  const Permutation gens[2] = {generator_rho(n), generator_tau(n)};
  const char names[2] = {'r', 't'};
  std::map<Permutation, std::vector<char>> seen;
  std::deque<Permutation> queue;
  std::vector<std::pair<Permutation, GenWord>> out;
  Permutation id = Permutation::identity(n);
  seen.emplace(id, std::vector<char>{});
  queue.push_back(id);
  while (!queue.empty()) {
    Permutation cur = queue.front();
    queue.pop_front();
    const auto letters = seen.at(cur);
    out.emplace_back(cur, letters_to_word(n, letters));
    for (int g = 0; g < 2; ++g) {
      Permutation nxt = cur * gens[g];
      if (seen.count(nxt)) continue;
      auto l = letters;
      l.push_back(names[g]);
      seen.emplace(nxt, std::move(l));
      queue.push_back(nxt);
    }
  }
  return out;
}

GenWord shortest_word(const Permutation& sigma) {
  static std::map<std::size_t, std::vector<std::pair<Permutation, GenWord>>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(sigma.n());
  if (it == cache.end()) it = cache.emplace(sigma.n(), bfs_words(sigma.n())).first;
  for (const auto& [p, w] : it->second)
    if (p == sigma) return w;
  throw std::logic_error("permutation missing from breadth-first enumeration");
}

// ---------------------------------------------------------------------------
// Monomial matrices and symmetric group tables

std::optional<MonomialForm> monomial_decompose(const Matrix& a) {
  const std::size_t n = a.n();
  std::vector<int> img(n, -1);
  std::vector<int> row_hits(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (sgn(a.at(i, j)) == 0) continue;
      if (img[j] != -1) return std::nullopt;
      img[j] = static_cast<int>(i);
      ++row_hits[i];
    }
    if (img[j] == -1) return std::nullopt;
  }
  for (int h : row_hits)
    if (h != 1) return std::nullopt;
  MonomialForm f{std::vector<Rational>(n), Permutation(img)};
  for (std::size_t j = 0; j < n; ++j) f.diag[img[j]] = a.at(img[j], j);
  return f;
}

int SymTable::index_of(const Permutation& p) const {
  auto it = std::lower_bound(elements.begin(), elements.end(), p);
  if (it == elements.end() || *it != p) return -1;
  return static_cast<int>(it - elements.begin());
}

SymTable sym_table(std::size_t m) {
  if (m < 1 || m > 6) throw std::invalid_argument("sym_table needs 1 <= m <= 6");
  SymTable t;
  t.elements = all_permutations(m);
  const std::size_t k = t.elements.size();
  t.gamma.assign(k, std::vector<int>(k, 0));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) t.gamma[i][j] = t.index_of(t.elements[i] * t.elements[j]);
  return t;
}

}  // namespace elemeq
