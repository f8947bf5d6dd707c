#include "elemeq/modelcheck.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <deque>
#include <set>
#include <thread>
#include <unordered_set>

namespace elemeq {

// ---------------------------------------------------------------------------
// Model base

void Model::on_intern(ElemId e, bool carrier) {
  if (e != carrier_.size()) throw std::logic_error("element ids must be dense");
  carrier_.push_back(carrier);
  in_domain_.push_back(false);
}

void Model::add_to_domain(ElemId e) {
  if (!carrier_[e]) throw std::invalid_argument("domain element outside the carrier: " + to_string(e));
  if (in_domain_[e]) return;
  in_domain_[e] = true;
  domain_.push_back(e);
}

ElemId Model::apply(int op, ElemId a, ElemId b) {
  if (static_cast<std::size_t>(op) >= apply_memo_.size()) apply_memo_.resize(op + 1);
  auto& memo = apply_memo_[op];
  std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | b;
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  ElemId r = compute(op, a, b);
  memo.emplace(key, r);
  return r;
}

Solved Model::solve(int op, ElemId known, bool known_is_left, ElemId result) {
  return compute_solve(op, known, known_is_left, result);
}

// ---------------------------------------------------------------------------
// Semiring of nonnegative rationals

SemiringModel::SemiringModel(const std::vector<Rational>& domain) : Model(semiring_signature()) {
  set_constants({intern(0), intern(1)});
  for (const auto& q : domain) add_to_domain(intern(q));
}

ElemId SemiringModel::intern(const Rational& q) {
  auto it = index_.find(q);
  if (it != index_.end()) return it->second;
  ElemId id = static_cast<ElemId>(values_.size());
  values_.push_back(q);
  index_.emplace(q, id);
  on_intern(id, sgn(q) >= 0);
  return id;
}

std::optional<ElemId> SemiringModel::find(const Rational& q) const {
  auto it = index_.find(q);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string SemiringModel::to_string(ElemId e) const { return elemeq::to_string(values_[e]); }

nlohmann::json SemiringModel::to_json(ElemId e) const { return elemeq::to_string(values_[e]); }

ElemId SemiringModel::from_json(const nlohmann::json& j) {
  if (j.is_string()) return intern(parse_rational(j.get<std::string>()));
  if (j.is_number_integer()) return intern(Rational(j.get<long>()));
  throw std::invalid_argument("semiring elements are \"p/q\" strings");
}

std::unique_ptr<Model> SemiringModel::clone() const { return std::make_unique<SemiringModel>(*this); }

ElemId SemiringModel::compute(int op, ElemId a, ElemId b) {
  if (op == 0) return intern(values_[a] + values_[b]);
  return intern(values_[a] * values_[b]);
}

Solved SemiringModel::compute_solve(int op, ElemId known, bool, ElemId result) {
  const Rational& k = values_[known];
  const Rational& r = values_[result];
  if (op == 0) {
    return {SolveStatus::Unique, intern(r - k)};
  }
  if (sgn(k) == 0) return {sgn(r) == 0 ? SolveStatus::Unknown : SolveStatus::NoSolution, 0};
  return {SolveStatus::Unique, intern(r / k)};
}

std::vector<Rational> semiring_elements(long max_numerator, long max_denominator) {
  if (max_numerator < 1 || max_denominator < 1) throw std::invalid_argument("semiring bounds must be >= 1");
  std::set<Rational> s;
  for (long q = 1; q <= max_denominator; ++q)
    for (long p = 0; p <= max_numerator * q; ++p) {
      Rational r(p, q);
      r.canonicalize();
      s.insert(r);
    }
  return {s.begin(), s.end()};
}

SemiringModel enum_semiring(long max_numerator, long max_denominator) {
  return SemiringModel(semiring_elements(max_numerator, max_denominator));
}

// ---------------------------------------------------------------------------
// Matrix semigroup

GroupModel::GroupModel(std::size_t n, const std::vector<Matrix>& domain) : Model(semigroup_signature()), n_(n) {
  set_constants({intern(Matrix::identity(n))});
  for (const auto& m : domain) {
    if (m.n() != n) throw DimensionMismatch("domain matrix of the wrong size");
    add_to_domain(intern(m));
  }
}

ElemId GroupModel::intern(const Matrix& m) {
  auto it = index_.find(m);
  if (it != index_.end()) return it->second;
  ElemId id = static_cast<ElemId>(values_.size());
  values_.push_back(m);
  index_.emplace(m, id);
  on_intern(id, g_n_member(m));
  return id;
}

std::optional<ElemId> GroupModel::find(const Matrix& m) const {
  auto it = index_.find(m);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<ElemId> GroupModel::inverse(ElemId e) {
  auto it = inverse_memo_.find(e);
  if (it != inverse_memo_.end()) return it->second;
  std::optional<ElemId> r;
  if (auto inv = try_inverse(values_[e])) r = intern(*inv);
  inverse_memo_.emplace(e, r);
  return r;
}

GroupModel GroupModel::conjugated(const Matrix& N) const {
  Matrix ninv = mat_inverse(N);
  std::vector<Matrix> out;
  for (ElemId e : domain()) out.push_back(N * values_[e] * ninv);
  return GroupModel(n_, out);
}

std::string GroupModel::to_string(ElemId e) const { return values_[e].to_string(); }

nlohmann::json GroupModel::to_json(ElemId e) const { return values_[e].to_json(); }

ElemId GroupModel::from_json(const nlohmann::json& j) {
  Matrix m = Matrix::from_json(j);
  if (m.n() != n_) throw DimensionMismatch("matrix of the wrong size for this model");
  return intern(m);
}

std::unique_ptr<Model> GroupModel::clone() const { return std::make_unique<GroupModel>(*this); }

ElemId GroupModel::compute(int, ElemId a, ElemId b) { return intern(values_[a] * values_[b]); }

Solved GroupModel::compute_solve(int, ElemId known, bool known_is_left, ElemId result) {
  auto inv = inverse(known);
  if (!inv) return {SolveStatus::Unknown, 0};
  return {SolveStatus::Unique, known_is_left ? apply(0, *inv, result) : apply(0, result, *inv)};
}

namespace {

std::vector<std::vector<Rational>> diagonal_tuples(std::size_t n, const std::vector<Rational>& vals) {
  std::vector<std::vector<Rational>> out;
  std::vector<std::size_t> idx(n, 0);
  if (vals.empty()) return out;
  while (true) {
    std::vector<Rational> d;
    for (auto i : idx) d.push_back(vals[i]);
    out.push_back(std::move(d));
    std::size_t k = n;
    while (k > 0 && ++idx[k - 1] == vals.size()) idx[--k] = 0;
    if (k == 0) break;
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    auto off = [](const auto& d) { return std::count_if(d.begin(), d.end(), [](const Rational& x) { return x != 1; }); };
    return off(a) < off(b);
  });
  return out;
}

}  // namespace

std::vector<Matrix> group_elements(std::size_t n, const std::vector<Rational>& entry_values,
                                   std::size_t closure_depth, const GroupEnumOptions& opts) {
  if (n < 3) throw std::invalid_argument("group models need n >= 3");
  std::set<Rational> uniq(entry_values.begin(), entry_values.end());
  std::vector<Rational> positive;
  for (const auto& x : uniq)
    if (sgn(x) > 0) positive.push_back(x);

  std::vector<Matrix> out;
  std::unordered_set<Matrix, MatrixHash> seen;
  auto add = [&](const Matrix& m) {
    if (!g_n_member(m)) return;
    if (seen.insert(m).second) out.push_back(m);
    if (out.size() > opts.cap)
      throw DomainExplosion("group domain exceeds the cap of " + std::to_string(opts.cap) + " elements");
  };

  auto perms = all_permutations(n);
  auto diags = diagonal_tuples(n, positive);
  if (opts.split_monomials) {
    for (const auto& s : perms) add(Matrix::permutation(s));
    for (const auto& d : diags) add(Matrix::diagonal(d));
  } else {
    for (const auto& d : diags)
      for (const auto& s : perms) add(Matrix::diagonal(d) * Matrix::permutation(s));
  }
  if (opts.transvections)
    for (const auto& x : positive)
      for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = 1; j <= n; ++j)
          if (i != j) add(Matrix::transvection(n, i, j, x));
  for (const auto& m : opts.extra) add(m);

  for (std::size_t round = 0; round < closure_depth; ++round) {
    std::vector<Matrix> cur = out;
    for (const auto& a : cur)
      for (const auto& b : cur) add(a * b);
  }
  return out;
}

GroupModel enum_group(std::size_t n, const std::vector<Rational>& entry_values, std::size_t closure_depth,
                      const GroupEnumOptions& opts) {
  return GroupModel(n, group_elements(n, entry_values, closure_depth, opts));
}

std::string to_string(WitnessSource s) {
  switch (s) {
    case WitnessSource::Hint: return "hint";
    case WitnessSource::Domain: return "domain";
    case WitnessSource::Pinned: return "pinned";
    case WitnessSource::External: return "external";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Evaluator

namespace {

struct VecHash {
  template <class V>
  std::size_t operator()(const V& v) const {
    std::size_t h = 1469598103934665603ULL;
    for (auto x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ULL;
    return h;
  }
};

constexpr std::size_t kMaxChain = 64;
constexpr std::size_t kCanonLimit = 20000;

}  // namespace

struct Evaluator::Impl {
  struct TNode {
    Term::Kind kind;
    int sym = -1;  // variable name id, constant index or operation index
    int l = -1, r = -1;
    std::vector<int> fv;
    int shape = 0;
    Term src;
  };

  struct FNode {
    Formula::Kind kind;
    std::vector<int> kids;
    int t1 = -1, t2 = -1;
    int var = -1;
    std::vector<int> fv;
    int shape = 0;
    bool has_quant = false;
    std::size_t size = 1;
    int plan = -1;
    int alt = -2;  // distributed form; -2 not computed, -1 none
    Formula src;
    explicit FNode(Formula f) : kind(f.kind()), src(std::move(f)) {}
  };

  struct Lit {
    int node;
    bool want;
    std::uint64_t mask = 0;
  };

  struct Pin {
    int node;
    bool in_lhs;
    std::uint64_t req;
  };

  struct Plan {
    bool exists_mode = true;
    std::vector<int> vars;
    std::vector<int> hint_names;
    std::vector<Lit> lits;
    std::vector<int> pre;
    std::vector<std::vector<int>> by_slot;
    std::vector<std::vector<Pin>> pins;
    // Slots to enumerate, in order, when no pin is ready.
    std::vector<int> enum_order;
    bool symmetric = false;
  };

  struct Candidates {
    std::vector<ElemId> values;
    std::vector<WitnessSource> sources;
    std::unordered_set<ElemId> hinted;
  };

  struct Record {
    std::vector<ElemId> values;
    std::vector<WitnessSource> sources;
  };

  Model& model;
  Hints hints;
  EvalOptions opts;
  EvalStats stats;

  std::unordered_map<std::string, int> name_index;
  std::vector<std::string> names;
  std::vector<ElemId> env;
  std::vector<char> env_set;

  std::deque<TNode> terms;
  std::unordered_map<const void*, int> term_index;
  std::deque<FNode> fnodes;
  std::unordered_map<const void*, int> formula_index;
  std::unordered_map<std::vector<std::int64_t>, int, VecHash> shape_index;
  std::deque<Plan> plans;
  std::unordered_map<std::vector<ElemId>, bool, VecHash> memo;
  std::unordered_map<int, Candidates> cand_cache;
  int rename_counter = 0;

  Impl(Model& m, Hints h, EvalOptions o) : model(m), hints(std::move(h)), opts(o) {}

  // -- names ---------------------------------------------------------------

  int name_id(const std::string& s) {
    auto it = name_index.find(s);
    if (it != name_index.end()) return it->second;
    int id = static_cast<int>(names.size());
    names.push_back(s);
    name_index.emplace(s, id);
    env.push_back(0);
    env_set.push_back(0);
    return id;
  }

  static std::string base_name(const std::string& s) {
    auto p = s.find('#');
    return p == std::string::npos ? s : s.substr(0, p);
  }

  bool hinted(int name) const { return hints.count(base_name(names[name])) != 0; }

  int intern_shape(const std::vector<std::int64_t>& key) {
    auto it = shape_index.find(key);
    if (it != shape_index.end()) return it->second;
    int id = static_cast<int>(shape_index.size()) + 1;
    shape_index.emplace(key, id);
    return id;
  }

  static void append_child(std::vector<std::int64_t>& key, std::vector<int>& fv, int shape,
                           const std::vector<int>& child_fv, int skip = -1) {
    key.push_back(shape);
    key.push_back(static_cast<std::int64_t>(child_fv.size()));
    for (int v : child_fv) {
      if (v == skip) {
        key.push_back(-1);
        continue;
      }
      auto it = std::find(fv.begin(), fv.end(), v);
      if (it == fv.end()) {
        fv.push_back(v);
        key.push_back(static_cast<std::int64_t>(fv.size() - 1));
      } else {
        key.push_back(it - fv.begin());
      }
    }
  }

  // -- compilation -----------------------------------------------------------

  int compile_term(const Term& t) {
    auto it = term_index.find(t.id());
    if (it != term_index.end()) return it->second;
    TNode n{t.kind(), -1, -1, -1, {}, 0, t};
    std::vector<std::int64_t> key{static_cast<int>(t.kind())};
    const Signature& sig = model.signature();
    switch (t.kind()) {
      case Term::Kind::Var:
        n.sym = name_id(t.name());
        n.fv = {n.sym};
        break;
      case Term::Kind::Const:
        n.sym = sig.constant_index(t.name());
        if (n.sym < 0) throw SignatureMismatch("constant " + t.name() + " not in signature " + sig.name);
        key.push_back(n.sym);
        break;
      case Term::Kind::Apply: {
        n.sym = sig.op_index(t.name());
        if (n.sym < 0) throw SignatureMismatch("operation " + t.name() + " not in signature " + sig.name);
        n.l = compile_term(t.lhs());
        n.r = compile_term(t.rhs());
        key.push_back(n.sym);
        append_child(key, n.fv, terms[n.l].shape, terms[n.l].fv);
        append_child(key, n.fv, terms[n.r].shape, terms[n.r].fv);
        break;
      }
    }
    n.shape = intern_shape(key);
    int id = static_cast<int>(terms.size());
    terms.push_back(std::move(n));
    term_index.emplace(t.id(), id);
    return id;
  }

  static std::size_t sat_add(std::size_t a, std::size_t b) {
    std::size_t s = a + b;
    return s < a ? static_cast<std::size_t>(-1) : s;
  }

  std::size_t term_size(int t) const {
    const TNode& n = terms[t];
    return n.kind == Term::Kind::Apply ? 1 + term_size(n.l) + term_size(n.r) : 1;
  }

  int compile(const Formula& f) {
    auto it = formula_index.find(f.id());
    if (it != formula_index.end()) return it->second;
    FNode n(f);
    std::vector<std::int64_t> key{100 + static_cast<int>(f.kind())};
    switch (f.kind()) {
      case Formula::Kind::Equal:
        n.t1 = compile_term(f.lhs());
        n.t2 = compile_term(f.rhs());
        append_child(key, n.fv, terms[n.t1].shape, terms[n.t1].fv);
        append_child(key, n.fv, terms[n.t2].shape, terms[n.t2].fv);
        n.size = 1 + term_size(n.t1) + term_size(n.t2);
        break;
      case Formula::Kind::Exists:
      case Formula::Kind::Forall: {
        int b = compile(f.body());
        n.kids = {b};
        n.var = name_id(f.var());
        key.push_back(hinted(n.var) ? n.var : -1);
        append_child(key, n.fv, fnodes[b].shape, fnodes[b].fv, n.var);
        n.has_quant = true;
        n.size = sat_add(1, fnodes[b].size);
        break;
      }
      default:
        key.push_back(static_cast<std::int64_t>(f.children().size()));
        for (const auto& c : f.children()) {
          int k = compile(c);
          n.kids.push_back(k);
          append_child(key, n.fv, fnodes[k].shape, fnodes[k].fv);
          n.has_quant = n.has_quant || fnodes[k].has_quant;
          n.size = sat_add(n.size, fnodes[k].size);
        }
    }
    n.shape = intern_shape(key);
    int id = static_cast<int>(fnodes.size());
    fnodes.push_back(std::move(n));
    formula_index.emplace(f.id(), id);
    return id;
  }

  bool has_free(int node, int var) const {
    const auto& fv = fnodes[node].fv;
    return std::find(fv.begin(), fv.end(), var) != fv.end();
  }

  // Rebuilds a formula with the free variable `from` renamed to `to`.
  Term rename_term(int t, int from, const std::string& to) {
    const TNode& n = terms[t];
    if (std::find(n.fv.begin(), n.fv.end(), from) == n.fv.end()) return n.src;
    if (n.kind == Term::Kind::Var) return Term::var(to);
    Term l = rename_term(n.l, from, to);
    Term r = rename_term(n.r, from, to);
    return Term::apply(n.src.name(), l, r);
  }

  Formula rename(int f, int from, const std::string& to, std::unordered_map<int, Formula>& memo_r) {
    if (!has_free(f, from)) return fnodes[f].src;
    auto it = memo_r.find(f);
    if (it != memo_r.end()) return it->second;
    const FNode n = fnodes[f];
    Formula out = n.src;
    switch (n.kind) {
      case Formula::Kind::Equal: out = eq(rename_term(n.t1, from, to), rename_term(n.t2, from, to)); break;
      case Formula::Kind::Not: out = Formula::negation(rename(n.kids[0], from, to, memo_r)); break;
      case Formula::Kind::Implies:
        out = Formula::implies(rename(n.kids[0], from, to, memo_r), rename(n.kids[1], from, to, memo_r));
        break;
      case Formula::Kind::And:
      case Formula::Kind::Or: {
        std::vector<Formula> cs;
        for (int k : n.kids) cs.push_back(rename(k, from, to, memo_r));
        out = n.kind == Formula::Kind::And ? Formula::conj(cs) : Formula::disj(cs);
        break;
      }
      case Formula::Kind::Exists:
        out = Formula::exists(names[n.var], rename(n.kids[0], from, to, memo_r));
        break;
      case Formula::Kind::Forall:
        out = Formula::forall(names[n.var], rename(n.kids[0], from, to, memo_r));
        break;
    }
    memo_r.emplace(f, out);
    return out;
  }

  // -- evaluation ------------------------------------------------------------

  ElemId eval_term(int t) {
    const TNode& n = terms[t];
    switch (n.kind) {
      case Term::Kind::Var:
        if (!env_set[n.sym]) throw std::invalid_argument("unassigned variable " + names[n.sym]);
        return env[n.sym];
      case Term::Kind::Const: return model.constant(n.sym);
      case Term::Kind::Apply: {
        ElemId a = eval_term(n.l);
        ElemId b = eval_term(n.r);
        return model.apply(n.sym, a, b);
      }
    }
    return 0;
  }

  bool eval_node(int f) {
    const FNode& n = fnodes[f];
    switch (n.kind) {
      case Formula::Kind::Equal: return eval_term(n.t1) == eval_term(n.t2);
      case Formula::Kind::Not: return !eval_node(n.kids[0]);
      case Formula::Kind::And:
        for (int k : n.kids)
          if (!eval_node(k)) return false;
        return true;
      case Formula::Kind::Or:
        for (int k : n.kids)
          if (eval_node(k)) return true;
        return false;
      case Formula::Kind::Implies: return !eval_node(n.kids[0]) || eval_node(n.kids[1]);
      case Formula::Kind::Exists:
      case Formula::Kind::Forall: return eval_quant(f);
    }
    return false;
  }

  bool eval_quant(int f) {
    const FNode& n = fnodes[f];
    bool use_memo = n.fv.size() <= opts.memo_max_free;
    std::vector<ElemId> key;
    if (use_memo) {
      key.reserve(n.fv.size() + 1);
      key.push_back(static_cast<ElemId>(n.shape));
      for (int v : n.fv) key.push_back(env[v]);
      auto it = memo.find(key);
      if (it != memo.end()) {
        ++stats.memo_hits;
        return it->second;
      }
    }
    int alt = opts.split_disjunctions ? distributed(f) : -1;
    bool r = alt >= 0 ? eval_node(alt) : run_quant(f, nullptr);
    if (use_memo) memo.emplace(std::move(key), r);
    return r;
  }

  bool run_quant(int f, Record* rec) {
    ++stats.quantifier_runs;
    int pi = plan_for(f);
    Plan& p = plans[pi];
    bool found = run_plan(p, rec);
    return p.exists_mode ? found : !found;
  }

  // -- plans -----------------------------------------------------------------

  int plan_for(int f) {
    if (fnodes[f].plan >= 0) return fnodes[f].plan;
    Plan p = build_plan(f);
    int id = static_cast<int>(plans.size());
    plans.push_back(std::move(p));
    fnodes[f].plan = id;
    return id;
  }

  // exists v. (P and (D1 or ... or Dk)) as the disjunction of the
  // exists v. (P and Di), when every Di has an equation on a block variable:
  // each branch can then solve for v instead of enumerating it.
  int distributed(int f) {
    if (fnodes[f].alt != -2) return fnodes[f].alt;
    fnodes[f].alt = -1;
    if (fnodes[f].kind != Formula::Kind::Exists) return -1;
    const std::vector<int> vars = prefix_vars(f);
    std::vector<std::pair<int, bool>> lits;
    shallow(prefix_body(f), true, lits);
    int split = -1;
    for (std::size_t i = 0; i < lits.size(); ++i)
      if (lits[i].second && fnodes[lits[i].first].kind == Formula::Kind::Or) {
        if (split >= 0) return -1;
        split = static_cast<int>(i);
      }
    if (split < 0) return -1;
    const std::set<int> block(vars.begin(), vars.end());
    auto solvable = [&](int d) {
      std::vector<std::pair<int, bool>> ls;
      shallow(d, true, ls);
      for (auto [node, want] : ls)
        if (want && fnodes[node].kind == Formula::Kind::Equal)
          for (int v : fnodes[node].fv)
            if (block.count(v)) return true;
      return false;
    };
    const std::vector<int> ds = fnodes[lits[static_cast<std::size_t>(split)].first].kids;
    for (int d : ds)
      if (!solvable(d)) return -1;
    std::vector<Formula> rest;
    for (std::size_t i = 0; i < lits.size(); ++i)
      if (static_cast<int>(i) != split) {
        const Formula& src = fnodes[lits[i].first].src;
        rest.push_back(lits[i].second ? src : Formula::negation(src));
      }
    std::vector<std::string> vnames;
    for (int v : vars) vnames.push_back(names[v]);
    std::vector<Formula> branches;
    for (int d : ds) {
      auto cs = rest;
      cs.push_back(fnodes[d].src);
      branches.push_back(Formula::exists(vnames, Formula::conj(std::move(cs))));
    }
    int alt = compile(Formula::disj(std::move(branches)));
    fnodes[f].alt = alt;
    return alt;
  }

  struct Builder {
    Plan plan;
    std::set<int> outer;  // free variables of the quantifier node
    std::vector<std::pair<int, bool>> raw;  // literal node, wanted truth
  };

  static bool same_sense(Formula::Kind k, bool want) {
    return (k == Formula::Kind::Exists && want) || (k == Formula::Kind::Forall && !want);
  }

  // Literals of a block body without merging nested quantifiers.
  void shallow(int node, bool want, std::vector<std::pair<int, bool>>& out) {
    const FNode& n = fnodes[node];
    if (n.kind == Formula::Kind::And && want) {
      for (int k : n.kids) shallow(k, true, out);
    } else if (n.kind == Formula::Kind::Or && !want) {
      for (int k : n.kids) shallow(k, false, out);
    } else if (n.kind == Formula::Kind::Implies && !want) {
      shallow(n.kids[0], true, out);
      shallow(n.kids[1], false, out);
    } else if (n.kind == Formula::Kind::Not) {
      shallow(n.kids[0], !want, out);
    } else {
      out.emplace_back(node, want);
    }
  }

  int count_occ(int t, int var) const {
    const TNode& n = terms[t];
    if (n.kind == Term::Kind::Var) return n.sym == var ? 1 : 0;
    if (n.kind == Term::Kind::Const) return 0;
    return count_occ(n.l, var) + count_occ(n.r, var);
  }

  // Equation literal that determines var once every variable in req is known.
  struct Solver {
    int var;
    std::vector<int> req;
  };

  void add_solvers(const std::vector<std::pair<int, bool>>& lits, const std::set<int>& vars,
                   std::vector<Solver>& out) const {
    for (auto [node, w] : lits) {
      const FNode& n = fnodes[node];
      if (!w || n.kind != Formula::Kind::Equal) continue;
      for (int v : n.fv) {
        if (!vars.count(v) || count_occ(n.t1, v) + count_occ(n.t2, v) != 1) continue;
        Solver s{v, {}};
        for (int u : n.fv)
          if (u != v && vars.count(u)) s.req.push_back(u);
        out.push_back(std::move(s));
      }
    }
  }

  static void close_over(std::set<int>& known, const std::vector<Solver>& solvers) {
    bool progress = true;
    while (progress) {
      progress = false;
      for (const auto& s : solvers) {
        if (known.count(s.var)) continue;
        if (std::all_of(s.req.begin(), s.req.end(), [&](int u) { return known.count(u) != 0; })) {
          known.insert(s.var);
          progress = true;
        }
      }
    }
  }

  // Greedy enumeration order: repeatedly propagate equations, then pick the
  // variable whose assignment determines the most others.
  static std::vector<int> enumeration_order(const std::vector<int>& vars, const std::vector<Solver>& solvers) {
    std::set<int> known;
    std::vector<int> order;
    close_over(known, solvers);
    while (known.size() < vars.size()) {
      int best = -1;
      std::size_t best_size = 0;
      for (int v : vars) {
        if (known.count(v)) continue;
        std::set<int> trial = known;
        trial.insert(v);
        close_over(trial, solvers);
        if (best < 0 || trial.size() > best_size) {
          best = v;
          best_size = trial.size();
        }
      }
      order.push_back(best);
      known.insert(best);
      close_over(known, solvers);
    }
    return order;
  }

  // A nested block is merged when doing so does not increase the number of
  // variables that have to be enumerated.
  bool worth_merging(const Builder& b, const std::vector<int>& block, int body, bool want) {
    std::set<int> before(b.plan.vars.begin(), b.plan.vars.end());
    std::vector<Solver> s0;
    add_solvers(b.raw, before, s0);
    std::size_t e0 = enumeration_order(b.plan.vars, s0).size();
    std::set<int> after = before;
    after.insert(block.begin(), block.end());
    std::vector<int> all(after.begin(), after.end());
    std::vector<std::pair<int, bool>> lits = b.raw;
    shallow(body, want, lits);
    std::vector<Solver> s1;
    add_solvers(lits, after, s1);
    return enumeration_order(all, s1).size() <= e0;
  }

  bool in_chain(const Builder& b, int v) const {
    return std::find(b.plan.vars.begin(), b.plan.vars.end(), v) != b.plan.vars.end();
  }

  // Adds the quantifier prefix starting at node q (all of the same kind) to
  // the chain, renaming binders that would clash.  Returns the body.
  int add_prefix(Builder& b, int q) {
    Formula::Kind kind = fnodes[q].kind;
    int cur = q;
    while (true) {
      int v = fnodes[cur].var;
      int body = fnodes[cur].kids[0];
      if (in_chain(b, v) || b.outer.count(v)) {
        std::string fresh = base_name(names[v]) + "#" + std::to_string(++rename_counter);
        std::unordered_map<int, Formula> memo_r;
        Formula nb = rename(body, v, fresh, memo_r);
        body = compile(nb);
        v = name_id(fresh);
      }
      b.plan.vars.push_back(v);
      b.plan.hint_names.push_back(name_id(base_name(names[v])));
      if (fnodes[body].kind != kind || b.plan.vars.size() >= kMaxChain) return body;
      cur = body;
    }
  }

  std::vector<int> prefix_vars(int q) const {
    std::vector<int> out;
    Formula::Kind kind = fnodes[q].kind;
    int cur = q;
    while (true) {
      out.push_back(fnodes[cur].var);
      int body = fnodes[cur].kids[0];
      if (fnodes[body].kind != kind) return out;
      cur = body;
    }
  }

  int prefix_body(int q) const {
    Formula::Kind kind = fnodes[q].kind;
    int cur = fnodes[q].kids[0];
    while (fnodes[cur].kind == kind) cur = fnodes[cur].kids[0];
    return cur;
  }

  // forall y. (P implies C1 and ... and Ck) as k literals, when the
  // conjuncts depend on different variables.
  bool split_forall(Builder& b, int node) {
    const FNode n = fnodes[node];
    int body = n.kids[0];
    const FNode bn = fnodes[body];
    int guard = -1, conj = body;
    if (bn.kind == Formula::Kind::Implies) {
      guard = bn.kids[0];
      conj = bn.kids[1];
    }
    const FNode cn = fnodes[conj];
    if (cn.kind != Formula::Kind::And || cn.kids.size() < 2) return false;
    std::set<std::vector<int>> sets;
    for (int k : cn.kids) {
      auto fv = fnodes[k].fv;
      std::sort(fv.begin(), fv.end());
      sets.insert(fv);
    }
    if (sets.size() < 2) return false;
    for (int k : cn.kids) {
      Formula inner = guard >= 0 ? Formula::implies(fnodes[guard].src, fnodes[k].src) : fnodes[k].src;
      int lit = compile(Formula::forall(names[n.var], inner));
      b.raw.emplace_back(lit, true);
    }
    return true;
  }

  void collect(Builder& b, int node, bool want) {
    const FNode& n = fnodes[node];
    switch (n.kind) {
      case Formula::Kind::And:
        if (want) {
          for (int k : std::vector<int>(n.kids)) collect(b, k, true);
          return;
        }
        break;
      case Formula::Kind::Or:
        if (!want) {
          for (int k : std::vector<int>(n.kids)) collect(b, k, false);
          return;
        }
        break;
      case Formula::Kind::Implies:
        if (!want) {
          int a = n.kids[0], c = n.kids[1];
          collect(b, a, true);
          collect(b, c, false);
          return;
        }
        break;
      case Formula::Kind::Not: {
        int c = n.kids[0];
        collect(b, c, !want);
        return;
      }
      case Formula::Kind::Exists:
      case Formula::Kind::Forall:
        if (same_sense(n.kind, want)) {
          auto block = prefix_vars(node);
          if (b.plan.vars.size() + block.size() <= kMaxChain && worth_merging(b, block, prefix_body(node), want)) {
            int body = add_prefix(b, node);
            collect(b, body, want);
            return;
          }
        } else if (n.kind == Formula::Kind::Forall && want && split_forall(b, node)) {
          return;
        }
        break;
      default: break;
    }
    b.raw.emplace_back(node, want);
  }

  Plan build_plan(int f) {
    Builder b;
    b.plan.exists_mode = fnodes[f].kind == Formula::Kind::Exists;
    b.outer.insert(fnodes[f].fv.begin(), fnodes[f].fv.end());
    int body = add_prefix(b, f);
    collect(b, body, b.plan.exists_mode);

    Plan& p = b.plan;
    const std::size_t k = p.vars.size();
    p.by_slot.assign(k, {});
    p.pins.assign(k, {});
    auto slot_of = [&](int v) -> int {
      for (std::size_t i = 0; i < k; ++i)
        if (p.vars[i] == v) return static_cast<int>(i);
      return -1;
    };
    // Cheap literals first: no quantifiers, then by size.
    std::stable_sort(b.raw.begin(), b.raw.end(), [&](const auto& x, const auto& y) {
      const FNode& a = fnodes[x.first];
      const FNode& c = fnodes[y.first];
      if (a.has_quant != c.has_quant) return !a.has_quant;
      return a.size < c.size;
    });
    for (auto [node, want] : b.raw) {
      Lit lit{node, want, 0};
      for (int v : fnodes[node].fv) {
        int s = slot_of(v);
        if (s >= 0) lit.mask |= std::uint64_t{1} << s;
      }
      int idx = static_cast<int>(p.lits.size());
      p.lits.push_back(lit);
      if (lit.mask == 0) {
        p.pre.push_back(idx);
        continue;
      }
      for (std::size_t s = 0; s < k; ++s)
        if (lit.mask >> s & 1) p.by_slot[s].push_back(idx);
      const FNode& n = fnodes[node];
      if (want && n.kind == Formula::Kind::Equal) {
        for (std::size_t s = 0; s < k; ++s) {
          if (!(lit.mask >> s & 1)) continue;
          int v = p.vars[s];
          int c1 = count_occ(n.t1, v), c2 = count_occ(n.t2, v);
          if (c1 + c2 != 1) continue;
          p.pins[s].push_back(Pin{node, c1 == 1, lit.mask & ~(std::uint64_t{1} << s)});
        }
      }
    }
    std::vector<Solver> solvers;
    std::vector<int> slots(k);
    for (std::size_t i = 0; i < k; ++i) {
      slots[i] = static_cast<int>(i);
      for (const Pin& pn : p.pins[i]) {
        Solver sv{static_cast<int>(i), {}};
        for (std::size_t j = 0; j < k; ++j)
          if (pn.req >> j & 1) sv.req.push_back(static_cast<int>(j));
        solvers.push_back(std::move(sv));
      }
    }
    p.enum_order = enumeration_order(slots, solvers);
    p.symmetric = opts.symmetry && detect_symmetry(p);
    if (p.symmetric) ++stats.symmetric_blocks;
    return std::move(b.plan);
  }

  // -- symmetry detection ------------------------------------------------------

  struct Canon {
    int a, b;
    bool swap;
    std::size_t budget = kCanonLimit;
    bool failed = false;
  };

  static int swap_name(const Canon& c, int v) {
    if (!c.swap) return v;
    return v == c.a ? c.b : v == c.b ? c.a : v;
  }

  std::string canon_term(int t, Canon& c) {
    if (c.failed || c.budget-- == 0) {
      c.failed = true;
      return {};
    }
    const TNode& n = terms[t];
    switch (n.kind) {
      case Term::Kind::Var: return "v" + std::to_string(swap_name(c, n.sym));
      case Term::Kind::Const: return "c" + std::to_string(n.sym);
      case Term::Kind::Apply:
        return "o" + std::to_string(n.sym) + "(" + canon_term(n.l, c) + "," + canon_term(n.r, c) + ")";
    }
    return {};
  }

  // Canonical text of f after swapping the pair (a, b) when c.swap is set.
  // Subtrees not mentioning the pair collapse to their shape and free
  // variables; operands of commutative connectives and of equality are sorted.
  std::string canon(int f, Canon& c) {
    if (c.failed || c.budget-- == 0) {
      c.failed = true;
      return {};
    }
    const FNode& n = fnodes[f];
    if (!has_free(f, c.a) && !has_free(f, c.b)) {
      std::string s = "#" + std::to_string(n.shape) + "[";
      for (int v : n.fv) s += std::to_string(v) + ",";
      return s + "]";
    }
    switch (n.kind) {
      case Formula::Kind::Equal: {
        std::string x = canon_term(n.t1, c), y = canon_term(n.t2, c);
        if (y < x) std::swap(x, y);
        return "=(" + x + "," + y + ")";
      }
      case Formula::Kind::Not: return "!(" + canon(n.kids[0], c) + ")";
      case Formula::Kind::Implies: return ">(" + canon(n.kids[0], c) + "," + canon(n.kids[1], c) + ")";
      case Formula::Kind::And:
      case Formula::Kind::Or: {
        std::vector<std::string> parts;
        for (int k : n.kids) parts.push_back(canon(k, c));
        std::sort(parts.begin(), parts.end());
        std::string s = n.kind == Formula::Kind::And ? "&(" : "|(";
        for (const auto& x : parts) s += x + ";";
        return s + ")";
      }
      case Formula::Kind::Exists:
      case Formula::Kind::Forall:
        if (n.var == c.a || n.var == c.b) {
          c.failed = true;
          return {};
        }
        return std::string(n.kind == Formula::Kind::Exists ? "E" : "A") + std::to_string(n.var) + "(" +
               canon(n.kids[0], c) + ")";
    }
    return {};
  }

  bool detect_symmetry(const Plan& p) {
    const std::size_t k = p.vars.size();
    if (k < 2) return false;
    for (const auto& ps : p.pins)
      if (!ps.empty()) return false;
    const Candidates& first = candidates(p.hint_names[0]);
    for (std::size_t s = 1; s < k; ++s)
      if (candidates(p.hint_names[s]).values != first.values) return false;
    for (std::size_t s = 0; s + 1 < k; ++s) {
      std::multiset<std::string> before, after;
      Canon ident{p.vars[s], p.vars[s + 1], false};
      Canon swapped{p.vars[s], p.vars[s + 1], true};
      for (const auto& lit : p.lits) {
        if (lit.mask == 0) continue;
        std::string w = lit.want ? "+" : "-";
        before.insert(w + canon(lit.node, ident));
        after.insert(w + canon(lit.node, swapped));
        if (ident.failed || swapped.failed) return false;
      }
      if (before != after) return false;
    }
    return true;
  }

  // -- candidates --------------------------------------------------------------

  const Candidates& candidates(int hint_name) {
    auto it = cand_cache.find(hint_name);
    if (it != cand_cache.end()) return it->second;
    Candidates c;
    auto h = hints.find(names[hint_name]);
    if (h != hints.end())
      for (ElemId e : h->second) {
        if (!c.hinted.insert(e).second) continue;
        c.values.push_back(e);
        c.sources.push_back(model.in_domain(e) ? WitnessSource::Hint : WitnessSource::External);
      }
    for (ElemId e : model.domain())
      if (!c.hinted.count(e)) {
        c.values.push_back(e);
        c.sources.push_back(WitnessSource::Domain);
      }
    return cand_cache.emplace(hint_name, std::move(c)).first->second;
  }

  // -- search ------------------------------------------------------------------

  bool check_pre(const Plan& p) {
    for (int i : p.pre) {
      const Lit& l = p.lits[i];
      if (eval_node(l.node) != l.want) return false;
    }
    return true;
  }

  bool run_plan(Plan& p, Record* rec) {
    if (!check_pre(p)) return false;
    std::vector<WitnessSource> srcs(p.vars.size(), WitnessSource::Domain);
    return search(p, 0, 0, rec, srcs);
  }

  Solved solve_down(int t, int var, ElemId val) {
    const TNode& n = terms[t];
    if (n.kind == Term::Kind::Var) return {SolveStatus::Unique, val};
    bool in_left = std::find(terms[n.l].fv.begin(), terms[n.l].fv.end(), var) != terms[n.l].fv.end();
    Solved s;
    if (in_left) {
      ElemId known = eval_term(n.r);
      s = model.solve(n.sym, known, false, val);
    } else {
      ElemId known = eval_term(n.l);
      s = model.solve(n.sym, known, true, val);
    }
    if (s.status != SolveStatus::Unique) return s;
    return solve_down(in_left ? n.l : n.r, var, s.value);
  }

  Solved solve_pin(const Pin& pin, int var) {
    const FNode& eqn = fnodes[pin.node];
    int side = pin.in_lhs ? eqn.t1 : eqn.t2;
    int other = pin.in_lhs ? eqn.t2 : eqn.t1;
    return solve_down(side, var, eval_term(other));
  }

  bool try_value(Plan& p, std::size_t slot, ElemId val, WitnessSource src, std::uint64_t assigned, Record* rec,
                 std::vector<WitnessSource>& srcs, std::size_t cand_index) {
    ++stats.candidates;
    int v = p.vars[slot];
    ElemId old = env[v];
    char old_set = env_set[v];
    env[v] = val;
    env_set[v] = 1;
    srcs[slot] = src;
    std::uint64_t now = assigned | (std::uint64_t{1} << slot);
    bool ok = true;
    for (int i : p.by_slot[slot]) {
      const Lit& l = p.lits[i];
      if ((l.mask & ~now) != 0) continue;
      if (eval_node(l.node) != l.want) {
        ok = false;
        break;
      }
    }
    if (ok) ok = search(p, now, cand_index, rec, srcs);
    env[v] = old;
    env_set[v] = old_set;
    return ok;
  }

  bool search(Plan& p, std::uint64_t assigned, std::size_t sym_start, Record* rec,
              std::vector<WitnessSource>& srcs) {
    const std::size_t k = p.vars.size();
    const std::uint64_t full = k == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
    if (assigned == full) {
      if (rec) {
        rec->values.clear();
        for (int v : p.vars) rec->values.push_back(env[v]);
        rec->sources = srcs;
      }
      return true;
    }
    std::size_t slot = k;
    const Pin* pin = nullptr;
    if (p.symmetric) {
      slot = static_cast<std::size_t>(std::popcount(assigned));
    } else {
      for (std::size_t s = 0; s < k && !pin; ++s) {
        if (assigned >> s & 1) continue;
        for (const Pin& pn : p.pins[s])
          if ((pn.req & ~assigned) == 0) {
            slot = s;
            pin = &pn;
            break;
          }
      }
      if (!pin) {
        for (int s : p.enum_order)
          if (!(assigned >> s & 1)) {
            slot = static_cast<std::size_t>(s);
            break;
          }
        if (slot == k)
          for (std::size_t s = 0; s < k; ++s)
            if (!(assigned >> s & 1)) {
              slot = s;
              break;
            }
      }
    }
    const Candidates& cands = candidates(p.hint_names[slot]);
    if (pin) {
      Solved r = solve_pin(*pin, p.vars[slot]);
      if (r.status == SolveStatus::NoSolution) return false;
      if (r.status == SolveStatus::Unique) {
        ++stats.pinned;
        ElemId val = r.value;
        WitnessSource src;
        if (cands.hinted.count(val)) {
          src = model.in_domain(val) ? WitnessSource::Hint : WitnessSource::External;
        } else if (model.in_domain(val)) {
          src = WitnessSource::Domain;
        } else if (opts.admit_pinned && model.in_carrier(val)) {
          src = WitnessSource::Pinned;
        } else {
          return false;
        }
        return try_value(p, slot, val, src, assigned, rec, srcs, 0);
      }
    }
    for (std::size_t i = p.symmetric ? sym_start : 0; i < cands.values.size(); ++i)
      if (try_value(p, slot, cands.values[i], cands.sources[i], assigned, rec, srcs, i)) return true;
    return false;
  }

  // -- entry points --------------------------------------------------------------

  EvalResult run(const Formula& f, const Assignment& assignment) {
    auto t0 = std::chrono::steady_clock::now();
    if (!uses_only(f, model.signature()))
      throw SignatureMismatch("formula uses symbols outside the " + model.signature().name + " signature");
    int root = compile(f);
    std::vector<int> bound;
    for (const auto& [name, val] : assignment) {
      int id = name_id(name);
      env[id] = val;
      env_set[id] = 1;
      bound.push_back(id);
    }
    for (int v : fnodes[root].fv)
      if (!env_set[v]) {
        for (int b : bound) env_set[b] = 0;
        throw std::invalid_argument("free variable " + names[v] + " has no value");
      }
    EvalResult res;
    res.domain_size = model.domain_size();
    EvalStats before = stats;
    try {
      if (fnodes[root].src.is_quantifier()) {
        Record rec;
        res.truth = run_quant(root, &rec);
        const Plan& p = plans[fnodes[root].plan];
        bool found = p.exists_mode ? res.truth : !res.truth;
        if (found) {
          std::vector<Witness> ws;
          for (std::size_t i = 0; i < rec.values.size(); ++i)
            ws.push_back(Witness{base_name(names[p.vars[i]]), rec.values[i], rec.sources[i]});
          for (const auto& w : ws) {
            if (w.source == WitnessSource::Hint || w.source == WitnessSource::External) ++res.hints_used;
            if (w.source == WitnessSource::External) res.external_witnesses.push_back(w.value);
          }
          (p.exists_mode ? res.witnesses : res.counterexample) = std::move(ws);
        }
      } else {
        res.truth = eval_node(root);
      }
    } catch (...) {
      for (int b : bound) env_set[b] = 0;
      throw;
    }
    for (int b : bound) env_set[b] = 0;
    res.stats.quantifier_runs = stats.quantifier_runs - before.quantifier_runs;
    res.stats.memo_hits = stats.memo_hits - before.memo_hits;
    res.stats.candidates = stats.candidates - before.candidates;
    res.stats.pinned = stats.pinned - before.pinned;
    res.stats.symmetric_blocks = stats.symmetric_blocks - before.symmetric_blocks;
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
  }
};

Evaluator::Evaluator(Model& model, Hints hints, EvalOptions opts)
    : model_(model), impl_(std::make_unique<Impl>(model, std::move(hints), opts)) {}

Evaluator::~Evaluator() = default;

EvalResult Evaluator::eval(const Formula& f) {
  if (!is_sentence(f)) throw std::invalid_argument("eval needs a sentence; use eval_with for free variables");
  return impl_->run(f, {});
}

EvalResult Evaluator::eval_with(const Formula& f, const Assignment& assignment) { return impl_->run(f, assignment); }

const EvalStats& Evaluator::stats() const { return impl_->stats; }

EvalResult eval(Model& model, const Formula& sentence, const Hints& hints, EvalOptions opts) {
  Evaluator ev(model, hints, opts);
  return ev.eval(sentence);
}

// ---------------------------------------------------------------------------
// Characterization and parallel counterexamples

std::size_t CharacterizeReport::count_true() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.formula; }));
}

CharacterizeReport characterize(Evaluator& ev, const Formula& formula, const std::function<bool(ElemId)>& oracle) {
  auto fv = free_vars(formula);
  if (fv.size() != 1) throw std::invalid_argument("characterize needs exactly one free variable");
  CharacterizeReport rep;
  rep.var = *fv.begin();
  std::vector<ElemId> dom = ev.model().domain();
  for (ElemId e : dom) {
    CharacterizeRow row{e, ev.holds(formula, {{rep.var, e}}), oracle(e)};
    if (row.formula != row.oracle) rep.disagreements.push_back(e);
    rep.rows.push_back(row);
  }
  return rep;
}

CharacterizeReport characterize(Model& model, const Formula& formula, const std::function<bool(ElemId)>& oracle,
                                const Hints& hints, EvalOptions opts) {
  Evaluator ev(model, hints, opts);
  return characterize(ev, formula, oracle);
}

std::vector<std::size_t> counterexamples(const Model& model, const Formula& body, const Hints& hints,
                                         EvalOptions opts, unsigned threads) {
  auto fv = free_vars(body);
  if (fv.size() != 1) throw std::invalid_argument("counterexamples needs exactly one free variable");
  const std::string var = *fv.begin();
  threads = std::max(1u, threads);
  const std::size_t size = model.domain_size();
  std::vector<std::vector<std::size_t>> parts(threads);
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](unsigned t) {
    try {
      auto local = model.clone();
      Evaluator ev(*local, hints, opts);
      for (std::size_t i = t; i < size; i += threads)
        if (!ev.holds(body, {{var, local->domain()[i]}})) parts[t].push_back(i);
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<std::size_t> out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  std::sort(out.begin(), out.end());
  return out;
}

Hints parse_hints(Model& model, const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("hints must be a JSON object");
  Hints h;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_array()) throw std::invalid_argument("hint list for " + it.key() + " must be an array");
    std::vector<ElemId> vals;
    for (const auto& e : it.value()) vals.push_back(model.from_json(e));
    h.emplace(it.key(), std::move(vals));
  }
  return h;
}

}  // namespace elemeq
