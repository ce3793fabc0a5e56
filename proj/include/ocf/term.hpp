#pragma once

// First-order terms over a signature of function symbols with fixed arities,
// plus the small value types built directly on them: atoms, clauses, queries,
// equations and substitutions.  Everything here is an immutable value; copies
// share structure, and all operations are pure.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ocf {

using VarId = std::int64_t;

// A term is either a variable (identified by VarId; the name is only for
// display) or a compound f(t1,...,tn).  Constants are 0-ary compounds.  The
// same symbol name with two different arities denotes two distinct symbols.
class Term {
 public:
  static Term var(VarId id, std::string name = {}) {
    auto n = std::make_shared<Node>();
    n->is_var = true;
    n->id = id;
    n->label = std::move(name);
    return Term(std::move(n));
  }

  static Term compound(std::string functor, std::vector<Term> args = {}) {
    if (functor.empty()) throw std::invalid_argument("empty functor");
    auto n = std::make_shared<Node>();
    n->is_var = false;
    n->id = -1;
    n->label = std::move(functor);
    n->args = std::move(args);
    return Term(std::move(n));
  }

  static Term constant(std::string name) { return compound(std::move(name)); }

  bool is_var() const { return node_->is_var; }
  bool is_compound() const { return !node_->is_var; }
  bool is_constant() const { return !node_->is_var && node_->args.empty(); }

  VarId var_id() const {
    require(is_var(), "var_id on non-variable");
    return node_->id;
  }
  const std::string& var_name() const {
    require(is_var(), "var_name on non-variable");
    return node_->label;
  }
  const std::string& functor() const {
    require(is_compound(), "functor on variable");
    return node_->label;
  }
  const std::vector<Term>& args() const {
    require(is_compound(), "args on variable");
    return node_->args;
  }
  std::size_t arity() const { return args().size(); }

  bool same_node(const Term& o) const { return node_ == o.node_; }

 private:
  struct Node {
    bool is_var = false;
    VarId id = -1;
    std::string label;
    std::vector<Term> args;
  };

  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static void require(bool ok, const char* what) {
    if (!ok) throw std::logic_error(what);
  }

  std::shared_ptr<const Node> node_;
};

// Structural total order: variables (by id) before compounds, compounds by
// functor, then arity, then arguments left to right.
inline int compare(const Term& a, const Term& b) {
  if (a.same_node(b)) return 0;
  if (a.is_var() != b.is_var()) return a.is_var() ? -1 : 1;
  if (a.is_var()) return a.var_id() < b.var_id() ? -1 : a.var_id() > b.var_id() ? 1 : 0;
  if (int c = a.functor().compare(b.functor()); c != 0) return c < 0 ? -1 : 1;
  if (a.arity() != b.arity()) return a.arity() < b.arity() ? -1 : 1;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (int c = compare(a.args()[i], b.args()[i]); c != 0) return c;
  return 0;
}

inline bool operator==(const Term& a, const Term& b) { return compare(a, b) == 0; }
inline bool operator!=(const Term& a, const Term& b) { return !(a == b); }
inline bool operator<(const Term& a, const Term& b) { return compare(a, b) < 0; }

// |t|: number of variable and symbol occurrences; |f(X,a)| = 3, |X| = 1.
inline std::size_t term_size(const Term& t) {
  if (t.is_var()) return 1;
  std::size_t n = 1;
  for (const Term& a : t.args()) n += term_size(a);
  return n;
}

inline bool occurs_in(VarId v, const Term& t) {
  if (t.is_var()) return t.var_id() == v;
  for (const Term& a : t.args())
    if (occurs_in(v, a)) return true;
  return false;
}

inline void collect_var_occurrences(const Term& t, std::vector<Term>& out) {
  if (t.is_var()) {
    out.push_back(t);
    return;
  }
  for (const Term& a : t.args()) collect_var_occurrences(a, out);
}

// Distinct variables of t in first-occurrence order.
inline std::vector<Term> var_terms(const Term& t) {
  std::vector<Term> occ;
  collect_var_occurrences(t, occ);
  std::vector<Term> out;
  std::set<VarId> seen;
  for (const Term& v : occ)
    if (seen.insert(v.var_id()).second) out.push_back(v);
  return out;
}

inline std::set<VarId> var_ids(const Term& t) {
  std::set<VarId> out;
  std::vector<Term> occ;
  collect_var_occurrences(t, occ);
  for (const Term& v : occ) out.insert(v.var_id());
  return out;
}

inline void count_var_occurrences(const Term& t, std::map<VarId, std::size_t>& counts) {
  if (t.is_var()) {
    ++counts[t.var_id()];
    return;
  }
  for (const Term& a : t.args()) count_var_occurrences(a, counts);
}

// A sequence of terms is linear when no variable occurs twice across the
// whole sequence.
inline bool is_linear(const std::vector<Term>& ts) {
  std::map<VarId, std::size_t> counts;
  for (const Term& t : ts) count_var_occurrences(t, counts);
  return std::all_of(counts.begin(), counts.end(),
                     [](const auto& kv) { return kv.second == 1; });
}

inline bool is_linear(const Term& t) { return is_linear(std::vector<Term>{t}); }

// ---------------------------------------------------------------------------
// Atoms, clauses, queries.

struct Atom {
  std::string pred;
  std::vector<Term> args;

  std::size_t arity() const { return args.size(); }
  Term as_term() const { return Term::compound(pred, args); }
};

inline bool operator==(const Atom& a, const Atom& b) {
  return a.pred == b.pred && a.args == b.args;
}
inline bool operator!=(const Atom& a, const Atom& b) { return !(a == b); }

using Query = std::vector<Atom>;

struct Clause {
  Atom head;
  Query body;
};

inline std::set<VarId> var_ids(const Atom& a) { return var_ids(a.as_term()); }

inline std::set<VarId> var_ids(const Query& q) {
  std::set<VarId> out;
  for (const Atom& a : q) {
    auto vs = var_ids(a);
    out.insert(vs.begin(), vs.end());
  }
  return out;
}

inline std::set<VarId> var_ids(const Clause& c) {
  std::set<VarId> out = var_ids(c.head);
  auto vs = var_ids(c.body);
  out.insert(vs.begin(), vs.end());
  return out;
}

inline VarId max_var_id(const std::set<VarId>& vs) {
  return vs.empty() ? -1 : *vs.rbegin();
}

// ---------------------------------------------------------------------------
// Equations.

// One equation of a set.  The stamp records insertion order and never
// changes while an equation is rewritten in place; it breaks ties when two
// candidate terms have equal size.
struct Equation {
  Term lhs;
  Term rhs;
  std::uint64_t stamp = 0;
};

inline bool same_sides(const Equation& a, const Equation& b) {
  return a.lhs == b.lhs && a.rhs == b.rhs;
}

// An ordered multiset of equations.  Duplicates are kept; order is
// observable only through strategies and rendering, never through verdicts.
class EquationSet {
 public:
  EquationSet() = default;

  static EquationSet of(const Term& l, const Term& r) {
    EquationSet e;
    e.push(l, r);
    return e;
  }

  static EquationSet of(const Atom& l, const Atom& r) {
    return of(l.as_term(), r.as_term());
  }

  // Pairwise equations s_i = t_i; sequences must have equal length.
  static EquationSet pairwise(const std::vector<Term>& ls, const std::vector<Term>& rs) {
    if (ls.size() != rs.size())
      throw std::invalid_argument("pairwise: sequence lengths differ");
    EquationSet e;
    for (std::size_t i = 0; i < ls.size(); ++i) e.push(ls[i], rs[i]);
    return e;
  }

  void push(Term l, Term r) { eqs_.push_back({std::move(l), std::move(r), next_stamp_++}); }

  std::size_t size() const { return eqs_.size(); }
  bool empty() const { return eqs_.empty(); }
  const Equation& operator[](std::size_t i) const { return eqs_.at(i); }
  const std::vector<Equation>& equations() const { return eqs_; }
  auto begin() const { return eqs_.begin(); }
  auto end() const { return eqs_.end(); }

  std::set<VarId> vars() const {
    std::set<VarId> out;
    for (const Equation& e : eqs_) {
      auto l = var_ids(e.lhs), r = var_ids(e.rhs);
      out.insert(l.begin(), l.end());
      out.insert(r.begin(), r.end());
    }
    return out;
  }

  EquationSet union_with(const EquationSet& other) const {
    EquationSet out = *this;
    for (const Equation& e : other.eqs_) out.push(e.lhs, e.rhs);
    return out;
  }

  // In-place rewrites used by the solver.  Replacements keep the original
  // equation's stamp; insertions get fresh stamps.
  void replace_sides(std::size_t i, Term l, Term r) {
    eqs_.at(i).lhs = std::move(l);
    eqs_.at(i).rhs = std::move(r);
  }

  void erase_at(std::size_t i) { eqs_.erase(eqs_.begin() + static_cast<std::ptrdiff_t>(i)); }

  // Replaces equation i by the given pairs, spliced in at position i.
  void splice_at(std::size_t i, const std::vector<std::pair<Term, Term>>& pairs) {
    std::vector<Equation> fresh;
    fresh.reserve(pairs.size());
    for (const auto& [l, r] : pairs) fresh.push_back({l, r, next_stamp_++});
    eqs_.erase(eqs_.begin() + static_cast<std::ptrdiff_t>(i));
    eqs_.insert(eqs_.begin() + static_cast<std::ptrdiff_t>(i), fresh.begin(), fresh.end());
  }

 private:
  std::vector<Equation> eqs_;
  std::uint64_t next_stamp_ = 0;
};

// Equal as sequences of equations (stamps ignored).
inline bool operator==(const EquationSet& a, const EquationSet& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_sides(a[i], b[i])) return false;
  return true;
}
inline bool operator!=(const EquationSet& a, const EquationSet& b) { return !(a == b); }

// ---------------------------------------------------------------------------
// Substitutions.

// A substitution {X1/t1, ..., Xn/tn} with Xi distinct and ti != Xi.
// Application is simultaneous: bound variables inside the ti are not
// re-resolved.  The binding map keeps the variable term itself so display
// names survive.
class Substitution {
 public:
  Substitution() = default;

  static Substitution of(std::initializer_list<std::pair<Term, Term>> bs) {
    Substitution s;
    for (const auto& [v, t] : bs) s.bind(v, t);
    return s;
  }

  // Adds X/t.  X/X pairs are dropped; rebinding an already-bound variable to
  // a different term is an error.
  void bind(const Term& v, const Term& t) {
    if (!v.is_var()) throw std::invalid_argument("bind: lhs must be a variable");
    if (v == t) return;
    auto it = map_.find(v.var_id());
    if (it != map_.end()) {
      if (it->second.second != t) throw std::invalid_argument("bind: variable already bound");
      return;
    }
    map_.emplace(v.var_id(), std::make_pair(v, t));
  }

  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }

  std::optional<Term> lookup(VarId v) const {
    auto it = map_.find(v);
    if (it == map_.end()) return std::nullopt;
    return it->second.second;
  }

  Term apply(const Term& t) const {
    if (map_.empty()) return t;
    if (t.is_var()) {
      if (auto b = lookup(t.var_id())) return *b;
      return t;
    }
    bool changed = false;
    std::vector<Term> args;
    args.reserve(t.arity());
    for (const Term& a : t.args()) {
      args.push_back(apply(a));
      changed = changed || !args.back().same_node(a);
    }
    return changed ? Term::compound(t.functor(), std::move(args)) : t;
  }

  Atom apply(const Atom& a) const {
    Atom out{a.pred, {}};
    out.args.reserve(a.args.size());
    for (const Term& t : a.args) out.args.push_back(apply(t));
    return out;
  }

  Query apply(const Query& q) const {
    Query out;
    out.reserve(q.size());
    for (const Atom& a : q) out.push_back(apply(a));
    return out;
  }

  Clause apply(const Clause& c) const { return Clause{apply(c.head), apply(c.body)}; }

  EquationSet apply(const EquationSet& e) const {
    EquationSet out;
    for (const Equation& eq : e) out.push(apply(eq.lhs), apply(eq.rhs));
    return out;
  }

  // this composed with `then`: X(this.compose(then)) == (X this) then.
  Substitution compose(const Substitution& then) const {
    Substitution out;
    for (const auto& [id, b] : map_) {
      (void)id;
      out.bind(b.first, then.apply(b.second));
    }
    for (const auto& [id, b] : then.map_)
      if (map_.find(id) == map_.end()) out.bind(b.first, b.second);
    return out;
  }

  Substitution restrict_to(const std::set<VarId>& vs) const {
    Substitution out;
    for (const auto& [id, b] : map_)
      if (vs.count(id)) out.bind(b.first, b.second);
    return out;
  }

  std::set<VarId> domain() const {
    std::set<VarId> out;
    for (const auto& [id, b] : map_) {
      (void)b;
      out.insert(id);
    }
    return out;
  }

  std::set<VarId> range_var_ids() const {
    std::set<VarId> out;
    for (const auto& [id, b] : map_) {
      (void)id;
      auto vs = var_ids(b.second);
      out.insert(vs.begin(), vs.end());
    }
    return out;
  }

  // Var(theta) = Dom(theta) u Var(Ran(theta)).
  std::set<VarId> all_var_ids() const {
    std::set<VarId> out = domain();
    auto r = range_var_ids();
    out.insert(r.begin(), r.end());
    return out;
  }

  bool is_idempotent() const {
    auto dom = domain();
    auto ran = range_var_ids();
    return std::none_of(dom.begin(), dom.end(), [&](VarId v) { return ran.count(v) > 0; });
  }

  // Bindings ordered by variable id: (variable term, bound term).
  const std::map<VarId, std::pair<Term, Term>>& bindings() const { return map_; }

 private:
  std::map<VarId, std::pair<Term, Term>> map_;
};

inline bool operator==(const Substitution& a, const Substitution& b) {
  if (a.size() != b.size()) return false;
  for (const auto& [id, bind] : a.bindings()) {
    auto other = b.lookup(id);
    if (!other || *other != bind.second) return false;
  }
  return true;
}
inline bool operator!=(const Substitution& a, const Substitution& b) { return !(a == b); }

// theta is linear for S when for every two distinct X, Y in S the pair
// (X theta, Y theta) is linear.
inline bool linear_for(const Substitution& theta, const std::vector<Term>& vars) {
  for (const Term& v : vars)
    if (!v.is_var()) throw std::invalid_argument("linear_for: S must contain variables");
  for (std::size_t i = 0; i < vars.size(); ++i)
    for (std::size_t j = i + 1; j < vars.size(); ++j) {
      if (vars[i].var_id() == vars[j].var_id()) continue;
      if (!is_linear({theta.apply(vars[i]), theta.apply(vars[j])})) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// Fresh variables and standardizing apart.

class VarGen {
 public:
  explicit VarGen(VarId first = 0) : next_(first) {}

  VarId fresh_id() { return next_++; }

  Term fresh(const std::string& base = {}) {
    VarId id = fresh_id();
    if (base.empty()) return Term::var(id, "_G" + std::to_string(id));
    return Term::var(id, base + std::to_string(id));
  }

  void ensure_above(VarId v) { next_ = std::max(next_, v + 1); }
  void ensure_above(const std::set<VarId>& vs) {
    if (!vs.empty()) ensure_above(*vs.rbegin());
  }

  VarId next() const { return next_; }

 private:
  VarId next_;
};

// Strips a trailing digit run so standardized names stay readable: Xs2 -> Xs.
inline std::string name_base(const std::string& name) {
  std::size_t end = name.size();
  while (end > 0 && std::isdigit(static_cast<unsigned char>(name[end - 1]))) --end;
  return name.substr(0, end);
}

// A variant of c whose variables are brand new and disjoint from `avoid`.
inline Clause standardize_apart(const Clause& c, const std::set<VarId>& avoid, VarGen& gen) {
  gen.ensure_above(avoid);
  gen.ensure_above(var_ids(c));
  Substitution rename;
  std::vector<Term> occ;
  collect_var_occurrences(c.head.as_term(), occ);
  for (const Atom& a : c.body) collect_var_occurrences(a.as_term(), occ);
  std::set<VarId> seen;
  for (const Term& v : occ)
    if (seen.insert(v.var_id()).second) rename.bind(v, gen.fresh(name_base(v.var_name())));
  return rename.apply(c);
}

}  // namespace ocf
