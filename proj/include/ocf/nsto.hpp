#pragma once

// Deciding occur-check behaviour of a unification problem.
//
//   NSTO:  no run of the full rules ever performs OccurFail.
//   WNSTO: some run of the full rules halts without performing OccurFail.
//
// Both are decided exactly by searching the run space (the choice per step
// is which equation to act on; the action itself is determined), with
// memoization over states considered up to variable renaming.  Cheap
// sufficient conditions certify many instances without any search.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ocf/moding.hpp"
#include "ocf/term.hpp"
#include "ocf/unify.hpp"

namespace ocf {

inline constexpr std::size_t kDefaultBudget = 100000;

enum class Property { Nsto, Wnsto };
enum class VerdictValue { True, False, BudgetExceeded };

inline const char* to_string(Property p) { return p == Property::Nsto ? "nsto" : "wnsto"; }
inline const char* to_string(VerdictValue v) {
  switch (v) {
    case VerdictValue::True: return "true";
    case VerdictValue::False: return "false";
    case VerdictValue::BudgetExceeded: return "budget_exceeded";
  }
  return "?";
}

struct Verdict {
  Property property = Property::Nsto;
  VerdictValue value = VerdictValue::False;
  // For property=Nsto, value=false: a run performing OccurFail.
  // For property=Wnsto, value=true: a halting run that avoids OccurFail.
  std::optional<RunTrace> witness;
  std::optional<std::string> certificate;
  std::size_t explored = 0;
};

// ---------------------------------------------------------------------------
// Canonical forms: equation sets up to variable renaming.

namespace detail_canon {

inline void ser_term(const Term& t, const std::map<VarId, int>& labels, std::string& out) {
  if (t.is_var()) {
    auto it = labels.find(t.var_id());
    out += 'V';
    out += it == labels.end() ? std::string("?") : std::to_string(it->second);
    return;
  }
  out += t.functor();
  out += '/';
  out += std::to_string(t.arity());
  if (!t.args().empty()) {
    out += '(';
    for (std::size_t i = 0; i < t.arity(); ++i) {
      if (i) out += ',';
      ser_term(t.args()[i], labels, out);
    }
    out += ')';
  }
}

// Sort structurally, relabel variables by first occurrence over the sorted
// sequence, and iterate once more so the labels can refine the order.
inline std::vector<std::size_t> canon_order(const std::vector<Term>& items,
                                            std::map<VarId, int>& labels) {
  std::vector<std::size_t> order(items.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  labels.clear();
  for (int pass = 0; pass < 2; ++pass) {
    std::vector<std::string> sers(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) ser_term(items[i], labels, sers[i]);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return sers[a] < sers[b]; });
    labels.clear();
    int next = 0;
    for (std::size_t idx : order) {
      std::vector<Term> occ;
      collect_var_occurrences(items[idx], occ);
      for (const Term& v : occ)
        if (!labels.count(v.var_id())) labels[v.var_id()] = next++;
    }
  }
  return order;
}

inline std::string canonical_key(const std::vector<Term>& items) {
  std::map<VarId, int> labels;
  std::vector<std::size_t> order = canon_order(items, labels);
  std::string key;
  for (std::size_t idx : order) {
    ser_term(items[idx], labels, key);
    key += ';';
  }
  return key;
}

inline std::vector<Term> eq_items(const EquationSet& e) {
  std::vector<Term> out;
  out.reserve(e.size());
  for (const Equation& eq : e) out.push_back(Term::compound("=", {eq.lhs, eq.rhs}));
  return out;
}

// Exact isomorphism: align the two canonical orders and demand a variable
// bijection.  False negatives only make memoization less effective.
inline bool is_isomorphic(const std::vector<Term>& a, const std::vector<Term>& b) {
  if (a.size() != b.size()) return false;
  std::map<VarId, int> la, lb;
  std::vector<std::size_t> oa = canon_order(a, la), ob = canon_order(b, lb);
  std::map<VarId, VarId> fwd, bwd;
  std::function<bool(const Term&, const Term&)> walk = [&](const Term& x, const Term& y) {
    if (x.is_var() != y.is_var()) return false;
    if (x.is_var()) {
      auto f = fwd.find(x.var_id());
      auto g = bwd.find(y.var_id());
      if (f == fwd.end() && g == bwd.end()) {
        fwd[x.var_id()] = y.var_id();
        bwd[y.var_id()] = x.var_id();
        return true;
      }
      return f != fwd.end() && g != bwd.end() && f->second == y.var_id() &&
             g->second == x.var_id();
    }
    if (x.functor() != y.functor() || x.arity() != y.arity()) return false;
    for (std::size_t i = 0; i < x.arity(); ++i)
      if (!walk(x.args()[i], y.args()[i])) return false;
    return true;
  };
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!walk(a[oa[i]], b[ob[i]])) return false;
  return true;
}

class CanonMemo {
 public:
  bool seen(const std::vector<Term>& items) const {
    auto it = buckets_.find(canonical_key(items));
    if (it == buckets_.end()) return false;
    for (const auto& rep : it->second)
      if (is_isomorphic(rep, items)) return true;
    return false;
  }

  void mark(const std::vector<Term>& items) { buckets_[canonical_key(items)].push_back(items); }

  std::size_t size() const { return buckets_.size(); }

 private:
  std::map<std::string, std::vector<std::vector<Term>>> buckets_;
};

struct Exhausted {};

}  // namespace detail_canon

inline std::string canonical_key(const EquationSet& e) {
  return detail_canon::canonical_key(detail_canon::eq_items(e));
}

inline bool is_isomorphic(const EquationSet& a, const EquationSet& b) {
  return detail_canon::is_isomorphic(detail_canon::eq_items(a), detail_canon::eq_items(b));
}

// ---------------------------------------------------------------------------
// Exact deciders.

inline Verdict decide_nsto(const EquationSet& e, std::size_t budget = kDefaultBudget) {
  detail_canon::CanonMemo done;
  std::size_t explored = 0;
  std::vector<ScriptEntry> path;
  std::optional<std::vector<ScriptEntry>> hit;

  std::function<bool(const EquationSet&)> occur_reachable = [&](const EquationSet& cur) {
    if (++explored > budget) throw detail_canon::Exhausted{};
    std::vector<Choice> choices = applicable(cur, Algo::Mma);
    for (const Choice& c : choices)
      if (c.action == ActionTag::OccurFail) {
        path.push_back({c.i, c.j});
        hit = path;
        path.pop_back();
        return true;
      }
    for (const Choice& c : choices) {
      if (c.action == ActionTag::Clash) continue;
      EquationSet next = std::get<EquationSet>(step(cur, c));
      if (done.seen(detail_canon::eq_items(next))) continue;
      path.push_back({c.i, c.j});
      bool bad = occur_reachable(next);
      path.pop_back();
      if (bad) return true;
    }
    done.mark(detail_canon::eq_items(cur));
    return false;
  };

  Verdict v;
  v.property = Property::Nsto;
  v.certificate = "exhaustive-search";
  try {
    bool bad = occur_reachable(e);
    v.value = bad ? VerdictValue::False : VerdictValue::True;
    if (bad) v.witness = run(e, Algo::Mma, Strategy::scripted(*hit), {false, {}, 1u << 20});
  } catch (const detail_canon::Exhausted&) {
    v.value = VerdictValue::BudgetExceeded;
  }
  v.explored = explored;
  return v;
}

inline Verdict decide_wnsto(const EquationSet& e, std::size_t budget = kDefaultBudget) {
  detail_canon::CanonMemo dead;
  std::size_t explored = 0;
  std::vector<ScriptEntry> path;
  std::optional<std::vector<ScriptEntry>> safe_script;

  std::function<bool(const EquationSet&)> safe = [&](const EquationSet& cur) {
    if (++explored > budget) throw detail_canon::Exhausted{};
    std::vector<Choice> choices = applicable(cur, Algo::Mma);
    if (choices.empty()) {  // halts successfully: an occur-check free run
      safe_script = path;
      return true;
    }
    for (const Choice& c : choices)
      if (c.action == ActionTag::Clash) {  // halt in failure without OccurFail
        path.push_back({c.i, c.j});
        safe_script = path;
        path.pop_back();
        return true;
      }
    for (const Choice& c : choices) {
      if (c.action == ActionTag::OccurFail) continue;
      EquationSet next = std::get<EquationSet>(step(cur, c));
      if (dead.seen(detail_canon::eq_items(next))) continue;
      path.push_back({c.i, c.j});
      bool ok = safe(next);
      path.pop_back();
      if (ok) return true;
    }
    dead.mark(detail_canon::eq_items(cur));
    return false;
  };

  Verdict v;
  v.property = Property::Wnsto;
  v.certificate = "exhaustive-search";
  try {
    bool ok = safe(e);
    v.value = ok ? VerdictValue::True : VerdictValue::False;
    if (ok) v.witness = run(e, Algo::Mma, Strategy::scripted(*safe_script), {false, {}, 1u << 20});
  } catch (const detail_canon::Exhausted&) {
    v.value = VerdictValue::BudgetExceeded;
  }
  v.explored = explored;
  return v;
}

// ---------------------------------------------------------------------------
// Sufficient conditions (sound, incomplete).

// Disjoint variables and one linear side: s = t is NSTO.
inline bool nsto_by_linearity(const std::vector<Term>& s, const std::vector<Term>& t) {
  if (s.size() != t.size())
    throw std::invalid_argument("nsto_by_linearity: sequence lengths differ");
  std::set<VarId> vs, vt;
  for (const Term& x : s) {
    auto v = var_ids(x);
    vs.insert(v.begin(), v.end());
  }
  for (const Term& x : t) {
    auto v = var_ids(x);
    vt.insert(v.begin(), v.end());
  }
  for (VarId v : vs)
    if (vt.count(v)) return false;
  return is_linear(s) || is_linear(t);
}

// Variable-disjoint atoms of one predicate under a two-valued moding: one of
// them input-output disjoint, one input linear and the other output linear.
inline bool nsto_by_atom_conditions(const Atom& a, const Atom& h, const Moding3& m) {
  if (a.pred != h.pred || a.arity() != h.arity())
    throw std::invalid_argument("nsto_by_atom_conditions: predicate mismatch");
  const std::vector<Mode>& modes = m.modes_of(a);
  for (Mode md : modes)
    if (md == Mode::Bot) return false;  // stated for two-valued modings only
  std::set<VarId> va = var_ids(a), vh = var_ids(h);
  for (VarId v : va)
    if (vh.count(v)) return false;
  const bool disjoint_either = is_io_disjoint(a, m) || is_io_disjoint(h, m);
  const bool a_in_h_out = is_input_linear(a, m) && is_output_linear(h, m);
  const bool h_in_a_out = is_input_linear(h, m) && is_output_linear(a, m);
  return disjoint_either && (a_in_h_out || h_in_a_out);
}

// Ground input positions on one side, a weakly linear head on the other:
// their unification is WNSTO.  Sound for three-valued modings as well: the
// ground inputs decide first and instantiate every repeated head variable.
inline bool wnsto_by_weakly_linear(const Atom& a, const Atom& h, const Moding3& m) {
  if (a.pred != h.pred || a.arity() != h.arity())
    throw std::invalid_argument("wnsto_by_weakly_linear: predicate mismatch");
  std::set<VarId> va = var_ids(a), vh = var_ids(h);
  for (VarId v : va)
    if (vh.count(v)) return false;
  for (const Term& t : input_terms(a, m))
    if (!var_ids(t).empty()) return false;
  return is_weakly_linear(h, m);
}

// Split certificate: if E1 is NSTO and non-unifiable, or E1 is NSTO with mgu
// theta1 and E2 theta1 is NSTO, then E1 u E2 is WNSTO.  Falls back to the
// exact decider when the hypotheses fail.
inline Verdict wnsto_by_split(const EquationSet& e1, const EquationSet& e2,
                              std::size_t budget = kDefaultBudget) {
  Verdict v1 = decide_nsto(e1, budget);
  if (v1.value == VerdictValue::True) {
    std::optional<Substitution> theta = unify(e1);
    if (!theta) {
      Verdict v;
      v.property = Property::Wnsto;
      v.value = VerdictValue::True;
      v.certificate = "split";
      v.explored = v1.explored;
      return v;
    }
    Verdict v2 = decide_nsto(theta->apply(e2), budget);
    if (v2.value == VerdictValue::True) {
      Verdict v;
      v.property = Property::Wnsto;
      v.value = VerdictValue::True;
      v.certificate = "split";
      v.explored = v1.explored + v2.explored;
      return v;
    }
  }
  return decide_wnsto(e1.union_with(e2), budget);
}

// ---------------------------------------------------------------------------
// Combined classification of one available unification A = H, cheapest
// certificate first: atom-conditions, linearity, weakly-linear, split, exact.

struct PairVerdicts {
  Verdict nsto;
  Verdict wnsto;
};

inline PairVerdicts classify_unification(const Atom& a, const Atom& h, const Moding3* m,
                                         std::size_t budget = kDefaultBudget) {
  EquationSet e = EquationSet::of(a, h);
  const bool moded = m && m->declares({a.pred, a.arity()});

  std::optional<Verdict> nsto;
  if (moded && nsto_by_atom_conditions(a, h, *m)) {
    Verdict v;
    v.property = Property::Nsto;
    v.value = VerdictValue::True;
    v.certificate = "atom-conditions";
    nsto = v;
  }
  if (!nsto && nsto_by_linearity(a.args, h.args)) {
    Verdict v;
    v.property = Property::Nsto;
    v.value = VerdictValue::True;
    v.certificate = "linearity";
    nsto = v;
  }
  if (!nsto) nsto = decide_nsto(e, budget);

  Verdict wnsto;
  if (nsto->value == VerdictValue::True) {
    wnsto.property = Property::Wnsto;
    wnsto.value = VerdictValue::True;
    wnsto.certificate = nsto->certificate;
  } else if (moded && wnsto_by_weakly_linear(a, h, *m)) {
    wnsto.property = Property::Wnsto;
    wnsto.value = VerdictValue::True;
    wnsto.certificate = "weakly-linear";
  } else if (!a.args.empty()) {
    EquationSet e1 = EquationSet::of(a.args[0], h.args[0]);
    EquationSet e2;
    for (std::size_t i = 1; i < a.args.size(); ++i) e2.push(a.args[i], h.args[i]);
    wnsto = wnsto_by_split(e1, e2, budget);
  } else {
    wnsto = decide_wnsto(e, budget);
  }
  return {*nsto, wnsto};
}

// ---------------------------------------------------------------------------
// Occur-free run space, enumerated exhaustively.

struct MmaMinusOutcomes {
  bool complete = true;  // false when the budget cut the enumeration short
  bool clash_reachable = false;
  std::vector<EquationSet> terminals;  // reachable stuck sets, deduplicated
  std::size_t explored = 0;
};

inline MmaMinusOutcomes enumerate_mma_minus(const EquationSet& e,
                                            std::size_t budget = kDefaultBudget) {
  MmaMinusOutcomes out;
  detail_canon::CanonMemo visited, terminal_seen;

  std::function<void(const EquationSet&)> rec = [&](const EquationSet& cur) {
    if (++out.explored > budget) throw detail_canon::Exhausted{};
    std::vector<Choice> choices = applicable(cur, Algo::MmaMinus);
    if (choices.empty()) {
      if (!terminal_seen.seen(detail_canon::eq_items(cur))) {
        terminal_seen.mark(detail_canon::eq_items(cur));
        out.terminals.push_back(cur);
      }
      return;
    }
    for (const Choice& c : choices) {
      if (c.action == ActionTag::Clash) {
        out.clash_reachable = true;
        continue;
      }
      EquationSet next = std::get<EquationSet>(step(cur, c));
      if (visited.seen(detail_canon::eq_items(next))) continue;
      visited.mark(detail_canon::eq_items(next));
      rec(next);
    }
  };

  try {
    visited.mark(detail_canon::eq_items(e));
    rec(e);
  } catch (const detail_canon::Exhausted&) {
    out.complete = false;
  }
  return out;
}

// Substitutions are variants on vars when they map the tuple of vars to
// renamings of each other.
inline bool variant_equal_on(const std::set<VarId>& vars, const Substitution& s,
                             const Substitution& t) {
  std::vector<Term> xs, ys;
  for (VarId v : vars) {
    Term x = Term::var(v);
    xs.push_back(s.apply(x));
    ys.push_back(t.apply(x));
  }
  return detail_canon::is_isomorphic({Term::compound("tuple", xs)},
                                     {Term::compound("tuple", ys)});
}

inline bool solves(const Substitution& s, const EquationSet& e) {
  for (const Equation& eq : e)
    if (s.apply(eq.lhs) != s.apply(eq.rhs)) return false;
  return true;
}

struct SoundnessReport {
  bool ok = false;
  bool budget_exceeded = false;
  bool oracle_unifiable = false;
  bool clash_reachable = false;
  std::size_t terminals = 0;
  std::string detail;
};

// Checks that every occur-free run on e is correct: all runs halt in failure
// exactly when e is not unifiable, and every reachable stuck set is a
// unifiable semi-solved set whose completion is an mgu of e.
inline SoundnessReport check_mma_minus_sound(const EquationSet& e,
                                             std::size_t budget = kDefaultBudget) {
  SoundnessReport rep;
  std::optional<Substitution> oracle = unify(e);
  rep.oracle_unifiable = oracle.has_value();

  MmaMinusOutcomes outs = enumerate_mma_minus(e, budget);
  rep.clash_reachable = outs.clash_reachable;
  rep.terminals = outs.terminals.size();
  if (!outs.complete) {
    rep.budget_exceeded = true;
    rep.detail = "enumeration budget exceeded";
    return rep;
  }

  if (!oracle) {
    if (outs.clash_reachable && outs.terminals.empty()) {
      rep.ok = true;
    } else {
      rep.detail = "non-unifiable input reached a stuck set";
    }
    return rep;
  }

  if (outs.clash_reachable) {
    rep.detail = "unifiable input can halt in failure";
    return rep;
  }
  for (const EquationSet& t : outs.terminals) {
    if (!is_semi_solved(t)) {
      rep.detail = "stuck set is not semi-solved: " + canonical_key(t);
      return rep;
    }
    std::optional<Substitution> mgu = finish_semi_solved(t);
    if (!mgu) {
      rep.detail = "semi-solved terminal is not unifiable";
      return rep;
    }
    if (!solves(*mgu, e)) {
      rep.detail = "completed substitution does not solve the input";
      return rep;
    }
    if (!variant_equal_on(e.vars(), *mgu, *oracle)) {
      rep.detail = "completed substitution is not most general";
      return rep;
    }
  }
  rep.ok = true;
  return rep;
}

}  // namespace ocf
