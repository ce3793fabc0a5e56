#pragma once

// Mode-based syntactic classification of queries, clauses and programs:
// linearity classes, the atom dependency relation, tidy / nicely moded /
// well-moded / well-3-moded / weakly tidy checks, and brute-force search
// for a moding with a given property.

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ocf/moding.hpp"
#include "ocf/parser.hpp"
#include "ocf/term.hpp"

namespace ocf {

struct Projection {
  std::vector<Term> in;
  std::vector<Term> out;
  std::vector<Term> neutral;
};

inline Projection project(const Atom& a, const Moding3& m) {
  const std::vector<Mode>& ms = m.modes_of(a);
  Projection p;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    (ms[i] == Mode::In ? p.in : ms[i] == Mode::Out ? p.out : p.neutral).push_back(a.args[i]);
  }
  return p;
}

inline std::set<VarId> input_var_ids(const Query& q, const Moding3& m) {
  std::set<VarId> out;
  for (const Atom& a : q) {
    auto vs = input_var_ids(a, m);
    out.insert(vs.begin(), vs.end());
  }
  return out;
}

inline std::set<VarId> output_var_ids(const Query& q, const Moding3& m) {
  std::set<VarId> out;
  for (const Atom& a : q) {
    auto vs = output_var_ids(a, m);
    out.insert(vs.begin(), vs.end());
  }
  return out;
}

// The input (output) positions of a query are those of all its atoms.
inline bool is_input_linear(const Query& q, const Moding3& m) {
  std::vector<Term> ts;
  for (const Atom& a : q)
    for (const Term& t : input_terms(a, m)) ts.push_back(t);
  return is_linear(ts);
}

inline bool is_output_linear(const Query& q, const Moding3& m) {
  std::vector<Term> ts;
  for (const Atom& a : q)
    for (const Term& t : output_terms(a, m)) ts.push_back(t);
  return is_linear(ts);
}

// ---------------------------------------------------------------------------
// The atom dependency relation: Ai -> Aj when some variable occurs in an
// output position of Ai and an input position of Aj (i = j allowed).

struct DepGraph {
  std::size_t n = 0;
  std::set<std::pair<std::size_t, std::size_t>> edges;

  bool has_cycle() const {
    // 0 = unvisited, 1 = on stack, 2 = done.
    std::vector<int> color(n, 0);
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& [i, j] : edges) {
      if (i == j) return true;
      adj[i].push_back(j);
    }
    std::function<bool(std::size_t)> dfs = [&](std::size_t v) {
      color[v] = 1;
      for (std::size_t w : adj[v]) {
        if (color[w] == 1) return true;
        if (color[w] == 0 && dfs(w)) return true;
      }
      color[v] = 2;
      return false;
    };
    for (std::size_t v = 0; v < n; ++v)
      if (color[v] == 0 && dfs(v)) return true;
    return false;
  }

  bool all_left_to_right() const {
    for (const auto& [i, j] : edges)
      if (i >= j) return false;
    return true;
  }
};

inline DepGraph dep_graph(const Query& q, const Moding3& m) {
  DepGraph g;
  g.n = q.size();
  std::vector<std::set<VarId>> outs(q.size()), ins(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    outs[i] = output_var_ids(q[i], m);
    ins[i] = input_var_ids(q[i], m);
  }
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j)
      for (VarId v : outs[i])
        if (ins[j].count(v)) {
          g.edges.insert({i, j});
          break;
        }
  return g;
}

// ---------------------------------------------------------------------------
// Tidy, nicely moded, well-3-moded.
//
// Tidy and nicely moded are two-valued-moding notions: the checks accept a
// 3-moding (neutral positions count as neither input nor output), but the
// resolvent-preservation guarantee holds only when every position is moded
// input or output.

inline bool is_tidy_query(const Query& q, const Moding3& m) {
  return is_output_linear(q, m) && !dep_graph(q, m).has_cycle();
}

inline bool is_tidy_clause(const Clause& c, const Moding3& m) {
  if (!is_tidy_query(c.body, m)) return false;
  if (!is_input_linear(c.head, m)) return false;
  std::set<VarId> head_in = input_var_ids(c.head, m);
  std::set<VarId> body_out = output_var_ids(c.body, m);
  for (VarId v : head_in)
    if (body_out.count(v)) return false;
  return true;
}

inline bool is_tidy_program(const Program& p, const Moding3& m) {
  for (const Clause& c : p.clauses)
    if (!is_tidy_clause(c, m)) return false;
  return true;
}

// Tidy with every dependency edge pointing strictly left to right.
inline bool is_nicely_moded(const Query& q, const Moding3& m) {
  return is_output_linear(q, m) && dep_graph(q, m).all_left_to_right();
}

inline bool is_nicely_moded(const Clause& c, const Moding3& m) {
  if (!is_nicely_moded(c.body, m)) return false;
  if (!is_input_linear(c.head, m)) return false;
  std::set<VarId> head_in = input_var_ids(c.head, m);
  std::set<VarId> body_out = output_var_ids(c.body, m);
  for (VarId v : head_in)
    if (body_out.count(v)) return false;
  return true;
}

inline bool is_nicely_moded(const Program& p, const Moding3& m) {
  for (const Clause& c : p.clauses)
    if (!is_nicely_moded(c, m)) return false;
  return true;
}

// Every input occurrence must be covered by a defining occurrence to its
// left: for queries, outputs of earlier atoms; for clauses, also the head's
// inputs.  Every head output must be defined somewhere in the clause.
inline bool is_well_3_moded(const Query& q, const Moding3& m) {
  std::set<VarId> defined;
  for (const Atom& a : q) {
    for (VarId v : input_var_ids(a, m))
      if (!defined.count(v)) return false;
    auto outs = output_var_ids(a, m);
    defined.insert(outs.begin(), outs.end());
  }
  return true;
}

inline bool is_well_3_moded(const Clause& c, const Moding3& m) {
  std::set<VarId> defined = input_var_ids(c.head, m);
  for (const Atom& a : c.body) {
    for (VarId v : input_var_ids(a, m))
      if (!defined.count(v)) return false;
    auto outs = output_var_ids(a, m);
    defined.insert(outs.begin(), outs.end());
  }
  for (VarId v : output_var_ids(c.head, m))
    if (!defined.count(v)) return false;
  return true;
}

inline bool is_well_3_moded(const Program& p, const Moding3& m) {
  for (const Clause& c : p.clauses)
    if (!is_well_3_moded(c, m)) return false;
  return true;
}

inline bool is_well_moded(const Query& q, const Moding3& m) { return is_well_3_moded(q, m); }
inline bool is_well_moded(const Clause& c, const Moding3& m) { return is_well_3_moded(c, m); }
inline bool is_well_moded(const Program& p, const Moding3& m) { return is_well_3_moded(p, m); }

// ---------------------------------------------------------------------------
// Grounding transform and weak tidiness.

// Replaces each variable occurring in an input position of the head by a
// fresh constant from the reserved namespace $g0, $g1, ..., consistently
// across the clause.  The namespace cannot be produced by the parser.
inline Clause grounding_transform(const Clause& c, const Moding3& m) {
  Substitution ground;
  int next = 0;
  for (const Term& t : input_terms(c.head, m))
    for (const Term& v : var_terms(t))
      if (!ground.lookup(v.var_id()))
        ground.bind(v, Term::constant("$g" + std::to_string(next++)));
  return ground.apply(c);
}

inline bool is_weakly_tidy(const Program& p, const Moding3& m, const Moding3& m2) {
  for (const Clause& c : p.clauses)
    if (!is_tidy_clause(grounding_transform(c, m), m2)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Moding search.

enum class ModeProperty { Tidy, NicelyModed, WellModed };

inline const char* to_string(ModeProperty p) {
  switch (p) {
    case ModeProperty::Tidy: return "tidy";
    case ModeProperty::NicelyModed: return "nicely_moded";
    case ModeProperty::WellModed: return "well_moded";
  }
  return "?";
}

struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// All two-valued modings of the user predicates under which the program has
// the property, in enumeration order (per predicate sorted by name/arity,
// positions cycling - fastest on the last position; + before -), up to
// `limit` results.  Builtin modings stay fixed.
inline std::vector<Moding3> search_modings(const Program& p, ModeProperty property,
                                           std::size_t limit = SIZE_MAX,
                                           std::size_t cap = 16) {
  std::vector<PredKey> preds(p.user_preds.begin(), p.user_preds.end());
  std::size_t total = 0;
  for (const PredKey& k : preds) total += k.arity;
  if (total > cap)
    throw CapExceeded("moding search space too large: " + std::to_string(total) +
                      " positions exceed the cap of " + std::to_string(cap));

  std::vector<Moding3> found;
  const std::uint64_t count = total >= 64 ? 0 : (std::uint64_t{1} << total);
  for (std::uint64_t mask = 0; mask < count && found.size() < limit; ++mask) {
    Moding3 cand;
    declare_builtins(cand);
    std::size_t bit = 0;
    for (const PredKey& k : preds) {
      std::vector<Mode> ms(k.arity);
      for (std::size_t i = 0; i < k.arity; ++i) {
        // Highest-numbered position varies fastest; 0-bit means input.
        const std::size_t shift = total - 1 - (bit + i);
        ms[i] = (mask >> shift) & 1 ? Mode::Out : Mode::In;
      }
      bit += k.arity;
      cand.declare(k.name, std::move(ms));
    }
    bool ok = false;
    switch (property) {
      case ModeProperty::Tidy: ok = is_tidy_program(p, cand); break;
      case ModeProperty::NicelyModed: ok = is_nicely_moded(p, cand); break;
      case ModeProperty::WellModed: ok = is_well_moded(p, cand); break;
    }
    if (ok) found.push_back(std::move(cand));
  }
  return found;
}

}  // namespace ocf
