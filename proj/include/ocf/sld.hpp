#pragma once

// Bounded SLD-resolution.  Trees are built breadth-first under node/depth
// bounds with a pluggable selection rule; every available unification (a
// selected atom against a standardized-apart clause head of the same
// predicate) is recorded and classified.  A second engine resolves with the
// occur-free rules to demonstrate where dropping the occur-check is safe.

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "ocf/modes.hpp"
#include "ocf/nsto.hpp"
#include "ocf/parser.hpp"
#include "ocf/term.hpp"
#include "ocf/unify.hpp"

namespace ocf {

struct SelectionRule {
  enum class Kind { Leftmost, ModeCompatible, AllRules };
  Kind kind = Kind::Leftmost;
  Moding3 moding;  // consulted by ModeCompatible only

  static SelectionRule leftmost() { return {}; }
  static SelectionRule mode_compatible(Moding3 m) {
    SelectionRule r;
    r.kind = Kind::ModeCompatible;
    r.moding = std::move(m);
    return r;
  }
  static SelectionRule all_rules() {
    SelectionRule r;
    r.kind = Kind::AllRules;
    return r;
  }
};

inline const char* to_string(SelectionRule::Kind k) {
  switch (k) {
    case SelectionRule::Kind::Leftmost: return "leftmost";
    case SelectionRule::Kind::ModeCompatible: return "mode-compatible";
    case SelectionRule::Kind::AllRules: return "all";
  }
  return "?";
}

inline bool ground_inputs(const Atom& a, const Moding3& m) {
  for (const Term& t : input_terms(a, m))
    if (!var_ids(t).empty()) return false;
  return true;
}

// True iff every atom of q has all its input positions ground.
inline bool check_query_ground_inputs(const Query& q, const Moding3& m) {
  for (const Atom& a : q)
    if (!ground_inputs(a, m)) return false;
  return true;
}

// The moding (+, bot, ..., bot) for every predicate in sight; ground-input
// queries under it are exactly the 1-ground queries.
inline Moding3 one_ground_moding(const Program& p, const Query& q) {
  Moding3 m;
  auto add = [&](const Atom& a) {
    std::vector<Mode> ms(a.arity(), Mode::Bot);
    if (!ms.empty()) ms[0] = Mode::In;
    m.declare_or_replace(a.pred, std::move(ms));
  };
  for (const Clause& c : p.clauses) {
    add(c.head);
    for (const Atom& a : c.body) add(a);
  }
  for (const Atom& a : q) add(a);
  return m;
}

struct Selection {
  bool floundered = false;
  std::vector<std::size_t> indices;
};

inline Selection select(const Query& q, const SelectionRule& rule) {
  if (q.empty()) throw std::invalid_argument("select: empty query");
  Selection s;
  switch (rule.kind) {
    case SelectionRule::Kind::Leftmost:
      s.indices.push_back(0);
      return s;
    case SelectionRule::Kind::AllRules:
      for (std::size_t i = 0; i < q.size(); ++i) s.indices.push_back(i);
      return s;
    case SelectionRule::Kind::ModeCompatible:
      for (std::size_t i = 0; i < q.size(); ++i)
        if (ground_inputs(q[i], rule.moding)) {
          s.indices.push_back(i);
          return s;
        }
      s.floundered = true;
      return s;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Resolution.

struct NotUnifiable {
  FailureInfo failure;
};

using ResolveResult = std::variant<std::pair<Query, Substitution>, NotUnifiable>;

// Standard SLD-resolvent: the selected atom is replaced by the body of c and
// the mgu (computed by the full rules - the reference semantics) applied.
inline ResolveResult resolve(const Query& q, std::size_t i, const Clause& c) {
  if (i >= q.size()) throw std::invalid_argument("resolve: atom index out of range");
  if (q[i].pred != c.head.pred || q[i].arity() != c.head.arity())
    throw std::invalid_argument("resolve: predicate mismatch");
  RunTrace t = run(EquationSet::of(q[i], c.head), Algo::Mma, Strategy::first_applicable());
  if (!t.success) return NotUnifiable{*t.failure};
  Substitution theta = extract_mgu(t.final_set);
  Query out;
  out.reserve(q.size() - 1 + c.body.size());
  for (std::size_t k = 0; k < i; ++k) out.push_back(q[k]);
  for (const Atom& b : c.body) out.push_back(b);
  for (std::size_t k = i + 1; k < q.size(); ++k) out.push_back(q[k]);
  return std::make_pair(theta.apply(out), std::move(theta));
}

// ---------------------------------------------------------------------------
// Trees.

struct Bounds {
  std::size_t max_nodes = 20000;
  std::size_t max_depth = 500;
};

enum class NodeStatus { Open, Success, Failure, Floundered, DepthCut, CyclicBinding };

inline const char* to_string(NodeStatus s) {
  switch (s) {
    case NodeStatus::Open: return "open";
    case NodeStatus::Success: return "success";
    case NodeStatus::Failure: return "failure";
    case NodeStatus::Floundered: return "floundered";
    case NodeStatus::DepthCut: return "depth_cut";
    case NodeStatus::CyclicBinding: return "cyclic_binding";
  }
  return "?";
}

struct SldNode {
  std::size_t id = 0;
  std::optional<std::size_t> parent;
  std::optional<std::size_t> atom_index;    // selected atom in the parent
  std::optional<std::size_t> clause_index;  // absent for builtin steps
  Substitution mgu;
  Query query;
  std::size_t depth = 0;
  NodeStatus status = NodeStatus::Open;
  // For cyclic_binding nodes: the semi-solved head unification that has no
  // finite solution.
  std::optional<EquationSet> semi_solved;
};

struct AvailableUnification {
  std::size_t node = 0;
  std::size_t atom_index = 0;
  std::size_t clause_index = 0;
  Atom atom;
  Atom head;
  Verdict nsto;
  Verdict wnsto;
};

struct SldTree {
  Query q0;
  SelectionRule rule;
  Algo engine = Algo::Mma;
  Bounds bounds;
  bool truncated = false;  // the node bound cut exploration short
  std::vector<SldNode> nodes;
  std::vector<AvailableUnification> aus;

  std::size_t count(NodeStatus s) const {
    std::size_t n = 0;
    for (const SldNode& nd : nodes)
      if (nd.status == s) ++n;
    return n;
  }
};

inline bool eval_builtin(const Atom& a) {
  if (a.pred == "constant" && a.args.size() == 1) return a.args[0].is_constant();
  if (a.pred == "\\==" && a.args.size() == 2) return a.args[0] != a.args[1];
  throw std::invalid_argument("eval_builtin: not a builtin");
}

inline SldTree build_tree(const Program& p, const Query& q0, const SelectionRule& rule,
                          const Bounds& bounds = {}, Algo engine = Algo::Mma,
                          std::size_t budget = kDefaultBudget) {
  SldTree tree;
  tree.q0 = q0;
  tree.rule = rule;
  tree.engine = engine;
  tree.bounds = bounds;

  VarGen gen;
  gen.ensure_above(p.var_ceiling);
  gen.ensure_above(var_ids(q0));

  const Moding3* declared = p.declared.empty() ? nullptr : &p.declared;
  std::map<std::string, PairVerdicts> nsto_cache;
  std::set<std::tuple<std::string, std::size_t, std::size_t>> au_seen;

  SldNode root;
  root.id = 0;
  root.query = q0;
  tree.nodes.push_back(root);
  std::deque<std::size_t> queue{0};

  auto add_child = [&](std::size_t parent, std::size_t atom_index,
                       std::optional<std::size_t> clause_index, Substitution mgu,
                       Query query, NodeStatus status,
                       std::optional<EquationSet> semi) {
    SldNode child;
    child.id = tree.nodes.size();
    child.parent = parent;
    child.atom_index = atom_index;
    child.clause_index = clause_index;
    child.mgu = std::move(mgu);
    child.query = std::move(query);
    child.depth = tree.nodes[parent].depth + 1;
    child.status = status;
    child.semi_solved = std::move(semi);
    tree.nodes.push_back(std::move(child));
    if (status == NodeStatus::Open) queue.push_back(tree.nodes.size() - 1);
  };

  while (!queue.empty()) {
    if (tree.nodes.size() >= bounds.max_nodes) {
      tree.truncated = true;
      for (std::size_t id : queue) tree.nodes[id].status = NodeStatus::DepthCut;
      break;
    }
    const std::size_t id = queue.front();
    queue.pop_front();
    const Query q = tree.nodes[id].query;
    const std::size_t depth = tree.nodes[id].depth;

    if (q.empty()) {
      tree.nodes[id].status = NodeStatus::Success;
      continue;
    }
    if (depth >= bounds.max_depth) {
      tree.nodes[id].status = NodeStatus::DepthCut;
      continue;
    }
    Selection sel = select(q, rule);
    if (sel.floundered) {
      tree.nodes[id].status = NodeStatus::Floundered;
      continue;
    }

    bool any_child = false;
    for (std::size_t i : sel.indices) {
      const Atom a = q[i];
      const PredKey key{a.pred, a.arity()};
      if (is_builtin(key)) {
        if (!eval_builtin(a)) continue;
        Query rest;
        for (std::size_t k = 0; k < q.size(); ++k)
          if (k != i) rest.push_back(q[k]);
        add_child(id, i, std::nullopt, {}, std::move(rest), NodeStatus::Open, std::nullopt);
        any_child = true;
        continue;
      }
      for (std::size_t ci = 0; ci < p.clauses.size(); ++ci) {
        const Clause& raw = p.clauses[ci];
        if (raw.head.pred != key.name || raw.head.arity() != key.arity) continue;
        Clause sc = standardize_apart(raw, var_ids(q), gen);

        std::vector<Term> qitems;
        for (const Atom& at : q) qitems.push_back(at.as_term());
        auto dedup = std::make_tuple(detail_canon::canonical_key(qitems), i, ci);
        if (!au_seen.count(dedup)) {
          au_seen.insert(dedup);
          EquationSet head_eq = EquationSet::of(a, sc.head);
          const std::string ckey = canonical_key(head_eq);
          auto hit = nsto_cache.find(ckey);
          if (hit == nsto_cache.end())
            hit = nsto_cache.emplace(ckey, classify_unification(a, sc.head, declared, budget))
                      .first;
          AvailableUnification au;
          au.node = id;
          au.atom_index = i;
          au.clause_index = ci;
          au.atom = a;
          au.head = sc.head;
          au.nsto = hit->second.nsto;
          au.wnsto = hit->second.wnsto;
          tree.aus.push_back(std::move(au));
        }

        if (engine == Algo::Mma) {
          ResolveResult res = resolve(q, i, sc);
          if (auto* ok = std::get_if<std::pair<Query, Substitution>>(&res)) {
            add_child(id, i, ci, std::move(ok->second), std::move(ok->first),
                      NodeStatus::Open, std::nullopt);
            any_child = true;
          }
        } else {
          RunTrace t = run(EquationSet::of(a, sc.head), Algo::MmaMinus,
                           Strategy::first_applicable());
          if (!t.success) continue;  // clash: agreed failure
          std::optional<Substitution> mgu = finish_semi_solved(t.final_set);
          if (!mgu) {
            add_child(id, i, ci, {}, q, NodeStatus::CyclicBinding, t.final_set);
            any_child = true;
            continue;
          }
          Query out;
          for (std::size_t k = 0; k < i; ++k) out.push_back(q[k]);
          for (const Atom& b : sc.body) out.push_back(b);
          for (std::size_t k = i + 1; k < q.size(); ++k) out.push_back(q[k]);
          add_child(id, i, ci, *mgu, mgu->apply(out), NodeStatus::Open, std::nullopt);
          any_child = true;
        }
      }
    }
    if (!any_child) tree.nodes[id].status = NodeStatus::Failure;
  }
  return tree;
}

// Resolution with the occur-free rules; head unifications whose semi-solved
// form has no finite solution become cyclic_binding leaves.
inline SldTree execute_unsound(const Program& p, const Query& q0, const SelectionRule& rule,
                               const Bounds& bounds = {},
                               std::size_t budget = kDefaultBudget) {
  return build_tree(p, q0, rule, bounds, Algo::MmaMinus, budget);
}

// ---------------------------------------------------------------------------
// Answers.

inline std::vector<Substitution> answers(const SldTree& t) {
  std::vector<Substitution> out;
  const std::set<VarId> q0_vars = var_ids(t.q0);
  for (const SldNode& n : t.nodes) {
    if (n.status != NodeStatus::Success) continue;
    std::vector<std::size_t> chain;
    for (std::optional<std::size_t> cur = n.id; cur; cur = t.nodes[*cur].parent)
      chain.push_back(*cur);
    Substitution theta;
    for (std::size_t k = chain.size(); k-- > 0;) theta = theta.compose(t.nodes[chain[k]].mgu);
    out.push_back(theta.restrict_to(q0_vars));
  }
  return out;
}

// Canonical strings of the instantiated initial query, one per answer;
// sorted, so equal vectors mean the same answer multiset up to renaming.
inline std::vector<std::string> canonical_answers(const SldTree& t) {
  std::vector<std::string> out;
  for (const Substitution& s : answers(t)) {
    std::vector<Term> items;
    for (const Atom& a : t.q0) items.push_back(s.apply(a).as_term());
    out.push_back(detail_canon::canonical_key({Term::compound("answer", items)}));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Occur-check freeness of a tree.

enum class VerifyStatus { VerifiedUpToBound, Refuted, BudgetExceeded };

inline const char* to_string(VerifyStatus s) {
  switch (s) {
    case VerifyStatus::VerifiedUpToBound: return "verified_up_to_bound";
    case VerifyStatus::Refuted: return "refuted";
    case VerifyStatus::BudgetExceeded: return "budget_exceeded";
  }
  return "?";
}

struct VerifyResult {
  VerifyStatus status = VerifyStatus::VerifiedUpToBound;
  std::optional<std::size_t> au_index;  // the offending available unification
  Bounds bounds;
  bool truncated = false;
};

// strict = Property::Nsto (occur-check free), weak = Property::Wnsto.
inline VerifyResult verify_occur_check_free(const SldTree& t, Property mode) {
  VerifyResult r;
  r.bounds = t.bounds;
  r.truncated = t.truncated;
  std::optional<std::size_t> budget_au;
  for (std::size_t i = 0; i < t.aus.size(); ++i) {
    const Verdict& v = mode == Property::Nsto ? t.aus[i].nsto : t.aus[i].wnsto;
    if (v.value == VerdictValue::False) {
      r.status = VerifyStatus::Refuted;
      r.au_index = i;
      return r;
    }
    if (v.value == VerdictValue::BudgetExceeded && !budget_au) budget_au = i;
  }
  if (budget_au) {
    r.status = VerifyStatus::BudgetExceeded;
    r.au_index = budget_au;
  }
  return r;
}

// Syntactic conditions that certify the whole (unbounded) tree, independent
// of exploration.  Names returned in a fixed order.
inline std::vector<std::string> unconditional_certificates(const Program& p, const Query& q0,
                                                           const SelectionRule& rule,
                                                           Property mode) {
  std::vector<std::string> certs;
  auto covered = [&](const Moding3& m) {
    auto check = [&](const Atom& a) { return m.declares({a.pred, a.arity()}); };
    for (const Clause& c : p.clauses) {
      if (!check(c.head)) return false;
      for (const Atom& a : c.body)
        if (!check(a)) return false;
    }
    for (const Atom& a : q0)
      if (!check(a)) return false;
    return true;
  };
  const Moding3& m = p.declared;
  const bool m_ok = !m.empty() && covered(m);

  if (m_ok && m.is_two_valued() && is_tidy_program(p, m) && is_tidy_query(q0, m))
    certs.push_back("tidy");

  if (mode == Property::Wnsto) {
    auto heads_weakly_linear = [&] {
      for (const Clause& c : p.clauses)
        if (!is_weakly_linear(c.head, m)) return false;
      return true;
    };
    const bool compatible_rule = rule.kind == SelectionRule::Kind::ModeCompatible;
    if (m_ok && heads_weakly_linear()) {
      // Without output positions, well-3-moded queries have all input
      // positions ground, so every selection rule is compatible with moding.
      bool no_out = true;
      for (const auto& [k, ms] : m.declarations()) {
        (void)k;
        for (Mode md : ms)
          if (md == Mode::Out) no_out = false;
      }
      if ((rule.kind == SelectionRule::Kind::Leftmost || compatible_rule || no_out) &&
          is_well_3_moded(p, m) && is_well_3_moded(q0, m))
        certs.push_back("well-3-moded-weakly-linear");
      if (compatible_rule) certs.push_back("weakly-linear-heads");
    }
    if (compatible_rule && p.has_secondary && m_ok && covered(p.declared2) &&
        is_weakly_tidy(p, m, p.declared2) && is_tidy_query(q0, p.declared2))
      certs.push_back("weakly-tidy");
  }
  return certs;
}

// ---------------------------------------------------------------------------
// Human-readable indented trace.

inline std::string render_tree(const SldTree& t) {
  std::ostringstream os;
  std::function<void(std::size_t, std::size_t)> walk = [&](std::size_t id, std::size_t indent) {
    const SldNode& n = t.nodes[id];
    os << std::string(indent * 2, ' ') << "[" << n.id << "] ";
    if (n.clause_index)
      os << "clause " << (*n.clause_index + 1) << " ";
    else if (n.parent)
      os << "builtin ";
    if (!n.mgu.empty()) os << render(n.mgu) << " ";
    os << (n.query.empty() ? "<empty>" : render(n.query));
    if (n.status != NodeStatus::Open) os << "  -- " << to_string(n.status);
    os << "\n";
    for (const SldNode& c : t.nodes)
      if (c.parent && *c.parent == id) walk(c.id, indent + 1);
  };
  if (!t.nodes.empty()) walk(0, 0);
  if (t.truncated) os << "(node bound reached; exploration truncated)\n";
  return os.str();
}

}  // namespace ocf
