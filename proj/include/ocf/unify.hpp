#pragma once

// Nondeterministic unification by set-of-equations rewriting.
//
// Two rule sets over the same state space:
//   full:        Decompose, Clash, Delete, Orient, Eliminate, OccurFail
//   occur-free:  Decompose, Clash, Delete, Orient, VarVar, Collapse
// The occur-free variant never looks inside a term for the eliminated
// variable; it terminates on every input and ends in failure or in a
// semi-solved set.

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ocf/term.hpp"

namespace ocf {

enum class Algo { Mma, MmaMinus };

enum class ActionTag {
  Decompose,  // (1) f(s...) = f(t...)  ->  s1 = t1, ..., sn = tn
  Clash,      // (2) f(...) = g(...), f != g  ->  halt with failure
  Delete,     // (3) X = X  ->  (removed)
  Orient,     // (4) t = X, t not a variable  ->  X = t
  Eliminate,  // (5) X = t, X not in t, X elsewhere  ->  apply {X/t} to the rest
  OccurFail,  // (6) X = t, X in t, X != t  ->  halt with failure
  VarVar,     // (5a) X = Y, X != Y, X elsewhere  ->  apply {X/Y} to the rest
  Collapse    // (5b) X = t, X = u (both non-var)  ->  smaller side rewrites the other
};

inline const char* action_name(ActionTag a) {
  switch (a) {
    case ActionTag::Decompose: return "decompose";
    case ActionTag::Clash: return "clash";
    case ActionTag::Delete: return "delete";
    case ActionTag::Orient: return "orient";
    case ActionTag::Eliminate: return "eliminate";
    case ActionTag::OccurFail: return "occur-fail";
    case ActionTag::VarVar: return "var-var";
    case ActionTag::Collapse: return "collapse";
  }
  return "?";
}

// One applicable move: a single-equation action at index i, or Collapse on
// the pair (i, j), i < j.
struct Choice {
  ActionTag action;
  std::size_t i = 0;
  std::optional<std::size_t> j;
};

inline bool operator==(const Choice& a, const Choice& b) {
  return a.action == b.action && a.i == b.i && a.j == b.j;
}

struct FailureInfo {
  enum class Reason { clash, occur };
  Reason reason;
  std::string clash_a, clash_b;  // clash: the two disagreeing symbols, as name/arity
  std::optional<Term> occ_var;   // occur: the variable
  std::optional<Term> occ_term;  // occur: the term it occurs in
};

namespace detail {

inline bool occurs_elsewhere(const EquationSet& e, std::size_t i, VarId v) {
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (k == i) continue;
    if (occurs_in(v, e[k].lhs) || occurs_in(v, e[k].rhs)) return true;
  }
  return false;
}

inline std::string symbol_sig(const Term& t) {
  return t.functor() + "/" + std::to_string(t.arity());
}

}  // namespace detail

// All applicable moves, in a fixed deterministic order: by smallest involved
// index, Collapse pairs ordered before the single action at their second
// index.  FirstApplicable takes the front.
inline std::vector<Choice> applicable(const EquationSet& e, Algo algo) {
  std::vector<Choice> out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const Term& l = e[i].lhs;
    const Term& r = e[i].rhs;
    if (l.is_compound()) {
      if (r.is_var()) {
        out.push_back({ActionTag::Orient, i, {}});
      } else if (l.functor() == r.functor() && l.arity() == r.arity()) {
        out.push_back({ActionTag::Decompose, i, {}});
      } else {
        out.push_back({ActionTag::Clash, i, {}});
      }
      continue;
    }
    // l is a variable X.
    if (r.is_var() && r.var_id() == l.var_id()) {
      out.push_back({ActionTag::Delete, i, {}});
      continue;
    }
    if (algo == Algo::Mma) {
      if (occurs_in(l.var_id(), r)) {
        out.push_back({ActionTag::OccurFail, i, {}});
      } else if (detail::occurs_elsewhere(e, i, l.var_id())) {
        out.push_back({ActionTag::Eliminate, i, {}});
      }
    } else {
      if (r.is_var() && detail::occurs_elsewhere(e, i, l.var_id()))
        out.push_back({ActionTag::VarVar, i, {}});
    }
  }
  if (algo == Algo::MmaMinus) {
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!e[i].lhs.is_var() || !e[i].rhs.is_compound()) continue;
      for (std::size_t j = i + 1; j < e.size(); ++j) {
        if (!e[j].lhs.is_var() || !e[j].rhs.is_compound()) continue;
        if (e[j].lhs.var_id() == e[i].lhs.var_id())
          out.push_back({ActionTag::Collapse, i, j});
      }
    }
    std::stable_sort(out.begin(), out.end(), [](const Choice& a, const Choice& b) {
      auto key = [](const Choice& c) { return std::make_pair(c.i, c.j.value_or(c.i)); };
      return key(a) < key(b);
    });
  }
  return out;
}

inline std::vector<Choice> applicable_mma(const EquationSet& e) {
  return applicable(e, Algo::Mma);
}
inline std::vector<Choice> applicable_mma_minus(const EquationSet& e) {
  return applicable(e, Algo::MmaMinus);
}

using StepResult = std::variant<EquationSet, FailureInfo>;

// Applies one move.  The rewritten equation keeps its insertion stamp;
// equations produced by Decompose get fresh stamps.
inline StepResult step(const EquationSet& e, const Choice& c) {
  if (c.i >= e.size() || (c.j && *c.j >= e.size()))
    throw std::logic_error("step: equation index out of range");
  EquationSet out = e;
  const Term l = e[c.i].lhs;
  const Term r = e[c.i].rhs;
  switch (c.action) {
    case ActionTag::Decompose: {
      std::vector<std::pair<Term, Term>> pairs;
      for (std::size_t k = 0; k < l.arity(); ++k) pairs.emplace_back(l.args()[k], r.args()[k]);
      out.splice_at(c.i, pairs);
      return out;
    }
    case ActionTag::Clash:
      return FailureInfo{FailureInfo::Reason::clash, detail::symbol_sig(l),
                         detail::symbol_sig(r), {}, {}};
    case ActionTag::Delete:
      out.erase_at(c.i);
      return out;
    case ActionTag::Orient:
      out.replace_sides(c.i, r, l);
      return out;
    case ActionTag::Eliminate:
    case ActionTag::VarVar: {
      Substitution sigma = Substitution::of({{l, r}});
      for (std::size_t k = 0; k < e.size(); ++k) {
        if (k == c.i) continue;
        out.replace_sides(k, sigma.apply(e[k].lhs), sigma.apply(e[k].rhs));
      }
      return out;
    }
    case ActionTag::OccurFail:
      return FailureInfo{FailureInfo::Reason::occur, {}, {}, l, r};
    case ActionTag::Collapse: {
      const std::size_t i = c.i, j = *c.j;
      const Term& t = e[i].rhs;
      const Term& u = e[j].rhs;
      const std::size_t st = term_size(t), su = term_size(u);
      const bool t_smaller = st < su || (st == su && e[i].stamp < e[j].stamp);
      if (t_smaller)
        out.replace_sides(j, t, u);  // X = u becomes t = u
      else
        out.replace_sides(i, u, t);  // X = t becomes u = t
      return out;
    }
  }
  throw std::logic_error("step: bad action");
}

// ---------------------------------------------------------------------------
// Termination measure for the occur-free rules.

// Base for the norm: one more than the largest arity in e, and at least 2.
inline int choose_k(const EquationSet& e) {
  std::size_t max_arity = 0;
  auto scan = [&](const Term& t, auto&& self) -> void {
    if (t.is_var()) return;
    max_arity = std::max(max_arity, t.arity());
    for (const Term& a : t.args()) self(a, self);
  };
  for (const Equation& eq : e) {
    scan(eq.lhs, scan);
    scan(eq.rhs, scan);
  }
  return std::max<int>(2, static_cast<int>(max_arity) + 1);
}

// ||E|| = sum over equations of k^max(|lhs|, |rhs|), kept exactly as a
// little-endian digit vector in base k so large exponents stay comparable.
inline std::vector<std::uint64_t> norm_digits(const EquationSet& e, int k) {
  if (k < 2) throw std::invalid_argument("norm base must be >= 2");
  std::vector<std::uint64_t> d;
  for (const Equation& eq : e) {
    std::size_t exp = std::max(term_size(eq.lhs), term_size(eq.rhs));
    if (d.size() <= exp) d.resize(exp + 1, 0);
    d[exp] += 1;
  }
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] < static_cast<std::uint64_t>(k)) continue;
    std::uint64_t carry = d[i] / static_cast<std::uint64_t>(k);
    d[i] %= static_cast<std::uint64_t>(k);
    if (d.size() <= i + 1) d.resize(i + 2, 0);
    d[i + 1] += carry;
  }
  while (!d.empty() && d.back() == 0) d.pop_back();
  return d;
}

// Numeric value of the norm; throws std::overflow_error when it does not fit.
inline std::uint64_t norm(const EquationSet& e, int k) {
  auto d = norm_digits(e, k);
  std::uint64_t value = 0;
  for (std::size_t i = d.size(); i-- > 0;) {
    const std::uint64_t base = static_cast<std::uint64_t>(k);
    if (value > (UINT64_MAX - d[i]) / base) throw std::overflow_error("norm overflow");
    value = value * base + d[i];
  }
  return value;
}

// Number of equations to which Orient or VarVar applies.
inline std::uint64_t f45a(const EquationSet& e) {
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const Term& l = e[i].lhs;
    const Term& r = e[i].rhs;
    if (l.is_compound() && r.is_var()) {
      ++n;
    } else if (l.is_var() && r.is_var() && l.var_id() != r.var_id() &&
               detail::occurs_elsewhere(e, i, l.var_id())) {
      ++n;
    }
  }
  return n;
}

// Number of equations of the shape X = t with t non-variable.
inline std::uint64_t f5b(const EquationSet& e) {
  std::uint64_t n = 0;
  for (const Equation& eq : e)
    if (eq.lhs.is_var() && eq.rhs.is_compound()) ++n;
  return n;
}

struct Measure {
  std::vector<std::uint64_t> norm;  // little-endian base-k digits
  std::uint64_t f45a = 0;
  std::uint64_t f5b = 0;
  int k = 2;
};

inline Measure measure(const EquationSet& e, std::optional<int> k_override = {}) {
  const int k = k_override.value_or(choose_k(e));
  return Measure{norm_digits(e, k), f45a(e), f5b(e), k};
}

// Strict lexicographic order on (norm, f45a, f5b); both sides must use the
// same base.
inline bool measure_less(const Measure& a, const Measure& b) {
  if (a.k != b.k) throw std::invalid_argument("measure_less: mismatched bases");
  if (a.norm.size() != b.norm.size()) return a.norm.size() < b.norm.size();
  for (std::size_t i = a.norm.size(); i-- > 0;)
    if (a.norm[i] != b.norm[i]) return a.norm[i] < b.norm[i];
  if (a.f45a != b.f45a) return a.f45a < b.f45a;
  return a.f5b < b.f5b;
}

// ---------------------------------------------------------------------------
// Final forms.

// {X1 = t1, ..., Xn = tn} with the Xi distinct variables, Xi != ti, and
// every variable ti occurring exactly once in the whole set.
inline bool is_semi_solved(const EquationSet& e) {
  std::set<VarId> lhs_ids;
  std::map<VarId, std::size_t> counts;
  for (const Equation& eq : e) {
    if (!eq.lhs.is_var()) return false;
    if (eq.lhs == eq.rhs) return false;
    if (!lhs_ids.insert(eq.lhs.var_id()).second) return false;
    count_var_occurrences(eq.lhs, counts);
    count_var_occurrences(eq.rhs, counts);
  }
  for (const Equation& eq : e)
    if (eq.rhs.is_var() && counts[eq.lhs.var_id()] != 1) return false;
  return true;
}

// Semi-solved and no Xi occurs in any right-hand side; such a set is exactly
// an idempotent most general unifier of itself.
inline bool is_solved(const EquationSet& e) {
  if (!is_semi_solved(e)) return false;
  for (const Equation& a : e)
    for (const Equation& b : e)
      if (occurs_in(a.lhs.var_id(), b.rhs)) return false;
  return true;
}

inline Substitution extract_mgu(const EquationSet& e) {
  if (!is_solved(e)) throw std::invalid_argument("extract_mgu: set is not solved");
  Substitution s;
  for (const Equation& eq : e) s.bind(eq.lhs, eq.rhs);
  return s;
}

// ---------------------------------------------------------------------------
// Strategies and runs.

struct ScriptEntry {
  std::size_t i = 0;
  std::optional<std::size_t> j;
};

class Strategy {
 public:
  enum class Kind { FirstApplicable, SeededRandom, Scripted };

  static Strategy first_applicable() { return Strategy(Kind::FirstApplicable); }

  static Strategy seeded_random(std::uint64_t seed) {
    Strategy s(Kind::SeededRandom);
    s.seed_ = seed;
    return s;
  }

  static Strategy scripted(std::vector<ScriptEntry> script) {
    Strategy s(Kind::Scripted);
    s.script_ = std::move(script);
    return s;
  }

  Kind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<ScriptEntry>& script() const { return script_; }

 private:
  explicit Strategy(Kind k) : kind_(k) {}
  Kind kind_;
  std::uint64_t seed_ = 0;
  std::vector<ScriptEntry> script_;
};

struct RunStep {
  Choice choice;
  // The equation sides the action consumed, captured before the step.
  Term sel_lhs, sel_rhs;
  std::optional<Term> sel_lhs2, sel_rhs2;  // second equation of a Collapse
  EquationSet after;                       // unchanged for halting actions
};

struct RunTrace {
  Algo algo = Algo::Mma;
  EquationSet initial;
  std::vector<RunStep> steps;
  bool success = false;
  std::optional<FailureInfo> failure;  // when !success
  EquationSet final_set;

  bool performed(ActionTag a) const {
    for (const RunStep& s : steps)
      if (s.choice.action == a) return true;
    return false;
  }

  std::vector<ScriptEntry> script() const {
    std::vector<ScriptEntry> out;
    out.reserve(steps.size());
    for (const RunStep& s : steps) out.push_back({s.choice.i, s.choice.j});
    return out;
  }
};

struct RunOptions {
  // Assert that (norm, f45a, f5b) strictly decreases at every occur-free
  // step.  Ignored for the full rule set, whose norm may grow.
  bool check_measure = true;
  std::optional<int> measure_k;  // override the norm base (testing only)
  std::size_t max_steps = 1u << 20;
};

struct ScriptMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Runs the chosen rule set to a halt.  Every maximal run terminates; the
// step cap only guards against internal errors.
inline RunTrace run(const EquationSet& initial, Algo algo, const Strategy& strategy,
                    const RunOptions& opts = {}) {
  RunTrace trace;
  trace.algo = algo;
  trace.initial = initial;
  trace.final_set = initial;

  std::mt19937_64 rng(strategy.seed());
  const bool check_measure = opts.check_measure && algo == Algo::MmaMinus;
  const int fixed_k = check_measure ? opts.measure_k.value_or(choose_k(initial)) : 0;

  EquationSet cur = initial;
  for (std::size_t step_no = 0;; ++step_no) {
    if (step_no > opts.max_steps) throw std::logic_error("run: step cap exceeded");
    std::vector<Choice> choices = applicable(cur, algo);
    if (choices.empty()) {
      trace.success = true;
      trace.final_set = cur;
      return trace;
    }
    std::size_t pick = 0;
    switch (strategy.kind()) {
      case Strategy::Kind::FirstApplicable:
        pick = 0;
        break;
      case Strategy::Kind::SeededRandom:
        pick = static_cast<std::size_t>(rng() % choices.size());
        break;
      case Strategy::Kind::Scripted: {
        if (step_no >= strategy.script().size())
          throw ScriptMismatch("script exhausted before the run halted");
        const ScriptEntry& want = strategy.script()[step_no];
        bool found = false;
        for (std::size_t c = 0; c < choices.size(); ++c)
          if (choices[c].i == want.i && choices[c].j == want.j) {
            pick = c;
            found = true;
            break;
          }
        if (!found) throw ScriptMismatch("scripted move is not applicable");
        break;
      }
    }

    const Choice& chosen = choices[pick];
    RunStep rec{chosen, cur[chosen.i].lhs, cur[chosen.i].rhs, {}, {}, {}};
    if (chosen.j) {
      rec.sel_lhs2 = cur[*chosen.j].lhs;
      rec.sel_rhs2 = cur[*chosen.j].rhs;
    }

    StepResult res = step(cur, chosen);
    if (std::holds_alternative<FailureInfo>(res)) {
      rec.after = cur;
      trace.steps.push_back(std::move(rec));
      trace.success = false;
      trace.failure = std::get<FailureInfo>(res);
      trace.final_set = cur;
      return trace;
    }

    EquationSet next = std::get<EquationSet>(res);
    if (check_measure) {
      Measure before = measure(cur, fixed_k);
      Measure after = measure(next, fixed_k);
      if (!measure_less(after, before))
        throw std::logic_error("termination measure failed to decrease");
    }
    rec.after = next;
    trace.steps.push_back(std::move(rec));
    cur = std::move(next);
  }
}

// Replays a recorded run move for move under the Scripted strategy.
inline RunTrace replay(const RunTrace& recorded, const RunOptions& opts = {}) {
  return run(recorded.initial, recorded.algo, Strategy::scripted(recorded.script()), opts);
}

// Unifies via the full rule set under FirstApplicable; the mgu when the set
// is unifiable, nothing otherwise.
inline std::optional<Substitution> unify(const EquationSet& e) {
  RunTrace t = run(e, Algo::Mma, Strategy::first_applicable());
  if (!t.success) return std::nullopt;
  return extract_mgu(t.final_set);
}

inline std::optional<Substitution> unify(const Term& a, const Term& b) {
  return unify(EquationSet::of(a, b));
}

// Completes a semi-solved set with the full rules: its mgu, or nothing when
// an occur-check failure shows it is not unifiable.
inline std::optional<Substitution> finish_semi_solved(const EquationSet& e) {
  if (!is_semi_solved(e)) throw std::invalid_argument("finish_semi_solved: not semi-solved");
  return unify(e);
}

// gamma_1 ... gamma_k for the Eliminate steps of a successful full-rules
// run, composed left to right.
inline Substitution composition_of_run(const RunTrace& trace) {
  if (trace.algo != Algo::Mma || !trace.success)
    throw std::invalid_argument("composition_of_run: needs a successful full-rules run");
  Substitution theta;
  for (const RunStep& s : trace.steps)
    if (s.choice.action == ActionTag::Eliminate)
      theta = theta.compose(Substitution::of({{s.sel_lhs, s.sel_rhs}}));
  return theta;
}

}  // namespace ocf
