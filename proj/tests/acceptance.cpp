// Acceptance gate: one test case per shipped guarantee, each printing a
// single PASS/FAIL line.  Every assertion here is REQUIRE so that a failing
// case reports FAIL on its line instead of sliding through.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "ocf/modes.hpp"
#include "ocf/nsto.hpp"
#include "ocf/parser.hpp"
#include "ocf/sld.hpp"
#include "ocf/unify.hpp"

using namespace ocf;

namespace {

// Prints "[criterion <name>] PASS" only when the case ran to completion
// (REQUIRE failures unwind past done()).  A positive time limit is asserted.
struct Criterion {
  std::string name;
  double limit_s;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  bool completed = false;

  Criterion(std::string n, double limit) : name(std::move(n)), limit_s(limit) {}
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  void done() {
    if (limit_s > 0) REQUIRE(elapsed() < limit_s);
    completed = true;
  }
  ~Criterion() {
    std::printf("[criterion %s] %s (%.2fs)\n", name.c_str(), completed ? "PASS" : "FAIL",
                elapsed());
    std::fflush(stdout);
  }
};

Program load(const std::string& rel) {
  std::ifstream in(std::string(OCF_SOURCE_ROOT) + "/" + rel);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_program(ss.str());
}

Query program_query(const Program& p, const std::string& text) {
  return parse_query(text, p.var_ceiling);
}

Substitution residue_of(const RunTrace& t) {
  std::set<VarId> eliminated;
  for (const RunStep& s : t.steps)
    if (s.choice.action == ActionTag::Eliminate) eliminated.insert(s.sel_lhs.var_id());
  Substitution r;
  for (const Equation& e : t.final_set)
    if (!eliminated.count(e.lhs.var_id())) r.bind(e.lhs, e.rhs);
  return r;
}

}  // namespace

TEST_CASE("criterion 01: occur-exposed pair", "[acceptance]") {
  Criterion crit("01 occur-exposed-pair", 1.0);
  const EquationSet e = parse_equations("p(a, f(X), X) = p(b, Y, Y)");

  const Verdict nsto = decide_nsto(e);
  REQUIRE(nsto.value == VerdictValue::False);
  REQUIRE(nsto.witness.has_value());
  REQUIRE(nsto.witness->performed(ActionTag::OccurFail));

  const Verdict wnsto = decide_wnsto(e);
  REQUIRE(wnsto.value == VerdictValue::True);
  REQUIRE(wnsto.witness.has_value());
  REQUIRE_FALSE(wnsto.witness->performed(ActionTag::OccurFail));

  // with the occur-check removed, every run halts in a clash
  const MmaMinusOutcomes runs = enumerate_mma_minus(e);
  REQUIRE(runs.complete);
  REQUIRE(runs.clash_reachable);
  REQUIRE(runs.terminals.empty());
  crit.done();
}

TEST_CASE("criterion 02: semi-solved display case", "[acceptance]") {
  Criterion crit("02 semi-solved-display", 1.0);
  const EquationSet e = parse_equations("g(X, X) = g(Y, f(Y))");

  const RunTrace t = run(e, Algo::MmaMinus, Strategy::first_applicable());
  REQUIRE(t.success);
  REQUIRE(is_semi_solved(t.final_set));
  REQUIRE(is_isomorphic(t.final_set, parse_equations("X = Y, Y = f(Y)")));

  REQUIRE(decide_wnsto(e).value == VerdictValue::False);
  REQUIRE_FALSE(unify(e).has_value());
  crit.done();
}

TEST_CASE("criterion 03: the termination measure decreases at every step", "[acceptance]") {
  Criterion crit("03 measure-decrease", 0);
  testgen::Gen gen(1203);
  int sets = 0, steps = 0;
  for (; sets < 8000 && (sets < 1000 || steps < 1000); ++sets) {
    const EquationSet e = gen.equations(1 + gen.below(3), 12, 6);
    const int k = choose_k(e);
    const Strategy strat = sets % 2 ? Strategy::first_applicable()
                                    : Strategy::seeded_random(9000 + sets);
    const RunTrace t = run(e, Algo::MmaMinus, strat);  // termination: run returns
    EquationSet cur = e;
    for (const RunStep& s : t.steps) {
      if (s.choice.action == ActionTag::Clash) break;
      REQUIRE(measure_less(measure(s.after, k), measure(cur, k)));
      cur = s.after;
      ++steps;
    }
  }
  REQUIRE(sets >= 1000);
  REQUIRE(steps >= 1000);
  crit.done();
}

TEST_CASE("criterion 04: occur-free rules are sound on weakly safe sets", "[acceptance]") {
  Criterion crit("04 occur-free-soundness", 0);
  testgen::Gen gen(1204);
  int verified = 0;
  while (verified < 500) {
    const EquationSet e = gen.equations(1 + gen.below(2), 7, 4);
    if (decide_wnsto(e, 20000).value != VerdictValue::True) continue;
    const SoundnessReport rep = check_mma_minus_sound(e, 50000);
    if (rep.budget_exceeded) continue;
    INFO(render(e) << ": " << rep.detail);
    REQUIRE(rep.ok);
    ++verified;
  }
  REQUIRE(verified >= 500);
  crit.done();
}

TEST_CASE("criterion 05: composition identity and the split rule", "[acceptance]") {
  Criterion crit("05 composition-and-split", 0);

  // (a) the composition of the elimination steps, extended by the solved
  //     equations never selected, equals the solved-form substitution
  testgen::Gen gen(1205);
  int successes = 0;
  while (successes < 500) {
    const EquationSet e = gen.equations(1 + gen.below(3), 9, 5);
    const RunTrace t = run(e, Algo::Mma, Strategy::seeded_random(successes * 37 + 5));
    if (!t.success) continue;
    ++successes;
    const Substitution solved = extract_mgu(t.final_set);
    const Substitution composed = composition_of_run(t);
    REQUIRE(composed.compose(residue_of(t)) == solved);
    for (const auto& [id, vb] : composed.bindings()) {
      const std::optional<Term> image = solved.lookup(id);
      REQUIRE(image.has_value());
      REQUIRE(*image == vb.second);
    }
  }
  REQUIRE(successes >= 500);

  // (b) deciding the weak property by splitting agrees with the exact decider
  testgen::Gen gen2(1206);
  int agreements = 0;
  while (agreements < 200) {
    const EquationSet e1 = gen2.equations(1, 6, 3);
    const EquationSet e2 = gen2.equations(1 + gen2.below(2), 6, 3);
    const Verdict split = wnsto_by_split(e1, e2);
    const Verdict exact = decide_wnsto(e1.union_with(e2));
    REQUIRE(split.value != VerdictValue::BudgetExceeded);
    REQUIRE(exact.value != VerdictValue::BudgetExceeded);
    REQUIRE(split.value == exact.value);
    ++agreements;
  }
  REQUIRE(agreements >= 200);
  crit.done();
}

TEST_CASE("criterion 06: the list-flattening program is tidy and verified", "[acceptance]") {
  Criterion crit("06 flatten-tidy-verified", 5.0);
  Program p = load("corpus/flatten.pl");
  REQUIRE(is_tidy_program(p, p.declared));
  REQUIRE(is_tidy_program(p, p.declared2));

  // any query with a random first argument and a fresh answer variable is tidy
  testgen::Gen gen(1207);
  for (int i = 0; i < 100; ++i) {
    const Term t = gen.term(8, 4);  // variables named X0..X3: "R" stays fresh
    const Query q = parse_query("flatten(" + render(t) + ", R)");
    REQUIRE(is_tidy_query(q, p.declared));
  }

  const Query q0 = program_query(p, "flatten([[a], b, []], R)");
  for (const SelectionRule& rule :
       {SelectionRule::leftmost(), SelectionRule::all_rules()}) {
    SldTree t = build_tree(p, q0, rule);
    REQUIRE(verify_occur_check_free(t, Property::Nsto).status ==
            VerifyStatus::VerifiedUpToBound);
  }
  crit.done();
}

TEST_CASE("criterion 07: no moding makes the queens program tidy", "[acceptance]") {
  Criterion crit("07 nqueens-no-moding", 1.0);
  Program p = load("corpus/nqueens.pl");
  REQUIRE(search_modings(p, ModeProperty::Tidy).empty());
  REQUIRE(search_modings(p, ModeProperty::NicelyModed).empty());
  crit.done();
}

TEST_CASE("criterion 08: queens stays weakly safe for 1-ground queries", "[acceptance]") {
  Criterion crit("08 nqueens-one-ground-wnsto", 30.0);
  Program p = load("corpus/nqueens.pl");

  SldTree t = build_tree(p, program_query(p, "pqs(s(s(0)), [A, B], U, D)"),
                         SelectionRule::all_rules(), Bounds{20000, 60});
  REQUIRE_FALSE(t.aus.empty());
  for (const AvailableUnification& au : t.aus)
    REQUIRE(au.wnsto.value == VerdictValue::True);
  REQUIRE(verify_occur_check_free(t, Property::Wnsto).status ==
          VerifyStatus::VerifiedUpToBound);

  SldTree at = build_tree(p, program_query(p, "pq(a, L, [L | T], D)"),
                          SelectionRule::leftmost(), Bounds{20000, 60});
  const VerifyResult strict = verify_occur_check_free(at, Property::Nsto);
  REQUIRE(strict.status == VerifyStatus::Refuted);
  REQUIRE(strict.au_index.has_value());
  REQUIRE(at.aus.at(*strict.au_index).clause_index == 2);  // clause (3), 1-based
  crit.done();
}

TEST_CASE("criterion 09: the footnote program and both engines", "[acceptance]") {
  Criterion crit("09 use2-search-and-dual-engine", 5.0);
  Program p = load("corpus/use2.pl");

  // exactly the modings giving p at most one input position are tidy
  const std::vector<Moding3> found = search_modings(p, ModeProperty::Tidy);
  REQUIRE(found.size() == 4);
  for (const Moding3& m : found) {
    const std::vector<Mode>& ms = m.modes_of(PredKey{"p", 3});
    REQUIRE(std::count(ms.begin(), ms.end(), Mode::In) <= 1);
  }

  const Query q0 = program_query(p, "p([a, b], Y, Z)");
  SldTree mc = build_tree(p, q0, SelectionRule::mode_compatible(p.declared));
  REQUIRE(verify_occur_check_free(mc, Property::Wnsto).status ==
          VerifyStatus::VerifiedUpToBound);

  SldTree sound = build_tree(p, q0, SelectionRule::leftmost());
  SldTree unsound = execute_unsound(p, q0, SelectionRule::leftmost());
  REQUIRE(canonical_answers(sound) == canonical_answers(unsound));
  REQUIRE(sound.count(NodeStatus::Success) >= 1);
  crit.done();
}

TEST_CASE("criterion 10: the symbolic-differentiation program", "[acceptance]") {
  Criterion crit("10 derivative-disciplines", 5.0);
  Program p = load("corpus/derivative.pl");

  Moding3 back;
  declare_builtins(back);
  back.declare("d", {Mode::Out, Mode::In, Mode::Out});
  REQUIRE(is_tidy_program(p, back));
  REQUIRE(is_nicely_moded(p, back));

  REQUIRE(is_well_3_moded(p, p.declared));
  REQUIRE(is_well_3_moded(parse_query("d(x * x, x, D)"), p.declared));
  for (const Clause& c : p.clauses) REQUIRE(is_weakly_linear(c.head, p.declared));

  const Query q0 = program_query(p, "d(x * x, x, D)");
  SldTree t = build_tree(p, q0, SelectionRule::leftmost());
  const std::vector<Substitution> ans = answers(t);
  REQUIRE(ans.size() == 1);
  REQUIRE(render(ans[0].apply(q0[0].args[2])) == "x*s(0)+s(0)*x");

  SldTree mc = build_tree(p, q0, SelectionRule::mode_compatible(p.declared));
  REQUIRE(mc.count(NodeStatus::Floundered) == 0);
  crit.done();
}

TEST_CASE("criterion 11: weakly tidy under two second modings, never tidy", "[acceptance]") {
  Criterion crit("11 weakly-tidy-two-modings", 1.0);
  Program p = load("corpus/weakly_tidy.pl");
  REQUIRE(is_weakly_tidy(p, p.declared, p.declared2));

  Moding3 m2b;
  declare_builtins(m2b);
  m2b.declare("p", {Mode::In});
  m2b.declare("q", {Mode::Out, Mode::In});
  REQUIRE(is_weakly_tidy(p, p.declared, m2b));

  REQUIRE(search_modings(p, ModeProperty::Tidy).empty());
  crit.done();
}

TEST_CASE("criterion 12: resolvents preserve both mode disciplines", "[acceptance]") {
  Criterion crit("12 resolvent-closure", 0);

  auto closure = [](std::uint64_t seed, bool with_bot, auto&& holds) {
    testgen::Gen gen(seed);
    int resolvents = 0;
    for (int iter = 0; iter < 100000 && resolvents < 300; ++iter) {
      const Moding3 m = gen.moding(with_bot);
      Query q;
      const std::size_t n = 1 + gen.below(3);
      for (std::size_t i = 0; i < n; ++i)
        q.push_back(gen.atom(gen.coin() ? "p" : "q", 2, 3, 4));
      Clause c;
      c.head = gen.atom(gen.coin() ? "p" : "q", 2, 3, 3);
      for (std::size_t i = 0, nb = gen.below(3); i < nb; ++i)
        c.body.push_back(gen.atom(gen.coin() ? "p" : "q", 2, 3, 3));
      if (!holds(q, m) || !holds(c, m)) continue;

      VarGen vg;
      vg.ensure_above(var_ids(q));
      vg.ensure_above(var_ids(c));
      const Clause fresh = standardize_apart(c, var_ids(q), vg);
      for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i].pred != fresh.head.pred) continue;
        ResolveResult r = resolve(q, i, fresh);
        if (auto* ok = std::get_if<std::pair<Query, Substitution>>(&r)) {
          INFO("query " << render(q) << " clause " << render(fresh) << " at " << i);
          REQUIRE(holds(ok->first, m));
          ++resolvents;
        }
      }
    }
    return resolvents;
  };

  struct Tidy {
    bool operator()(const Query& q, const Moding3& m) const { return is_tidy_query(q, m); }
    bool operator()(const Clause& c, const Moding3& m) const { return is_tidy_clause(c, m); }
  };
  struct Well3 {
    bool operator()(const Query& q, const Moding3& m) const { return is_well_3_moded(q, m); }
    bool operator()(const Clause& c, const Moding3& m) const { return is_well_3_moded(c, m); }
  };
  // tidiness is a two-valued-moding notion; well-3-modedness admits neutral
  REQUIRE(closure(1212, false, Tidy{}) >= 300);
  REQUIRE(closure(1213, true, Well3{}) >= 300);
  crit.done();
}
