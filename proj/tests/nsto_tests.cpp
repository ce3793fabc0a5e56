#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "helpers.hpp"
#include "ocf/moding.hpp"
#include "ocf/nsto.hpp"
#include "ocf/parser.hpp"

using namespace ocf;

TEST_CASE("pinned occur-check reachability verdicts", "[nsto]") {
  // a clash-only set never reaches the occur action
  Verdict v = decide_nsto(parse_equations("a = b"));
  CHECK(v.value == VerdictValue::True);

  // a direct cyclic equation must reach it
  CHECK(decide_nsto(parse_equations("X = f(X)")).value == VerdictValue::False);
  CHECK(decide_wnsto(parse_equations("X = f(X)")).value == VerdictValue::False);

  // linear, variable-disjoint sides are safe
  CHECK(decide_nsto(parse_equations("f(X, Y) = f(a, b)")).value == VerdictValue::True);
  CHECK(decide_wnsto(parse_equations("f(X, Y) = f(a, b)")).value == VerdictValue::True);
}

TEST_CASE("motivating pair: occur-reachable but weakly safe", "[nsto]") {
  const EquationSet e = parse_equations("p(a, f(X), X) = p(b, Y, Y)");

  Verdict nsto = decide_nsto(e);
  REQUIRE(nsto.value == VerdictValue::False);
  REQUIRE(nsto.witness.has_value());
  CHECK_FALSE(nsto.witness->success);
  CHECK(nsto.witness->failure->reason == FailureInfo::Reason::occur);
  CHECK(nsto.witness->performed(ActionTag::OccurFail));
  // the recorded witness replays move for move
  RunTrace again = replay(*nsto.witness);
  CHECK(again.failure->reason == FailureInfo::Reason::occur);

  Verdict wnsto = decide_wnsto(e);
  REQUIRE(wnsto.value == VerdictValue::True);
  REQUIRE(wnsto.witness.has_value());
  CHECK_FALSE(wnsto.witness->performed(ActionTag::OccurFail));
  // here the safe run ends in a clash (a = b), not in success
  REQUIRE(wnsto.witness->failure.has_value());
  CHECK(wnsto.witness->failure->reason == FailureInfo::Reason::clash);
}

TEST_CASE("swi display pair is not even weakly safe", "[nsto]") {
  const EquationSet e = parse_equations("g(X, X) = g(Y, f(Y))");
  CHECK(decide_nsto(e).value == VerdictValue::False);
  CHECK(decide_wnsto(e).value == VerdictValue::False);
}

TEST_CASE("verdicts carry the exploration budget spent", "[nsto]") {
  Verdict v = decide_nsto(parse_equations("f(X, Y) = f(g(Y), g(X))"));
  CHECK(v.explored > 0);
  CHECK(v.certificate == "exhaustive-search");

  // an absurdly small budget is reported, not silently truncated
  const EquationSet big = parse_equations(
      "p(X1, X2, X3, X4) = p(f(X2, X2), f(X3, X3), f(X4, X4), a)");
  CHECK(decide_nsto(big, 3).value == VerdictValue::BudgetExceeded);
  CHECK(decide_wnsto(big, 3).value == VerdictValue::BudgetExceeded);
}

TEST_CASE("canonical keys identify equation sets up to renaming", "[nsto]") {
  const EquationSet a = parse_equations("f(X, Y) = f(Y, g(Z))");
  const EquationSet b = parse_equations("f(U, V) = f(V, g(W))");
  const EquationSet c = parse_equations("f(X, Y) = f(X, g(Z))");
  CHECK(canonical_key(a) == canonical_key(b));
  CHECK(canonical_key(a) != canonical_key(c));
  CHECK(is_isomorphic(a, b));
  CHECK_FALSE(is_isomorphic(a, c));
  // order of equations does not matter
  const EquationSet d1 = parse_equations("X = a, Y = f(Y)");
  const EquationSet d2 = parse_equations("Y = f(Y), X = a");
  CHECK(canonical_key(d1) == canonical_key(d2));
}

TEST_CASE("random runs never contradict the decider", "[nsto]") {
  testgen::Gen gen(77);
  for (int i = 0; i < 300; ++i) {
    const EquationSet e = gen.equations(1 + gen.below(2), 8, 4);
    Verdict v = decide_nsto(e);
    if (v.value != VerdictValue::True) continue;
    // no random run of the full rules may perform the occur action
    for (int s = 0; s < 10; ++s) {
      RunTrace t = run(e, Algo::Mma, Strategy::seeded_random(s));
      CHECK_FALSE(t.performed(ActionTag::OccurFail));
    }
  }
}

TEST_CASE("linearity certificate is sound", "[nsto]") {
  testgen::Gen gen(78);
  Substitution shift;
  for (VarId v = 0; v < 4; ++v) shift.bind(Term::var(v), Term::var(100 + v));

  int fired = 0;
  for (int i = 0; i < 400; ++i) {
    const Term s = gen.term(7, 4);
    const Term t = shift.apply(gen.term(7, 4));
    if (!nsto_by_linearity({s}, {t})) continue;
    ++fired;
    CHECK(decide_nsto(EquationSet::of(s, t)).value == VerdictValue::True);
  }
  CHECK(fired > 30);
}

TEST_CASE("atom-conditions certificate is sound", "[nsto]") {
  testgen::Gen gen(79);
  Substitution shift;
  for (VarId v = 0; v < 3; ++v) shift.bind(Term::var(v), Term::var(100 + v));

  int fired = 0;
  for (int i = 0; i < 600; ++i) {
    const Moding3 m = gen.moding(false);
    const Atom a = gen.atom("p", 2, 4, 3);
    Atom h = gen.atom("p", 2, 4, 3);
    h.args[0] = shift.apply(h.args[0]);
    h.args[1] = shift.apply(h.args[1]);
    if (!nsto_by_atom_conditions(a, h, m)) continue;
    ++fired;
    CHECK(decide_nsto(EquationSet::of(a, h)).value == VerdictValue::True);
  }
  CHECK(fired > 30);
}

TEST_CASE("weakly-linear certificate is sound for the weak property", "[nsto]") {
  testgen::Gen gen(80);
  Substitution shift;
  for (VarId v = 0; v < 3; ++v) shift.bind(Term::var(v), Term::var(100 + v));

  int fired = 0;
  for (int i = 0; i < 600; ++i) {
    const Moding3 m = gen.moding(true);
    Atom a = gen.atom("p", 2, 4, 3);
    Atom h = gen.atom("p", 2, 4, 3);
    h.args[0] = shift.apply(h.args[0]);
    h.args[1] = shift.apply(h.args[1]);
    if (!wnsto_by_weakly_linear(a, h, m)) continue;
    ++fired;
    Verdict v = decide_wnsto(EquationSet::of(a, h));
    CHECK(v.value == VerdictValue::True);
  }
  CHECK(fired > 20);
}

TEST_CASE("split agrees with the exact weak decider", "[nsto]") {
  testgen::Gen gen(81);
  int agreements = 0;
  while (agreements < 200) {
    const EquationSet e1 = gen.equations(1, 6, 3);
    const EquationSet e2 = gen.equations(1 + gen.below(2), 6, 3);
    Verdict split = wnsto_by_split(e1, e2);
    Verdict exact = decide_wnsto(e1.union_with(e2));
    REQUIRE(split.value != VerdictValue::BudgetExceeded);
    REQUIRE(exact.value != VerdictValue::BudgetExceeded);
    CHECK(split.value == exact.value);
    ++agreements;
  }
}

TEST_CASE("classification prefers the cheapest certificate", "[nsto]") {
  // both sides linear and variable-disjoint: a linearity certificate
  {
    const Atom a = parse_query("p(X, Y)").at(0);
    const Atom h = parse_query("p(f(U), a)", 10).at(0);
    PairVerdicts pv = classify_unification(a, h, nullptr);
    CHECK(pv.nsto.value == VerdictValue::True);
    CHECK(pv.nsto.certificate == "linearity");
    CHECK(pv.wnsto.value == VerdictValue::True);
    CHECK(pv.wnsto.certificate == "linearity");
  }
  // a moding makes the atom-conditions certificate fire first
  {
    Moding3 m;
    m.declare("p", {Mode::In, Mode::Out});
    const Atom a = parse_query("p(a, Y)").at(0);
    const Atom h = parse_query("p(X, f(X))", 10).at(0);
    PairVerdicts pv = classify_unification(a, h, &m);
    CHECK(pv.nsto.value == VerdictValue::True);
    CHECK(pv.nsto.certificate == "atom-conditions");
  }
  // non-nsto pairs fall back to split or the exact decider for the weak side
  {
    const Atom a = parse_query("p(a, f(X), X)").at(0);
    const Atom h = parse_query("p(b, Y, Y)", 10).at(0);
    PairVerdicts pv = classify_unification(a, h, nullptr);
    CHECK(pv.nsto.value == VerdictValue::False);
    CHECK(pv.wnsto.value == VerdictValue::True);
    CHECK(pv.wnsto.certificate == "split");
  }
}

TEST_CASE("occur-free run space enumeration", "[nsto]") {
  // all runs clash, no stuck sets
  MmaMinusOutcomes a = enumerate_mma_minus(parse_equations("p(a, f(X), X) = p(b, Y, Y)"));
  CHECK(a.complete);
  CHECK(a.clash_reachable);
  CHECK(a.terminals.empty());

  // exactly one stuck set modulo renaming, no clash
  MmaMinusOutcomes b = enumerate_mma_minus(parse_equations("g(X, X) = g(Y, f(Y))"));
  CHECK(b.complete);
  CHECK_FALSE(b.clash_reachable);
  REQUIRE(b.terminals.size() == 1);
  CHECK(is_semi_solved(b.terminals[0]));

  // budget cut: allow only the initial set, so the decomposed child overflows
  MmaMinusOutcomes c = enumerate_mma_minus(
      parse_equations("p(X1, X2, X3) = p(f(X2, X2), f(X3, X3), f(X1, a))"), 1);
  CHECK_FALSE(c.complete);
}

TEST_CASE("soundness checker pinpoints the unsound display pair", "[nsto]") {
  SoundnessReport good = check_mma_minus_sound(parse_equations("p(a, f(X), X) = p(b, Y, Y)"));
  CHECK(good.ok);
  CHECK_FALSE(good.oracle_unifiable);
  CHECK(good.clash_reachable);

  SoundnessReport bad = check_mma_minus_sound(parse_equations("g(X, X) = g(Y, f(Y))"));
  CHECK_FALSE(bad.ok);
  CHECK_FALSE(bad.oracle_unifiable);
  CHECK(bad.terminals == 1);
  CHECK(bad.detail == "non-unifiable input reached a stuck set");
}

TEST_CASE("weakly safe sets make the occur-free rules sound", "[nsto]") {
  testgen::Gen gen(82);
  int verified = 0;
  while (verified < 500) {
    const EquationSet e = gen.equations(1 + gen.below(2), 7, 4);
    Verdict w = decide_wnsto(e, 20000);
    if (w.value != VerdictValue::True) continue;
    SoundnessReport rep = check_mma_minus_sound(e, 50000);
    if (rep.budget_exceeded) continue;
    INFO(render(e) << ": " << rep.detail);
    CHECK(rep.ok);
    ++verified;
  }
}

TEST_CASE("substitution variant comparison", "[nsto]") {
  const Term x = Term::var(0, "X");
  const Term y = Term::var(1, "Y");
  const Substitution s = Substitution::of({{x, parse_term("f(U, U)", 10)}});
  const Substitution t = Substitution::of({{x, parse_term("f(W, W)", 20)}});
  const Substitution u = Substitution::of({{x, parse_term("f(W, V)", 20)}});
  CHECK(variant_equal_on({0, 1}, s, t));
  CHECK_FALSE(variant_equal_on({0, 1}, s, u));
  // keeping one side fixed distinguishes bound from unbound
  const Substitution id;
  CHECK_FALSE(variant_equal_on({0}, s, id));
  CHECK(variant_equal_on({1}, s, id));  // neither binds Y
}
