#pragma once

// Command-line front end: term/program analysis commands over the library,
// with human-readable output by default and a deterministic JSON report
// under --json.  Exit codes: 0 all checks pass, 1 some check refuted,
// 2 usage or parse error, 3 budget/bound exceeded.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ocf/modes.hpp"
#include "ocf/nsto.hpp"
#include "ocf/parser.hpp"
#include "ocf/report.hpp"
#include "ocf/sld.hpp"
#include "ocf/unify.hpp"

namespace ocf {
namespace cli {

inline int verdict_exit(const Report& r) {
  bool budget = false;
  for (const Check& c : r.checks) {
    if (c.verdict == "refuted") return 1;
    if (c.verdict == "budget_exceeded") budget = true;
  }
  return budget ? 3 : 0;
}

inline std::string check_verdict(VerdictValue v) {
  switch (v) {
    case VerdictValue::True: return "pass";
    case VerdictValue::False: return "refuted";
    case VerdictValue::BudgetExceeded: return "budget_exceeded";
  }
  return "?";
}

inline std::string symbol_name(const std::string& sig) {
  // "f/2" -> "f"
  auto pos = sig.rfind('/');
  return pos == std::string::npos ? sig : sig.substr(0, pos);
}

inline std::string human_failure(const FailureInfo& f) {
  if (f.reason == FailureInfo::Reason::clash)
    return "clash " + symbol_name(f.clash_a) + "/" + symbol_name(f.clash_b);
  return render(f);
}

inline std::string render_answer(const Substitution& s) {
  if (s.empty()) return "true";
  std::string out;
  for (const auto& [id, vb] : s.bindings()) {
    (void)id;
    if (!out.empty()) out += ", ";
    out += render(vb.first) + " = " + render(vb.second);
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CLI::ValidationError("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Per-user-predicate moding display, e.g. "p(+,-), q(+)".
inline std::string render_user_modes(const Moding3& m, const std::set<PredKey>& preds) {
  std::string out;
  for (const PredKey& k : preds) {
    if (!m.declares(k)) continue;
    if (!out.empty()) out += ", ";
    out += k.name + "(";
    bool first = true;
    for (Mode md : m.modes_of(k)) {
      if (!first) out += ",";
      first = false;
      out += mode_char(md);
    }
    out += ")";
  }
  return out;
}

inline json modes_json(const Moding3& m, const std::set<PredKey>& preds) {
  json j = json::array();
  for (const PredKey& k : preds) {
    if (!m.declares(k)) continue;
    std::string s;
    for (Mode md : m.modes_of(k)) s += mode_char(md);
    j.push_back({{"pred", to_string(k)}, {"modes", s}});
  }
  return j;
}

// ---------------------------------------------------------------------------
// unify

struct UnifyOpts {
  std::string lhs, rhs;
  std::string algo = "mma";
  std::string strategy = "first";
  std::uint64_t seed = 0;
  bool trace = false;
};

inline Report cmd_unify(const UnifyOpts& o, std::ostream& out, bool json_out) {
  Report rep;
  rep.command = "unify";
  rep.input_digest = fnv1a_digest(o.lhs + "\n" + o.rhs);

  // One scope so variables shared between the sides coincide.
  EquationSet eq = parse_equations(o.lhs + " = " + o.rhs);
  const Algo algo = o.algo == "mma" ? Algo::Mma : Algo::MmaMinus;
  const Strategy strat = o.strategy == "first" ? Strategy::first_applicable()
                                               : Strategy::seeded_random(o.seed);
  RunTrace t = run(eq, algo, strat);

  Check c;
  c.id = "unify";
  c.verdict = t.success ? "pass" : "refuted";
  json d;
  d["algo"] = o.algo;
  d["strategy"] = o.strategy;
  std::string line;
  if (t.success) {
    if (is_solved(t.final_set)) {
      Substitution mgu = extract_mgu(t.final_set);
      d["outcome"] = "mgu";
      d["mgu"] = render(mgu);
      line = "mgu: " + render(mgu);
    } else {
      d["outcome"] = "semi-solved";
      d["semi_solved"] = render(t.final_set);
      line = "semi-solved: " + render(t.final_set);
    }
  } else {
    d["outcome"] = "failure";
    d["failure"] = to_json(*t.failure);
    line = "failure (" + human_failure(*t.failure) + ")";
  }
  d["steps"] = t.steps.size();
  if (o.trace) d["trace"] = to_json(t);
  c.details = std::move(d);
  rep.checks.push_back(std::move(c));

  if (!json_out) {
    out << line << "\n";
    if (o.trace) out << render(t);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// nsto

struct NstoOpts {
  std::string equations;
  std::string property = "both";
  std::size_t budget = kDefaultBudget;
};

inline Report cmd_nsto(const NstoOpts& o, std::ostream& out, bool json_out) {
  Report rep;
  rep.command = "nsto";
  rep.input_digest = fnv1a_digest(o.equations);

  EquationSet eq = parse_equations(o.equations);
  PairVerdicts pv;
  const Equation* only = eq.size() == 1 ? &eq[0] : nullptr;
  if (only && only->lhs.is_compound() && only->rhs.is_compound() &&
      only->lhs.functor() == only->rhs.functor() &&
      only->lhs.arity() == only->rhs.arity()) {
    // An atom pair: the full certificate chain applies.
    Atom a{only->lhs.functor(), only->lhs.args()};
    Atom h{only->rhs.functor(), only->rhs.args()};
    pv = classify_unification(a, h, nullptr, o.budget);
  } else {
    std::vector<Term> ls, rs;
    for (const Equation& e : eq) {
      ls.push_back(e.lhs);
      rs.push_back(e.rhs);
    }
    if (!eq.empty() && nsto_by_linearity(ls, rs)) {
      pv.nsto = Verdict{Property::Nsto, VerdictValue::True, std::nullopt, "linearity", 0};
    } else {
      pv.nsto = decide_nsto(eq, o.budget);
    }
    if (pv.nsto.value == VerdictValue::True) {
      pv.wnsto = Verdict{Property::Wnsto, VerdictValue::True, std::nullopt,
                         pv.nsto.certificate, pv.nsto.explored};
    } else if (eq.size() >= 2) {
      EquationSet e1, e2;
      e1.push(eq[0].lhs, eq[0].rhs);
      for (std::size_t i = 1; i < eq.size(); ++i) e2.push(eq[i].lhs, eq[i].rhs);
      pv.wnsto = wnsto_by_split(e1, e2, o.budget);
    } else {
      pv.wnsto = decide_wnsto(eq, o.budget);
    }
  }

  auto emit = [&](const Verdict& v) {
    Check c;
    c.id = to_string(v.property);
    c.verdict = check_verdict(v.value);
    c.details = to_json(v);
    rep.checks.push_back(std::move(c));
    if (!json_out) {
      out << to_string(v.property) << ": " << to_string(v.value);
      if (v.certificate) out << "  [certificate: " << *v.certificate << "]";
      if (v.witness) out << "  [witness: " << v.witness->steps.size() << " steps]";
      out << "\n";
    }
  };
  if (o.property == "nsto" || o.property == "both") emit(pv.nsto);
  if (o.property == "wnsto" || o.property == "both") emit(pv.wnsto);
  return rep;
}

// ---------------------------------------------------------------------------
// modes

struct ModesOpts {
  std::string file;
  std::string check;
  std::string query;
  bool search = false;
  std::size_t limit = SIZE_MAX;
  std::size_t cap = 16;
};

struct ClauseDiagnosis {
  std::optional<std::size_t> clause;  // first failing clause (0-based)
  std::string reason;
};

inline std::string tidy_reason(const Clause& c, const Moding3& m) {
  if (!is_output_linear(c.body, m)) return "body not output-linear";
  if (dep_graph(c.body, m).has_cycle()) return "dependency cycle in body";
  if (!is_input_linear(c.head, m)) return "head not input-linear";
  return "head input variable occurs in a body output position";
}

inline std::string nicely_reason(const Clause& c, const Moding3& m) {
  if (!is_output_linear(c.body, m)) return "body not output-linear";
  if (!dep_graph(c.body, m).all_left_to_right())
    return "dependency edge not left-to-right";
  if (!is_input_linear(c.head, m)) return "head not input-linear";
  return "head input variable occurs in a body output position";
}

inline Report cmd_modes(const ModesOpts& o, std::ostream& out, bool json_out) {
  Report rep;
  rep.command = "modes";
  const std::string src = read_file(o.file);
  rep.input_digest = fnv1a_digest(src);
  Program p = parse_program(src);

  if (o.search) {
    ModeProperty prop;
    if (o.check == "tidy")
      prop = ModeProperty::Tidy;
    else if (o.check == "nicely")
      prop = ModeProperty::NicelyModed;
    else if (o.check == "well")
      prop = ModeProperty::WellModed;
    else
      throw CLI::ValidationError("--search supports checks: tidy, nicely, well");
    std::size_t total = 0;
    for (const PredKey& k : p.user_preds) total += k.arity;
    std::vector<Moding3> found = search_modings(p, prop, o.limit, o.cap);
    const std::uint64_t searched =
        o.limit == SIZE_MAX ? (std::uint64_t{1} << total) : found.size();

    Check c;
    c.id = "search";
    // the limit only truncates results, so an empty result is exhaustive
    c.verdict = found.empty() ? "refuted" : "pass";
    json d;
    d["property"] = to_string(prop);
    d["searched"] = searched;
    d["found"] = found.size();
    json ms = json::array();
    for (const Moding3& m : found) ms.push_back(modes_json(m, p.user_preds));
    d["modings"] = std::move(ms);
    c.details = std::move(d);
    rep.checks.push_back(std::move(c));

    if (!json_out) {
      if (found.empty()) {
        out << "no moding found (" << searched << " searched)\n";
      } else {
        out << "found " << found.size() << " modings (" << searched << " searched)\n";
        for (const Moding3& m : found) out << "  " << render_user_modes(m, p.user_preds) << "\n";
      }
    }
    return rep;
  }

  // Single-property check under the declared moding(s).
  const Moding3& m = p.declared;
  if (m.empty()) throw CLI::ValidationError("program declares no modes");
  ClauseDiagnosis diag;
  bool ok = true;
  auto scan = [&](auto&& clause_ok, auto&& reason) {
    for (std::size_t i = 0; i < p.clauses.size(); ++i)
      if (!clause_ok(p.clauses[i])) {
        ok = false;
        diag.clause = i;
        diag.reason = reason(p.clauses[i]);
        return;
      }
  };
  if (o.check == "tidy") {
    scan([&](const Clause& c) { return is_tidy_clause(c, m); },
         [&](const Clause& c) { return tidy_reason(c, m); });
  } else if (o.check == "nicely") {
    scan([&](const Clause& c) { return is_nicely_moded(c, m); },
         [&](const Clause& c) { return nicely_reason(c, m); });
  } else if (o.check == "well" || o.check == "well3") {
    if (o.check == "well") {
      for (const PredKey& k : p.user_preds)
        for (Mode md : m.modes_of(k))
          if (md == Mode::Bot)
            throw CLI::ValidationError(
                "declared moding uses '?'; use --check well3 for 3-modings");
    }
    scan([&](const Clause& c) { return is_well_3_moded(c, m); },
         [&](const Clause&) { return "variable lacks a defining occurrence"; });
  } else if (o.check == "weakly-tidy") {
    if (!p.has_secondary)
      throw CLI::ValidationError("weakly-tidy needs a second moding (mode2 directives)");
    scan(
        [&](const Clause& c) {
          return is_tidy_clause(grounding_transform(c, m), p.declared2);
        },
        [&](const Clause& c) {
          return tidy_reason(grounding_transform(c, m), p.declared2) +
                 " (after grounding head inputs)";
        });
  } else if (o.check == "weakly-linear-heads") {
    scan([&](const Clause& c) { return is_weakly_linear(c.head, m); },
         [&](const Clause&) { return "head not weakly linear"; });
  } else {
    throw CLI::ValidationError("unknown check: " + o.check);
  }

  Check c;
  c.id = o.check;
  c.verdict = ok ? "pass" : "refuted";
  json d;
  d["property"] = o.check;
  d["moding"] = modes_json(m, p.user_preds);
  if (o.check == "weakly-tidy") d["moding2"] = modes_json(p.declared2, p.user_preds);
  d["failing_clause"] = diag.clause ? json(*diag.clause) : json(nullptr);
  d["reason"] = ok ? json(nullptr) : json(diag.reason);
  c.details = std::move(d);
  rep.checks.push_back(std::move(c));

  if (!json_out) {
    if (ok)
      out << o.check << ": pass (moding: " << render_user_modes(m, p.user_preds) << ")\n";
    else
      out << o.check << ": fail at clause (" << *diag.clause + 1 << "): " << diag.reason
          << "\n";
  }

  if (!o.query.empty()) {
    Query q = parse_query(o.query);
    bool qok = true;
    if (o.check == "tidy" || o.check == "weakly-tidy")
      qok = is_tidy_query(q, o.check == "weakly-tidy" ? p.declared2 : m);
    else if (o.check == "nicely")
      qok = is_nicely_moded(q, m);
    else if (o.check == "well" || o.check == "well3")
      qok = is_well_3_moded(q, m);
    else
      qok = true;
    Check qc;
    qc.id = o.check + "-query";
    qc.verdict = qok ? "pass" : "refuted";
    qc.details = json{{"query", render(q)}};
    rep.checks.push_back(std::move(qc));
    if (!json_out) out << o.check << " query: " << (qok ? "pass" : "fail") << "\n";
  }
  return rep;
}

// ---------------------------------------------------------------------------
// derive

struct DeriveOpts {
  std::string file;
  std::string query;
  std::string rule = "leftmost";
  std::string engine = "sound";
  std::string verify = "none";
  std::size_t max_depth = 500;
  std::size_t max_nodes = 20000;
  std::size_t budget = kDefaultBudget;
  bool trace = false;
  bool dump_tree = false;
};

inline Report cmd_derive(const DeriveOpts& o, std::ostream& out, bool json_out) {
  Report rep;
  rep.command = "derive";
  const std::string src = read_file(o.file);
  rep.input_digest = fnv1a_digest(src + "\n" + o.query);
  Program p = parse_program(src);
  Query q0 = parse_query(o.query, p.var_ceiling);

  SelectionRule rule;
  if (o.rule == "leftmost") {
    rule = SelectionRule::leftmost();
  } else if (o.rule == "mode-compatible") {
    if (p.declared.empty())
      throw CLI::ValidationError("mode-compatible selection needs mode declarations");
    rule = SelectionRule::mode_compatible(p.declared);
  } else if (o.rule == "all") {
    rule = SelectionRule::all_rules();
  } else {
    throw CLI::ValidationError("unknown rule: " + o.rule);
  }

  const Bounds bounds{o.max_nodes, o.max_depth};
  const Algo engine = o.engine == "sound" ? Algo::Mma : Algo::MmaMinus;
  SldTree tree = build_tree(p, q0, rule, bounds, engine, o.budget);

  Check c;
  c.id = "derive";
  c.verdict = "info";
  json d;
  d["engine"] = o.engine;
  d["rule"] = o.rule;
  d["nodes"] = tree.nodes.size();
  json st;
  st["success"] = tree.count(NodeStatus::Success);
  st["failure"] = tree.count(NodeStatus::Failure);
  st["floundered"] = tree.count(NodeStatus::Floundered);
  st["depth_cut"] = tree.count(NodeStatus::DepthCut);
  st["cyclic_binding"] = tree.count(NodeStatus::CyclicBinding);
  d["statuses"] = std::move(st);
  d["truncated"] = tree.truncated;
  std::vector<Substitution> ans = answers(tree);
  json ja = json::array();
  for (const Substitution& s : ans) ja.push_back(render_answer(s));
  d["answers"] = std::move(ja);
  d["available_unifications"] = tree.aus.size();
  if (o.dump_tree) d["tree"] = to_json(tree);
  c.details = std::move(d);
  rep.checks.push_back(std::move(c));

  if (!json_out) {
    out << "nodes: " << tree.nodes.size() << " (success " << tree.count(NodeStatus::Success)
        << ", failure " << tree.count(NodeStatus::Failure) << ", floundered "
        << tree.count(NodeStatus::Floundered) << ", depth_cut "
        << tree.count(NodeStatus::DepthCut) << ", cyclic_binding "
        << tree.count(NodeStatus::CyclicBinding) << ")\n";
    if (tree.truncated) out << "truncated: node bound reached\n";
    out << "answers (" << ans.size() << "):\n";
    for (const Substitution& s : ans) out << "  " << render_answer(s) << "\n";
    out << "available unifications: " << tree.aus.size() << "\n";
    if (o.trace) out << render_tree(tree);
  }

  if (o.verify != "none") {
    const Property prop = o.verify == "nsto" ? Property::Nsto : Property::Wnsto;
    VerifyResult vr = verify_occur_check_free(tree, prop);
    std::vector<std::string> certs = unconditional_certificates(p, q0, rule, prop);
    Check vc;
    vc.id = std::string("verify-") + o.verify;
    vc.verdict = vr.status == VerifyStatus::VerifiedUpToBound ? "pass"
                 : vr.status == VerifyStatus::Refuted          ? "refuted"
                                                               : "budget_exceeded";
    json vd;
    vd["status"] = to_string(vr.status);
    vd["bounds"] = {{"max_nodes", bounds.max_nodes}, {"max_depth", bounds.max_depth}};
    vd["truncated"] = tree.truncated;
    vd["certificates"] = certs;
    // AllRules approximates "any selection rule" by branching over atom
    // positions; a bounded verdict under it carries that qualification.
    vd["all_rules_approximation"] =
        rule.kind == SelectionRule::Kind::AllRules && certs.empty();
    if (vr.au_index) {
      const AvailableUnification& au = tree.aus[*vr.au_index];
      json a;
      a["node"] = au.node;
      a["atom"] = render(au.atom);
      a["head"] = render(au.head);
      a["clause_index"] = au.clause_index;
      a["verdict"] = to_json(prop == Property::Nsto ? au.nsto : au.wnsto);
      vd["au"] = std::move(a);
    } else {
      vd["au"] = json(nullptr);
    }
    vc.details = std::move(vd);
    rep.checks.push_back(std::move(vc));

    if (!json_out) {
      if (vr.status == VerifyStatus::VerifiedUpToBound) {
        out << "verify " << o.verify << ": verified up to bounds (depth " << bounds.max_depth
            << ", nodes " << bounds.max_nodes << ")";
        if (rule.kind == SelectionRule::Kind::AllRules && certs.empty())
          out << " [selection approximated by all-positions branching]";
        out << "\n";
        if (!certs.empty()) {
          out << "certificates:";
          for (const std::string& s : certs) out << " " << s;
          out << "\n";
        }
      } else if (vr.status == VerifyStatus::Refuted) {
        const AvailableUnification& au = tree.aus[*vr.au_index];
        out << "verify " << o.verify << ": refuted at clause (" << au.clause_index + 1
            << ")\n";
        out << "  atom: " << render(au.atom) << "\n";
        out << "  head: " << render(au.head) << "\n";
      } else {
        out << "verify " << o.verify << ": budget exceeded during classification\n";
      }
    }
  }

  if (engine == Algo::MmaMinus) {
    SldTree sound = build_tree(p, q0, rule, bounds, Algo::Mma, o.budget);
    const bool agree = canonical_answers(tree) == canonical_answers(sound);
    Check dc;
    dc.id = "dual-engine";
    dc.verdict = agree ? "pass" : "refuted";
    json dd;
    dd["answers_agree"] = agree;
    json sa = json::array();
    for (const Substitution& s : answers(sound)) sa.push_back(render_answer(s));
    dd["sound_answers"] = std::move(sa);
    dd["cyclic_binding_leaves"] = tree.count(NodeStatus::CyclicBinding);
    dc.details = std::move(dd);
    rep.checks.push_back(std::move(dc));
    if (!json_out)
      out << "sound/unsound answers agree: " << (agree ? "yes" : "no") << "\n";
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Entry point.

inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"Occur-check analysis for logic programs"};
  app.require_subcommand(1);
  bool json_out = false;
  std::string scenario;
  app.add_flag("--json", json_out, "emit the machine-readable report");
  app.add_option("--scenario", scenario, "scenario name stamped into the report");

  UnifyOpts uo;
  CLI::App* unify_cmd = app.add_subcommand("unify", "unify two terms");
  unify_cmd->add_option("lhs", uo.lhs, "left term")->required();
  unify_cmd->add_option("rhs", uo.rhs, "right term")->required();
  unify_cmd->add_option("--algo", uo.algo, "mma | mma-minus")
      ->check(CLI::IsMember({"mma", "mma-minus"}));
  unify_cmd->add_option("--strategy", uo.strategy, "first | random")
      ->check(CLI::IsMember({"first", "random"}));
  unify_cmd->add_option("--seed", uo.seed, "seed for --strategy random");
  unify_cmd->add_flag("--trace", uo.trace, "print the action trace");

  NstoOpts no;
  CLI::App* nsto_cmd = app.add_subcommand("nsto", "occur-check exposure of an equation set");
  nsto_cmd->add_option("equations", no.equations, "equations 't = u, ...'")->required();
  nsto_cmd->add_option("--property", no.property, "nsto | wnsto | both")
      ->check(CLI::IsMember({"nsto", "wnsto", "both"}));
  nsto_cmd->add_option("--budget", no.budget, "state exploration budget");

  ModesOpts mo;
  CLI::App* modes_cmd = app.add_subcommand("modes", "mode-based program checks");
  modes_cmd->add_option("file", mo.file, "program file")->required();
  modes_cmd->add_option("--check", mo.check,
                        "tidy | nicely | well | well3 | weakly-tidy | weakly-linear-heads");
  modes_cmd->add_option("--query", mo.query, "also check this query");
  modes_cmd->add_flag("--search", mo.search, "search all two-valued modings");
  modes_cmd->add_option("--limit", mo.limit, "stop search after this many results");
  modes_cmd->add_option("--cap", mo.cap, "max total argument positions for search");

  DeriveOpts dopt;
  CLI::App* derive_cmd = app.add_subcommand("derive", "build a bounded SLD-tree");
  derive_cmd->add_option("file", dopt.file, "program file")->required();
  derive_cmd->add_option("query", dopt.query, "initial query")->required();
  derive_cmd->add_option("--rule", dopt.rule, "leftmost | mode-compatible | all")
      ->check(CLI::IsMember({"leftmost", "mode-compatible", "all"}));
  derive_cmd->add_option("--engine", dopt.engine, "sound | unsound")
      ->check(CLI::IsMember({"sound", "unsound"}));
  derive_cmd->add_option("--verify", dopt.verify, "nsto | wnsto | none")
      ->check(CLI::IsMember({"nsto", "wnsto", "none"}));
  derive_cmd->add_option("--depth", dopt.max_depth, "depth bound");
  derive_cmd->add_option("--nodes", dopt.max_nodes, "node bound");
  derive_cmd->add_option("--budget", dopt.budget, "classification budget");
  derive_cmd->add_flag("--trace", dopt.trace, "print the indented tree");
  derive_cmd->add_flag("--dump-tree", dopt.dump_tree, "include the full tree in the report");

  std::vector<const char*> argv;
  argv.push_back("ocf");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    Report rep;
    if (unify_cmd->parsed())
      rep = cmd_unify(uo, out, json_out);
    else if (nsto_cmd->parsed())
      rep = cmd_nsto(no, out, json_out);
    else if (modes_cmd->parsed())
      rep = cmd_modes(mo, out, json_out);
    else
      rep = cmd_derive(dopt, out, json_out);
    rep.scenario = scenario;
    rep.exit_status = verdict_exit(rep);
    if (json_out) out << rep.dump();
    return rep.exit_status;
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const UndeclaredPredicate& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace cli
}  // namespace ocf
