#pragma once

// Machine-readable reports.  Every command emits one Report; with sorted
// keys and a content digest (never a path) the JSON dump is byte-identical
// across machines for identical inputs.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ocf/nsto.hpp"
#include "ocf/parser.hpp"
#include "ocf/sld.hpp"
#include "ocf/unify.hpp"
#include "ocf/version.hpp"

namespace ocf {

using json = nlohmann::json;

inline std::string fnv1a_digest(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline json to_json(const FailureInfo& f) {
  json j;
  j["reason"] = f.reason == FailureInfo::Reason::clash ? "clash" : "occur";
  j["detail"] = render(f);
  return j;
}

inline json to_json(const RunTrace& t) {
  json j;
  j["algo"] = t.algo == Algo::Mma ? "mma" : "mma-minus";
  j["initial"] = render(t.initial);
  json steps = json::array();
  for (const RunStep& s : t.steps) {
    json e;
    e["action"] = action_name(s.choice.action);
    e["index"] = s.choice.i;
    if (s.choice.j) e["index2"] = *s.choice.j;
    e["after"] = render(s.after);
    steps.push_back(std::move(e));
  }
  j["steps"] = std::move(steps);
  j["outcome"] = t.success ? "success" : "failure";
  if (t.failure) j["failure"] = to_json(*t.failure);
  j["final"] = render(t.final_set);
  return j;
}

inline json to_json(const Verdict& v) {
  json j;
  j["property"] = to_string(v.property);
  j["value"] = to_string(v.value);
  j["explored"] = v.explored;
  j["certificate"] = v.certificate ? json(*v.certificate) : json(nullptr);
  j["witness"] = v.witness ? to_json(*v.witness) : json(nullptr);
  return j;
}

inline json to_json(const Substitution& s) {
  json j = json::array();
  for (const auto& [id, vb] : s.bindings()) {
    (void)id;
    json b;
    b["var"] = render(vb.first);
    b["term"] = render(vb.second);
    j.push_back(std::move(b));
  }
  return j;
}

inline json to_json(const Moding3& m) {
  json j = json::array();
  for (const auto& [k, ms] : m.declarations()) {
    json d;
    d["pred"] = to_string(k);
    std::string s;
    for (Mode md : ms) s += mode_char(md);
    d["modes"] = s;
    j.push_back(std::move(d));
  }
  return j;
}

inline json to_json(const SldTree& t) {
  json j;
  j["engine"] = t.engine == Algo::Mma ? "sound" : "unsound";
  j["rule"] = to_string(t.rule.kind);
  j["bounds"] = {{"max_nodes", t.bounds.max_nodes}, {"max_depth", t.bounds.max_depth}};
  j["truncated"] = t.truncated;
  json nodes = json::array();
  for (const SldNode& n : t.nodes) {
    json e;
    e["id"] = n.id;
    e["parent"] = n.parent ? json(*n.parent) : json(nullptr);
    e["atom_index"] = n.atom_index ? json(*n.atom_index) : json(nullptr);
    e["clause_index"] = n.clause_index ? json(*n.clause_index) : json(nullptr);
    e["mgu"] = to_json(n.mgu);
    e["query"] = n.query.empty() ? "true" : render(n.query);
    e["depth"] = n.depth;
    e["status"] = to_string(n.status);
    nodes.push_back(std::move(e));
  }
  j["nodes"] = std::move(nodes);
  json aus = json::array();
  for (const AvailableUnification& au : t.aus) {
    json e;
    e["node"] = au.node;
    e["atom_index"] = au.atom_index;
    e["clause_index"] = au.clause_index;
    e["atom"] = render(au.atom);
    e["head"] = render(au.head);
    e["nsto"] = to_json(au.nsto);
    e["wnsto"] = to_json(au.wnsto);
    aus.push_back(std::move(e));
  }
  j["available_unifications"] = std::move(aus);
  return j;
}

// One named check with a verdict; details vary per command.
struct Check {
  std::string id;
  std::string verdict;  // "pass", "refuted", "budget_exceeded", "info"
  json details = json(nullptr);
};

struct Report {
  std::string command;
  std::string scenario;
  std::string input_digest;
  std::vector<Check> checks;
  int exit_status = 0;

  json to_json() const {
    json j;
    j["tool"] = "ocf";
    j["version"] = kVersion;
    j["schema"] = kReportSchema;
    j["command"] = command;
    j["scenario"] = scenario;
    j["input_digest"] = input_digest;
    json cs = json::array();
    for (const Check& c : checks) {
      json e;
      e["id"] = c.id;
      e["verdict"] = c.verdict;
      e["details"] = c.details;
      cs.push_back(std::move(e));
    }
    j["checks"] = std::move(cs);
    j["exit_status"] = exit_status;
    return j;
  }

  std::string dump() const { return to_json().dump(2) + "\n"; }
};

}  // namespace ocf
