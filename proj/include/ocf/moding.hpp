#pragma once

// Argument modes.  A moding assigns each predicate a mode per argument
// position: input (+), output (-), or neither (bot).  A two-valued moding
// uses only + and -.

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ocf/term.hpp"

namespace ocf {

enum class Mode { In, Out, Bot };

inline char mode_char(Mode m) { return m == Mode::In ? '+' : m == Mode::Out ? '-' : '?'; }

struct PredKey {
  std::string name;
  std::size_t arity = 0;

  bool operator<(const PredKey& o) const {
    if (name != o.name) return name < o.name;
    return arity < o.arity;
  }
  bool operator==(const PredKey& o) const { return name == o.name && arity == o.arity; }
};

inline std::string to_string(const PredKey& k) {
  return k.name + "/" + std::to_string(k.arity);
}

struct UndeclaredPredicate : std::runtime_error {
  explicit UndeclaredPredicate(const PredKey& k)
      : std::runtime_error("no mode declared for " + to_string(k)) {}
};

// Per-predicate argument modes over {+, -, bot}.
class Moding3 {
 public:
  Moding3() = default;

  void declare(const std::string& pred, std::vector<Mode> modes) {
    PredKey k{pred, modes.size()};
    auto [it, fresh] = map_.emplace(k, std::move(modes));
    (void)it;
    if (!fresh) throw std::invalid_argument("duplicate mode declaration for " + to_string(k));
  }

  void declare_or_replace(const std::string& pred, std::vector<Mode> modes) {
    map_[PredKey{pred, modes.size()}] = std::move(modes);
  }

  bool declares(const PredKey& k) const { return map_.count(k) > 0; }

  const std::vector<Mode>& modes_of(const PredKey& k) const {
    auto it = map_.find(k);
    if (it == map_.end()) throw UndeclaredPredicate(k);
    return it->second;
  }

  const std::vector<Mode>& modes_of(const Atom& a) const {
    return modes_of(PredKey{a.pred, a.arity()});
  }

  bool empty() const { return map_.empty(); }
  const std::map<PredKey, std::vector<Mode>>& declarations() const { return map_; }

  // True when no position is moded bot.
  bool is_two_valued() const {
    for (const auto& [k, ms] : map_) {
      (void)k;
      for (Mode m : ms)
        if (m == Mode::Bot) return false;
    }
    return true;
  }

 private:
  std::map<PredKey, std::vector<Mode>> map_;
};

// Argument terms of a in the positions moded `which`.
inline std::vector<Term> positions(const Atom& a, const Moding3& m, Mode which) {
  const std::vector<Mode>& ms = m.modes_of(a);
  std::vector<Term> out;
  for (std::size_t i = 0; i < ms.size(); ++i)
    if (ms[i] == which) out.push_back(a.args[i]);
  return out;
}

inline std::vector<Term> input_terms(const Atom& a, const Moding3& m) {
  return positions(a, m, Mode::In);
}
inline std::vector<Term> output_terms(const Atom& a, const Moding3& m) {
  return positions(a, m, Mode::Out);
}

inline std::set<VarId> input_var_ids(const Atom& a, const Moding3& m) {
  std::set<VarId> out;
  for (const Term& t : input_terms(a, m)) {
    auto vs = var_ids(t);
    out.insert(vs.begin(), vs.end());
  }
  return out;
}

inline std::set<VarId> output_var_ids(const Atom& a, const Moding3& m) {
  std::set<VarId> out;
  for (const Term& t : output_terms(a, m)) {
    auto vs = var_ids(t);
    out.insert(vs.begin(), vs.end());
  }
  return out;
}

// No variable occurs twice across the input positions of a.
inline bool is_input_linear(const Atom& a, const Moding3& m) {
  return is_linear(input_terms(a, m));
}

// No variable occurs twice across the output positions of a.
inline bool is_output_linear(const Atom& a, const Moding3& m) {
  return is_linear(output_terms(a, m));
}

// No variable occurs both in an input and in an output position of a.
inline bool is_io_disjoint(const Atom& a, const Moding3& m) {
  const std::set<VarId> in = input_var_ids(a, m);
  for (VarId v : output_var_ids(a, m))
    if (in.count(v)) return false;
  return true;
}

// Every variable with more than one occurrence in a occurs in some input
// position of a.
inline bool is_weakly_linear(const Atom& a, const Moding3& m) {
  std::map<VarId, std::size_t> counts;
  std::vector<Term> occ;
  for (const Term& t : a.args) collect_var_occurrences(t, occ);
  for (const Term& v : occ) ++counts[v.var_id()];
  const std::set<VarId> in = input_var_ids(a, m);
  for (const auto& [v, n] : counts)
    if (n > 1 && !in.count(v)) return false;
  return true;
}

}  // namespace ocf
