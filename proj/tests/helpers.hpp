#pragma once

// Deterministic random generators shared by the property tests.  Every test
// constructs its own Gen with a fixed seed, so failures reproduce exactly.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ocf/modes.hpp"
#include "ocf/term.hpp"

namespace testgen {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }

  std::size_t below(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }

  bool coin(double p = 0.5) { return std::uniform_real_distribution<>(0.0, 1.0)(rng_) < p; }

  // A term with at most `budget` symbol/variable occurrences over variables
  // X0..X(nv-1), constants a/b/0 and functors g/1, f/2, h/3.
  ocf::Term term(std::size_t budget, std::size_t nv) {
    if (budget <= 1 || coin(0.35)) {
      if (nv > 0 && coin(0.55)) {
        const std::size_t v = below(nv);
        return ocf::Term::var(static_cast<ocf::VarId>(v), "X" + std::to_string(v));
      }
      static const char* consts[] = {"a", "b", "0"};
      return ocf::Term::constant(consts[below(3)]);
    }
    const std::size_t arity = budget >= 4 ? 1 + below(3) : 1 + below(2);
    std::vector<ocf::Term> args;
    std::size_t rest = budget - 1;
    for (std::size_t i = 0; i < arity; ++i) {
      const std::size_t share = std::max<std::size_t>(1, rest / (arity - i));
      args.push_back(term(1 + below(share), nv));
      rest -= std::min(rest, share);
    }
    static const char* funcs[] = {"", "g", "f", "h"};
    return ocf::Term::compound(funcs[arity], std::move(args));
  }

  ocf::EquationSet equations(std::size_t n, std::size_t budget, std::size_t nv) {
    ocf::EquationSet e;
    for (std::size_t i = 0; i < n; ++i) e.push(term(budget, nv), term(budget, nv));
    return e;
  }

  // A random atom for `pred`/`arity` over variables X0..X(nv-1).
  ocf::Atom atom(const std::string& pred, std::size_t arity, std::size_t budget,
                 std::size_t nv) {
    std::vector<ocf::Term> args;
    for (std::size_t i = 0; i < arity; ++i) args.push_back(term(budget, nv));
    return ocf::Atom{pred, std::move(args)};
  }

  // A random moding for p/2 and q/2; two-valued unless with_bot.
  ocf::Moding3 moding(bool with_bot) {
    ocf::Moding3 m;
    auto pick = [&] {
      const std::size_t n = with_bot ? 3 : 2;
      switch (below(n)) {
        case 0: return ocf::Mode::In;
        case 1: return ocf::Mode::Out;
        default: return ocf::Mode::Bot;
      }
    };
    m.declare("p", {pick(), pick()});
    m.declare("q", {pick(), pick()});
    return m;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace testgen
