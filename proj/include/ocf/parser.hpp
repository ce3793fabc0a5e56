#pragma once

// Reading and writing the concrete syntax: terms with infix + * ^ and list
// sugar, queries, definite clauses, mode directives, and equation sets.
// Variables are scoped per clause inside a program and per parser instance
// otherwise, so two terms parsed by the same parser share their variables.

#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ocf/moding.hpp"
#include "ocf/term.hpp"
#include "ocf/unify.hpp"

namespace ocf {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line, int col)
      : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                           std::to_string(col) + ": " + msg),
        line(line),
        col(col) {}
  int line;
  int col;
};

// The two predicates with native semantics.  They may be called but neither
// defined by clauses nor re-moded.
inline bool is_builtin(const PredKey& k) {
  return (k.name == "constant" && k.arity == 1) || (k.name == "\\==" && k.arity == 2);
}

inline void declare_builtins(Moding3& m) {
  if (!m.declares({"constant", 1})) m.declare("constant", {Mode::In});
  if (!m.declares({"\\==", 2})) m.declare("\\==", {Mode::In, Mode::In});
}

struct Program {
  std::vector<Clause> clauses;
  Moding3 declared;        // ':- mode' directives plus the builtin modings
  Moding3 declared2;       // ':- mode2' directives plus the builtin modings
  bool has_secondary = false;
  std::set<PredKey> user_preds;  // every non-builtin predicate that occurs
  VarId var_ceiling = 0;         // all variable ids in the program are below this
};

namespace lex {

enum class Tok { Name, Var, Int, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { cur_ = scan(); }

  const Token& peek() const { return cur_; }

  Token next() {
    Token t = cur_;
    cur_ = scan();
    return t;
  }

  bool at(Tok k, std::string_view text = {}) const {
    return cur_.kind == k && (text.empty() || cur_.text == text);
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, cur_.line, cur_.col);
  }

  Token expect(Tok k, std::string_view text, const std::string& what) {
    if (!at(k, text)) fail("expected " + what + ", found '" + describe() + "'");
    return next();
  }

  std::string describe() const {
    return cur_.kind == Tok::End ? "end of input" : cur_.text;
  }

 private:
  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  Token scan() {
    for (;;) {
      if (pos_ >= src_.size()) return {Tok::End, "", line_, col_};
      char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        bump();
        continue;
      }
      if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') bump();
        continue;
      }
      break;
    }
    const int l = line_, co = col_;
    const char c = src_[pos_];
    auto ident = [&] {
      std::string s;
      while (pos_ < src_.size() && ident_char(src_[pos_])) {
        s += src_[pos_];
        bump();
      }
      return s;
    };
    if (std::islower(static_cast<unsigned char>(c))) return {Tok::Name, ident(), l, co};
    if (std::isupper(static_cast<unsigned char>(c)) || c == '_')
      return {Tok::Var, ident(), l, co};
    if (std::isdigit(static_cast<unsigned char>(c))) return {Tok::Int, ident(), l, co};
    if (c == ':') {
      bump();
      if (pos_ < src_.size() && src_[pos_] == '-') {
        bump();
        return {Tok::Punct, ":-", l, co};
      }
      throw ParseError("stray ':'", l, co);
    }
    if (c == '\\') {
      bump();
      if (pos_ + 1 < src_.size() && src_[pos_] == '=' && src_[pos_ + 1] == '=') {
        bump();
        bump();
        return {Tok::Punct, "\\==", l, co};
      }
      throw ParseError("stray '\\'", l, co);
    }
    switch (c) {
      case '(': case ')': case '[': case ']': case ',': case '|':
      case '.': case '=': case '+': case '-': case '*': case '^': case '?': {
        bump();
        return {Tok::Punct, std::string(1, c), l, co};
      }
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", l, co);
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token cur_;
};

}  // namespace lex

class Parser {
 public:
  explicit Parser(VarId first_var = 0) : gen_(first_var) {}

  // One term; an optional trailing '.' is accepted.
  Term term(std::string_view src) {
    lex::Lexer lx(src);
    Term t = parse_term(lx);
    finish(lx);
    return t;
  }

  // "s1 = t1, ..., sn = tn" with an optional trailing '.'.
  EquationSet equations(std::string_view src) {
    lex::Lexer lx(src);
    EquationSet out;
    for (;;) {
      Term l = parse_term(lx);
      lx.expect(lex::Tok::Punct, "=", "'='");
      Term r = parse_term(lx);
      out.push(l, r);
      if (lx.at(lex::Tok::Punct, ",")) {
        lx.next();
        continue;
      }
      break;
    }
    finish(lx);
    return out;
  }

  // "a1, ..., an" with an optional trailing '.'.
  Query query(std::string_view src) {
    lex::Lexer lx(src);
    if (lx.at(lex::Tok::End)) lx.fail("empty query");
    Query q = parse_body(lx);
    finish(lx);
    return q;
  }

  Program program(std::string_view src) {
    lex::Lexer lx(src);
    Program p;
    std::set<PredKey> occurring;
    while (!lx.at(lex::Tok::End)) {
      if (lx.at(lex::Tok::Punct, ":-")) {
        parse_directive(lx, p);
        continue;
      }
      scope_.clear();
      Atom head = parse_atom(lx);
      if (is_builtin({head.pred, head.arity()}))
        lx.fail("clause head redefines builtin " + to_string(PredKey{head.pred, head.arity()}));
      Clause c{head, {}};
      if (lx.at(lex::Tok::Punct, ":-")) {
        lx.next();
        c.body = parse_body(lx);
      }
      lx.expect(lex::Tok::Punct, ".", "'.'");
      occurring.insert({c.head.pred, c.head.arity()});
      for (const Atom& a : c.body) occurring.insert({a.pred, a.arity()});
      p.clauses.push_back(std::move(c));
    }
    scope_.clear();

    declare_builtins(p.declared);
    if (p.has_secondary) declare_builtins(p.declared2);
    for (const PredKey& k : occurring)
      if (!is_builtin(k)) p.user_preds.insert(k);
    for (const Moding3* m : {&p.declared, &p.declared2})
      for (const auto& [k, modes] : m->declarations()) {
        (void)modes;
        if (is_builtin(k)) continue;
        bool name_used = false, key_used = false;
        for (const PredKey& o : occurring) {
          name_used = name_used || o.name == k.name;
          key_used = key_used || o == k;
        }
        if (name_used && !key_used)
          throw ParseError("mode declaration " + to_string(k) +
                               " does not match the arity used in the program",
                           1, 1);
      }
    p.var_ceiling = gen_.next();
    return p;
  }

  VarId ceiling() const { return gen_.next(); }

 private:
  void finish(lex::Lexer& lx) {
    if (lx.at(lex::Tok::Punct, ".")) lx.next();
    if (!lx.at(lex::Tok::End)) lx.fail("trailing input '" + lx.describe() + "'");
  }

  Query parse_body(lex::Lexer& lx) {
    Query q;
    q.push_back(parse_atom(lx));
    while (lx.at(lex::Tok::Punct, ",")) {
      lx.next();
      q.push_back(parse_atom(lx));
    }
    return q;
  }

  Atom parse_atom(lex::Lexer& lx) {
    Term t = parse_term(lx);
    if (lx.at(lex::Tok::Punct, "\\==")) {
      lx.next();
      Term r = parse_term(lx);
      return Atom{"\\==", {t, r}};
    }
    if (t.is_var()) lx.fail("expected an atom, found a variable");
    return Atom{t.functor(), t.args()};
  }

  void parse_directive(lex::Lexer& lx, Program& p) {
    lex::Token neck = lx.next();  // ':-'
    lex::Token kind = lx.expect(lex::Tok::Name, "", "'mode' or 'mode2'");
    if (kind.text != "mode" && kind.text != "mode2")
      throw ParseError("unknown directive '" + kind.text + "'", kind.line, kind.col);
    const bool secondary = kind.text == "mode2";
    lex::Token pred = lx.expect(lex::Tok::Name, "", "a predicate name");
    lx.expect(lex::Tok::Punct, "(", "'('");
    std::vector<Mode> modes;
    for (;;) {
      if (lx.at(lex::Tok::Punct, "+")) {
        modes.push_back(Mode::In);
      } else if (lx.at(lex::Tok::Punct, "-")) {
        modes.push_back(Mode::Out);
      } else if (lx.at(lex::Tok::Punct, "?")) {
        if (secondary)
          lx.fail("mode2 declarations allow only '+' and '-'");
        modes.push_back(Mode::Bot);
      } else {
        lx.fail("expected '+', '-' or '?'");
      }
      lx.next();
      if (lx.at(lex::Tok::Punct, ",")) {
        lx.next();
        continue;
      }
      break;
    }
    lx.expect(lex::Tok::Punct, ")", "')'");
    lx.expect(lex::Tok::Punct, ".", "'.'");
    if (is_builtin({pred.text, modes.size()}))
      throw ParseError("cannot re-mode builtin " + pred.text, pred.line, pred.col);
    try {
      (secondary ? p.declared2 : p.declared).declare(pred.text, std::move(modes));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), neck.line, neck.col);
    }
    if (secondary) p.has_secondary = true;
  }

  // Infix layers: '+' loosest, then '*', then '^'; all left-associative.
  Term parse_term(lex::Lexer& lx) { return parse_infix(lx, 1); }

  Term parse_infix(lex::Lexer& lx, int prec) {
    static const char* ops[] = {"", "+", "*", "^"};
    if (prec > 3) return parse_primary(lx);
    Term t = parse_infix(lx, prec + 1);
    while (lx.at(lex::Tok::Punct, ops[prec])) {
      lx.next();
      Term r = parse_infix(lx, prec + 1);
      t = Term::compound(ops[prec], {t, r});
    }
    return t;
  }

  Term parse_primary(lex::Lexer& lx) {
    if (lx.at(lex::Tok::Int)) return Term::constant(lx.next().text);
    if (lx.at(lex::Tok::Var)) {
      lex::Token v = lx.next();
      if (v.text == "_") return gen_.fresh("");
      auto it = scope_.find(v.text);
      if (it != scope_.end()) return it->second;
      Term t = Term::var(gen_.fresh_id(), v.text);
      scope_.emplace(v.text, t);
      return t;
    }
    if (lx.at(lex::Tok::Name)) {
      std::string f = lx.next().text;
      if (!lx.at(lex::Tok::Punct, "(")) return Term::constant(std::move(f));
      lx.next();
      std::vector<Term> args;
      args.push_back(parse_term(lx));
      while (lx.at(lex::Tok::Punct, ",")) {
        lx.next();
        args.push_back(parse_term(lx));
      }
      lx.expect(lex::Tok::Punct, ")", "')'");
      return Term::compound(std::move(f), std::move(args));
    }
    if (lx.at(lex::Tok::Punct, "[")) {
      lx.next();
      if (lx.at(lex::Tok::Punct, "]")) {
        lx.next();
        return Term::constant("[]");
      }
      std::vector<Term> items;
      items.push_back(parse_term(lx));
      while (lx.at(lex::Tok::Punct, ",")) {
        lx.next();
        items.push_back(parse_term(lx));
      }
      Term tail = Term::constant("[]");
      if (lx.at(lex::Tok::Punct, "|")) {
        lx.next();
        tail = parse_term(lx);
      }
      lx.expect(lex::Tok::Punct, "]", "']'");
      for (std::size_t i = items.size(); i-- > 0;)
        tail = Term::compound(".", {items[i], tail});
      return tail;
    }
    if (lx.at(lex::Tok::Punct, "(")) {
      lx.next();
      Term t = parse_term(lx);
      lx.expect(lex::Tok::Punct, ")", "')'");
      return t;
    }
    lx.fail("expected a term, found '" + lx.describe() + "'");
  }

  VarGen gen_;
  std::map<std::string, Term> scope_;
};

inline Term parse_term(std::string_view src, VarId first_var = 0) {
  return Parser(first_var).term(src);
}
inline EquationSet parse_equations(std::string_view src, VarId first_var = 0) {
  return Parser(first_var).equations(src);
}
inline Query parse_query(std::string_view src, VarId first_var = 0) {
  return Parser(first_var).query(src);
}
inline Program parse_program(std::string_view src) { return Parser().program(src); }

// ---------------------------------------------------------------------------
// Rendering.

namespace detail_render {

// Display names; a name shared by several distinct variables gets its id
// appended so renderings stay unambiguous.
class Names {
 public:
  void add(const Term& t) {
    std::vector<Term> occ;
    collect_var_occurrences(t, occ);
    for (const Term& v : occ) groups_[key(v)].insert(v.var_id());
  }
  void add(const Atom& a) {
    for (const Term& t : a.args) add(t);
  }
  void add(const Query& q) {
    for (const Atom& a : q) add(a);
  }
  void add(const EquationSet& e) {
    for (const Equation& eq : e) {
      add(eq.lhs);
      add(eq.rhs);
    }
  }

  std::string of(const Term& v) const {
    if (v.var_name().empty()) return "_G" + std::to_string(v.var_id());
    auto it = groups_.find(key(v));
    if (it != groups_.end() && it->second.size() > 1)
      return v.var_name() + "_" + std::to_string(v.var_id());
    return v.var_name();
  }

 private:
  static std::string key(const Term& v) { return v.var_name(); }
  std::map<std::string, std::set<VarId>> groups_;
};

inline int op_prec(const Term& t) {
  if (!t.is_compound() || t.arity() != 2) return 0;
  const std::string& f = t.functor();
  if (f == "+") return 1;
  if (f == "*") return 2;
  if (f == "^") return 3;
  return 0;
}

inline bool is_cons(const Term& t) {
  return t.is_compound() && t.functor() == "." && t.arity() == 2;
}
inline bool is_nil(const Term& t) { return t.is_constant() && t.functor() == "[]"; }

inline std::string term_str(const Term& t, const Names& n) {
  if (t.is_var()) return n.of(t);
  if (is_nil(t)) return "[]";
  if (is_cons(t)) {
    std::string s = "[" + term_str(t.args()[0], n);
    Term cur = t.args()[1];
    while (is_cons(cur)) {
      s += "," + term_str(cur.args()[0], n);
      cur = cur.args()[1];
    }
    if (!is_nil(cur)) s += "|" + term_str(cur, n);
    return s + "]";
  }
  if (int p = op_prec(t)) {
    auto side = [&](const Term& a, bool tight) {
      int q = op_prec(a);
      std::string s = term_str(a, n);
      if (q != 0 && (q < p || (tight && q == p))) return "(" + s + ")";
      return s;
    };
    return side(t.args()[0], false) + t.functor() + side(t.args()[1], true);
  }
  if (t.args().empty()) return t.functor();
  std::string s = t.functor() + "(";
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) s += ",";
    s += term_str(t.args()[i], n);
  }
  return s + ")";
}

inline std::string atom_str(const Atom& a, const Names& n) {
  if (a.pred == "\\==" && a.args.size() == 2)
    return term_str(a.args[0], n) + " \\== " + term_str(a.args[1], n);
  return term_str(a.as_term(), n);
}

}  // namespace detail_render

inline std::string render(const Term& t) {
  detail_render::Names n;
  n.add(t);
  return detail_render::term_str(t, n);
}

inline std::string render(const Atom& a) {
  detail_render::Names n;
  n.add(a);
  return detail_render::atom_str(a, n);
}

inline std::string render(const Query& q) {
  detail_render::Names n;
  n.add(q);
  std::string s;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (i) s += ", ";
    s += detail_render::atom_str(q[i], n);
  }
  return s;
}

inline std::string render(const Clause& c) {
  detail_render::Names n;
  n.add(c.head);
  n.add(c.body);
  std::string s = detail_render::atom_str(c.head, n);
  if (!c.body.empty()) {
    s += " :- ";
    for (std::size_t i = 0; i < c.body.size(); ++i) {
      if (i) s += ", ";
      s += detail_render::atom_str(c.body[i], n);
    }
  }
  return s + ".";
}

inline std::string render(const EquationSet& e) {
  detail_render::Names n;
  n.add(e);
  std::string s = "{";
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i) s += ", ";
    s += detail_render::term_str(e[i].lhs, n) + " = " + detail_render::term_str(e[i].rhs, n);
  }
  return s + "}";
}

inline std::string render(const Substitution& s) {
  detail_render::Names n;
  for (const auto& [id, b] : s.bindings()) {
    (void)id;
    n.add(b.first);
    n.add(b.second);
  }
  std::string out = "{";
  bool first = true;
  for (const auto& [id, b] : s.bindings()) {
    (void)id;
    if (!first) out += ", ";
    first = false;
    out += detail_render::term_str(b.first, n) + "/" + detail_render::term_str(b.second, n);
  }
  return out + "}";
}

inline std::string render_modes(const std::vector<Mode>& ms) {
  std::string s = "(";
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (i) s += ",";
    s += mode_char(ms[i]);
  }
  return s + ")";
}

inline std::string render(const Moding3& m) {
  std::string s;
  for (const auto& [k, ms] : m.declarations()) {
    if (!s.empty()) s += ", ";
    s += k.name + render_modes(ms);
  }
  return s;
}

inline std::string render(const FailureInfo& f) {
  if (f.reason == FailureInfo::Reason::clash)
    return "clash " + f.clash_a + " vs " + f.clash_b;
  detail_render::Names n;
  n.add(*f.occ_var);
  n.add(*f.occ_term);
  return "occur-check " + detail_render::term_str(*f.occ_var, n) + " in " +
         detail_render::term_str(*f.occ_term, n);
}

// One line per step: "<stepNo> <action> <eqIndex> | <equation set after>".
inline std::string render(const RunTrace& t) {
  std::ostringstream os;
  os << "0 initial - | " << render(t.initial) << "\n";
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const RunStep& s = t.steps[i];
    os << (i + 1) << " " << action_name(s.choice.action) << " " << s.choice.i;
    if (s.choice.j) os << "," << *s.choice.j;
    os << " | " << render(s.after) << "\n";
  }
  if (t.success)
    os << "outcome: success " << render(t.final_set) << "\n";
  else
    os << "outcome: failure (" << render(*t.failure) << ")\n";
  return os.str();
}

}  // namespace ocf
