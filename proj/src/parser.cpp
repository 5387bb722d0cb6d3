#include <set>

#include "hillgts/syntax.hpp"
#include "lexer.hpp"

namespace hillgts {

namespace {

using lex::Lexer;
using lex::Tok;

const std::set<std::string>& keywords() {
  static const std::set<std::string> kw = {"all", "copy", "discard", "eps",
                                           "ex",  "in",   "lam",     "let",
                                           "llam", "loc",  "nil",     "one"};
  return kw;
}

struct Parser {
  Lexer& lx;

  std::string var_name(const std::string& what) {
    if (lx.peek().k != Tok::K::Ident) lx.fail("expected " + what);
    if (keywords().count(lx.peek().s))
      lx.fail("keyword '" + lx.peek().s + "' cannot be used as " + what);
    return lx.next().s;
  }

  // Formulas. Quantifiers and the right-hand sides of -o and * extend as far
  // as possible to the right.
  FormulaPtr formula0() {
    if (lx.at("all") || lx.at("ex")) return quantifier();
    FormulaPtr l = formula1();
    if (lx.eat("-o")) return f_lolli(l, formula0());
    return l;
  }

  FormulaPtr formula1() {
    if (lx.at("all") || lx.at("ex")) return quantifier();
    FormulaPtr l = formula2();
    if (lx.eat("*")) return f_tensor(l, formula1());
    return l;
  }

  FormulaPtr quantifier() {
    bool univ = lx.next().s == "all";
    std::vector<std::pair<std::string, FormulaPtr>> binders;
    for (;;) {
      std::vector<std::string> names;
      names.push_back(var_name("a quantifier variable"));
      while (lx.peek().k == Tok::K::Ident && !keywords().count(lx.peek().s))
        names.push_back(lx.next().s);
      lx.expect(":");
      FormulaPtr dom = formula2();
      for (const auto& n : names) binders.emplace_back(n, dom);
      if (!lx.eat(",")) break;
    }
    lx.expect(".");
    FormulaPtr body = formula0();
    for (auto it = binders.rbegin(); it != binders.rend(); ++it)
      body = univ ? f_forall(it->first, it->second, body)
                  : f_ex(it->first, it->second, body);
    return body;
  }

  FormulaPtr formula2() {
    if (lx.eat("!")) return f_bang(formula2());
    if (lx.eat("loc")) {
      FormulaPtr body = formula2();
      lx.expect("@");
      TermPtr naming = term3();
      return f_loc(body, naming);
    }
    return formula3();
  }

  FormulaPtr formula3() {
    if (lx.eat("one")) return f_one();
    if (lx.eat("(")) {
      FormulaPtr f = formula0();
      lx.expect(")");
      return f;
    }
    std::string name = var_name("a formula");
    if (!lx.eat("(")) return f_atom(name);
    std::vector<Formula::EdgeArg> args;
    if (!lx.at(")")) {
      do {
        Formula::EdgeArg arg;
        arg.term = term3();
        if (lx.eat(":")) arg.annot = formula2();
        args.push_back(std::move(arg));
      } while (lx.eat(","));
    }
    lx.expect(")");
    return f_edge(name, std::move(args));
  }

  // Terms.
  TermPtr term0() {
    if (lx.at("lam") || lx.at("llam")) {
      bool lin = lx.next().s == "llam";
      std::string x = var_name("a binder");
      lx.expect(".");
      TermPtr body = term0();
      return lin ? t_llam(x, body) : t_lam(x, body);
    }
    if (lx.at("eps")) {
      lx.next();
      lx.expect("(");
      TermPtr witness = term0();
      lx.expect("|");
      std::string n = var_name("a location variable");
      lx.expect(")");
      lx.expect(".");
      return t_eps(witness, n, term0());
    }
    if (lx.at("let")) {
      lx.next();
      PatternPtr p = pattern0();
      lx.expect("=");
      TermPtr bound = term0();
      lx.expect("in");
      return t_let(p, bound, term0());
    }
    if (lx.at("discard")) {
      lx.next();
      std::vector<std::string> vars;
      while (!lx.at("in")) vars.push_back(var_name("a discarded variable"));
      lx.expect("in");
      return t_discard(std::move(vars), term0());
    }
    return term1();
  }

  TermPtr term1() {
    TermPtr l = term2();
    if (lx.eat("*")) return t_tensor(l, term0());
    return l;
  }

  bool at_term_atom() const {
    const Tok& t = lx.peek();
    if (t.k == Tok::K::Ident)
      return !keywords().count(t.s) || t.s == "nil" || t.s == "copy";
    return t.k == Tok::K::Sym && (t.s == "!" || t.s == "(");
  }

  TermPtr term2() {
    TermPtr f = term3();
    for (;;) {
      if (lx.eat("^")) {
        f = t_linapp(f, term3());
      } else if (at_term_atom()) {
        f = t_app(f, term3());
      } else {
        return f;
      }
    }
  }

  TermPtr term3() {
    if (lx.eat("nil")) return t_nil();
    if (lx.eat("!")) return t_bang(term3());
    if (lx.at("copy")) {
      lx.next();
      lx.expect("(");
      std::string x = var_name("a variable");
      lx.expect(")");
      return t_copy(x);
    }
    if (lx.eat("(")) {
      TermPtr t = term0();
      lx.expect(")");
      return t;
    }
    return t_var(var_name("a term"));
  }

  // Patterns.
  PatternPtr pattern0() {
    PatternPtr l = pattern1();
    if (lx.eat("*")) return p_tensor(l, pattern0());
    return l;
  }

  PatternPtr pattern1() {
    if (lx.eat("nil")) return p_nil();
    if (lx.eat("!")) return p_bang(pattern1());
    if (lx.at("copy")) {
      lx.next();
      lx.expect("(");
      std::string x = var_name("a variable");
      lx.expect(")");
      return p_copy(x);
    }
    if (lx.at("eps")) {
      lx.next();
      lx.expect("(");
      std::string x = var_name("a witness variable");
      lx.expect("|");
      std::string n = var_name("a location variable");
      lx.expect(")");
      lx.expect(".");
      return p_eps(x, n, pattern0());
    }
    if (lx.eat("(")) {
      PatternPtr p = pattern0();
      lx.expect(")");
      return p;
    }
    return p_var(var_name("a pattern"));
  }

  Context context() {
    Context out;
    if (lx.eat(".")) return out;
    do {
      CtxEntry e;
      e.name = var_name("a context variable");
      lx.expect("::");
      e.type = formula0();
      out.push_back(std::move(e));
    } while (lx.eat(","));
    return out;
  }

  Sequent sequent() {
    Sequent s;
    lx.expect("[");
    while (!lx.at("]")) {
      lx.eat(",");
      s.sigma.push_back(var_name("a sigma variable"));
    }
    lx.expect("]");
    s.sigma = sorted_unique(std::move(s.sigma));
    lx.expect(";");
    s.gamma = context();
    lx.expect(";");
    s.delta = context();
    lx.expect("|-");
    if (!lx.eat("?")) s.subject = term0();
    lx.expect("::");
    s.goal = formula0();
    return s;
  }
};

void expect_end(Lexer& lx) {
  if (!lx.at_end()) lx.fail("expected end of input");
}

}  // namespace

bool reserved_word(const std::string& s) { return keywords().count(s) > 0; }

TermPtr parse_term(const std::string& text, const std::string& filename) {
  Lexer lx(text, filename);
  Parser p{lx};
  TermPtr t = p.term0();
  expect_end(lx);
  return t;
}

FormulaPtr parse_formula(const std::string& text, const std::string& filename,
                         int line_offset) {
  Lexer lx(text, filename, line_offset);
  Parser p{lx};
  FormulaPtr f = p.formula0();
  expect_end(lx);
  return f;
}

PatternPtr parse_pattern(const std::string& text, const std::string& filename) {
  Lexer lx(text, filename);
  Parser p{lx};
  PatternPtr pt = p.pattern0();
  expect_end(lx);
  return pt;
}

Sequent parse_sequent(const std::string& text, const std::string& filename,
                      int line_offset) {
  Lexer lx(text, filename, line_offset);
  Parser p{lx};
  Sequent s = p.sequent();
  expect_end(lx);
  return s;
}

}  // namespace hillgts
