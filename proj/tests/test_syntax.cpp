#include "doctest.h"

#include <random>

#include "ast_gen.hpp"
#include "hillgts/syntax.hpp"

using namespace hillgts;
using th::Gen;
using th::structural_eq;

namespace {

FormulaPtr node_t(const std::string& a) { return f_bang(f_atom(a)); }

Formula::EdgeArg arg(const std::string& v) { return {t_var(v), nullptr}; }

}  // namespace

TEST_CASE("formula parsing shapes") {
  auto f = parse_formula("all y1:!a1. (ex y2:!a2. C(y1) * A(y1, y2)) -o ex y3 y4:!a3. C(y1) * D(y3, y4)");
  REQUIRE(f->kind == Formula::Kind::Forall);
  CHECK(f->name == "y1");
  CHECK(is_node_type(f->a));
  auto body = f->b;
  REQUIRE(body->kind == Formula::Kind::Lolli);
  CHECK(body->a->kind == Formula::Kind::Ex);
  auto rhs = body->b;
  REQUIRE(rhs->kind == Formula::Kind::Ex);
  CHECK(rhs->name == "y3");
  REQUIRE(rhs->b->kind == Formula::Kind::Ex);
  CHECK(rhs->b->name == "y4");

  CHECK(parse_formula("one")->kind == Formula::Kind::One);
  CHECK(parse_formula("A * B * C")->b->kind == Formula::Kind::Tensor);
  CHECK(parse_formula("A -o B -o C")->b->kind == Formula::Kind::Lolli);
  CHECK(parse_formula("!A * B")->a->kind == Formula::Kind::Bang);
  CHECK(parse_formula("loc !a1 @ x")->kind == Formula::Kind::Loc);
  CHECK(parse_formula("loc !a1 @ x")->naming->kind == Term::Kind::Var);
  CHECK(parse_formula("E(x, y : !a2)")->args[1].annot != nullptr);
  CHECK(parse_formula("E()")->kind == Formula::Kind::Edge);
  CHECK(parse_formula("E")->kind == Formula::Kind::Atom);
}

TEST_CASE("term parsing shapes") {
  auto t = parse_term("eps(x|n). u x1 x2");
  REQUIRE(t->kind == Term::Kind::Eps);
  CHECK(t->loc == "n");
  CHECK(t->a->kind == Term::Kind::Var);
  REQUIRE(t->b->kind == Term::Kind::App);
  CHECK(t->b->a->kind == Term::Kind::App);

  auto lin = parse_term("v ^ m1 ^ m2");
  REQUIRE(lin->kind == Term::Kind::LinApp);
  CHECK(lin->a->kind == Term::Kind::LinApp);

  auto mixed = parse_term("u x ^ m");
  REQUIRE(mixed->kind == Term::Kind::LinApp);
  CHECK(mixed->a->kind == Term::Kind::App);

  auto l = parse_term("let u * v = w in u * v");
  REQUIRE(l->kind == Term::Kind::Let);
  CHECK(l->pat->kind == Pattern::Kind::Tensor);

  auto d = parse_term("discard x y in nil");
  REQUIRE(d->kind == Term::Kind::Discard);
  CHECK(d->discard_vars == std::vector<std::string>{"x", "y"});

  auto e = parse_term("let eps(z|n). v = u in nil");
  CHECK(e->pat->kind == Pattern::Kind::Eps);

  CHECK(parse_term("lam x. let u = copy(x) in u")->kind == Term::Kind::Lam);
  CHECK(parse_term("!f x")->kind == Term::Kind::App);
  CHECK(parse_term("a * lam x. x")->b->kind == Term::Kind::Lam);
  CHECK(parse_term("let u = lam x. x in u")->a->kind == Term::Kind::Lam);
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_formula("A -o"), ParseError);
  CHECK_THROWS_AS(parse_formula("all in:!a1. one"), ParseError);
  CHECK_THROWS_AS(parse_term("let u = x"), ParseError);
  CHECK_THROWS_AS(parse_term("x )"), ParseError);
  CHECK_THROWS_AS(parse_sequent("[x ; . ; . |- nil :: one"), ParseError);
  try {
    parse_formula("A *\n* B", "bad.hill");
    FAIL("expected throw");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(std::string(e.what()).find("bad.hill:2:1") != std::string::npos);
  }
}

TEST_CASE("sequent parsing") {
  auto s = parse_sequent(
      "[x1 x2] ; x :: !a1, mk :: all y:!a1. E(y) ; u :: C(x), n :: loc !a1 @ x1 "
      "|- ? :: one");
  CHECK(s.sigma == std::vector<std::string>{"x1", "x2"});
  CHECK(s.gamma.size() == 2);
  CHECK(s.delta.size() == 2);
  CHECK(s.subject == nullptr);
  CHECK(s.goal->kind == Formula::Kind::One);
  CHECK(free_nominal_vars(s.delta) == std::set<std::string>{"x1"});

  auto t = parse_sequent("[] ; . ; . |- nil :: one");
  CHECK(t.sigma.empty());
  CHECK(t.gamma.empty());
  CHECK(t.subject->kind == Term::Kind::Nil);

  CHECK(print_sequent(t) == "[] ; . ; . |- nil :: one");
  CHECK(print_sequent(parse_sequent(print_sequent(s))) == print_sequent(s));
}

TEST_CASE("alpha equivalence") {
  auto nt = node_t("a1");
  auto f1 = f_ex("x", nt, f_edge("E", {arg("x")}));
  auto f2 = f_ex("y", nt, f_edge("E", {arg("y")}));
  CHECK(alpha_eq(f1, f2));

  auto g1 = f_ex("x", nt, f_ex("y", nt, f_edge("E", {arg("x"), arg("y")})));
  auto g2 = f_ex("x", nt, f_ex("y", nt, f_edge("E", {arg("y"), arg("x")})));
  CHECK_FALSE(alpha_eq(g1, g2));
  CHECK(alpha_eq(g1, g1));

  CHECK(alpha_eq(parse_term("lam x. lam y. f x y"), parse_term("lam a. lam b. f a b")));
  CHECK_FALSE(alpha_eq(parse_term("lam x. lam y. f x y"), parse_term("lam a. lam b. f b a")));
  CHECK(alpha_eq(parse_term("let u * v = w in u * v"), parse_term("let a * b = w in a * b")));
  CHECK_FALSE(alpha_eq(parse_term("lam x. x"), parse_term("lam x. y")));
  // Free variables compare by name.
  CHECK_FALSE(alpha_eq(t_var("x"), t_var("y")));
  CHECK(alpha_eq(t_var("x"), t_var("x")));
}

TEST_CASE("substitution avoids capture") {
  auto f = parse_formula("all x:!a1. E(x, y)");
  auto g = substitute(f, "y", t_var("x"));
  REQUIRE(g->kind == Formula::Kind::Forall);
  CHECK(g->name != "x");
  CHECK(alpha_eq(g, parse_formula("all z:!a1. E(z, x)")));

  auto id = substitute(parse_term("lam x. f x"), "q", t_var("r"));
  CHECK(alpha_eq(id, parse_term("lam x. f x")));

  auto e = parse_formula("E(x : !a1)");
  CHECK(alpha_eq(substitute(e, "x", t_bang(t_var("w"))), parse_formula("E(!w : !a1)")));

  auto shadow = substitute(parse_term("lam x. x * y"), "y", t_var("k"));
  CHECK(alpha_eq(shadow, parse_term("lam x. x * k")));

  // free_vars interacts with substitution as expected.
  auto t = parse_term("f x x * g y");
  auto img = parse_term("!h z");
  auto after = substitute(t, "x", img);
  auto fv = free_vars(after);
  CHECK(fv.count("z"));
  CHECK(!fv.count("x"));
  CHECK(fv.count("y"));
}

TEST_CASE("substitution into let and eps") {
  auto t = parse_term("let u * v = w in u * v * q");
  auto r = substitute(t, "q", t_var("u"));
  REQUIRE(r->kind == Term::Kind::Let);
  auto pv = pattern_vars(r->pat);
  CHECK(pv[0] != "u");
  CHECK(alpha_eq(r, parse_term("let a * v = w in a * v * u")));

  auto e = substitute(parse_term("eps(x|n). E"), "x", t_bang(t_var("k")));
  CHECK(structural_eq(e, parse_term("eps(!k|n). E")));
  CHECK_THROWS_AS(substitute(parse_term("eps(x|n). nil"), "n", t_bang(t_var("k"))),
                  DesugarError);
  CHECK(structural_eq(substitute(parse_term("eps(x|n). nil"), "n", t_var("m")),
                      parse_term("eps(x|m). nil")));
}

TEST_CASE("let desugaring") {
  CHECK(alpha_eq(desugar_let(p_nil(), t_nil(), t_var("n")), t_var("n")));
  auto body = parse_term("u * v");
  auto out = desugar_let(parse_pattern("u * v"), parse_term("a * b"), body);
  CHECK(structural_eq(out, parse_term("a * b")));
  auto bang = desugar_let(parse_pattern("!x"), parse_term("!(f y)"), parse_term("g x x"));
  CHECK(structural_eq(bang, parse_term("g (f y) (f y)")));
  auto ep = desugar_let(parse_pattern("eps(z|n). v"), parse_term("eps(D|m). w"),
                        parse_term("eps(z|n). v"));
  CHECK(structural_eq(ep, parse_term("eps(D|m). w")));
  CHECK_THROWS_AS(desugar_let(p_nil(), t_var("x"), t_nil()), DesugarError);
  CHECK_THROWS_AS(
      desugar_let(parse_pattern("u"), parse_term("a ^ b"), parse_term("u * u")),
      DesugarError);
  CHECK_THROWS_AS(desugar_let(parse_pattern("u * u"), parse_term("a * b"), t_nil()),
                  DesugarError);
}

TEST_CASE("free variables and use counts") {
  auto t = parse_term("eps(x|n). u m1");
  CHECK(free_vars(t) == std::set<std::string>{"x", "n", "u", "m1"});
  CHECK(count_free_uses(t, "n") == 1);
  CHECK(free_vars(parse_term("discard a b in c")) ==
        std::set<std::string>{"a", "b", "c"});
  CHECK(free_vars(parse_term("lam x. x y")) == std::set<std::string>{"y"});
  CHECK(free_vars(parse_term("copy(x)")) == std::set<std::string>{"x"});
  CHECK(count_free_uses(parse_term("u * u * lam u. u"), "u") == 2);
  CHECK(free_vars(parse_formula("ex x:!a1. E(x, y) * loc !a1 @ z")) ==
        std::set<std::string>{"y", "z"});
}

TEST_CASE("graph formulas and normal forms") {
  auto gamma = parse_formula("ex x1:!a1, x2 x3:!a2. C(x1) * A(x1, x2) * A(x1, x3) * B(x2)");
  CHECK(is_graph_formula(gamma));
  auto nf = normal_form(gamma);
  REQUIRE(nf.has_value());
  CHECK(nf->prefix.size() == 3);
  CHECK(nf->prefix[0].first == "x1");
  CHECK(nf->factors.size() == 4);
  CHECK(nf->closed);

  auto open = normal_form(parse_formula("ex x:!a1. E(x, y)"));
  REQUIRE(open.has_value());
  CHECK_FALSE(open->closed);

  CHECK(normal_form(parse_formula("one"))->factors.empty());
  CHECK_FALSE(normal_form(parse_formula("A -o B")).has_value());
  CHECK_FALSE(normal_form(parse_formula("ex x:!a1. one -o one")).has_value());
  CHECK_FALSE(is_graph_formula(parse_formula("A -o B")));
  CHECK(is_graph_formula(parse_formula("one * loc !a1 @ x")));
}

TEST_CASE("round trips on random asts") {
  Gen g(20260814);
  for (int i = 0; i < 200; ++i) {
    auto t = g.term(4);
    auto printed = print_term(t);
    CAPTURE(printed);
    TermPtr back;
    REQUIRE_NOTHROW(back = parse_term(printed));
    CHECK(structural_eq(t, back));
    CHECK(print_term(back) == printed);
  }
  for (int i = 0; i < 200; ++i) {
    auto f = g.formula(4);
    auto printed = print_formula(f);
    CAPTURE(printed);
    FormulaPtr back;
    REQUIRE_NOTHROW(back = parse_formula(printed));
    CHECK(structural_eq(f, back));
    CHECK(print_formula(back) == printed);
  }
}

TEST_CASE("substitution respects alpha equivalence") {
  auto a = parse_formula("ex x:!a1. E(x, q) * all w:!a2. A(w, q)");
  auto b = parse_formula("ex y:!a1. E(y, q) * all x:!a2. A(x, q)");
  REQUIRE(alpha_eq(a, b));
  auto img = t_bang(t_var("p"));
  CHECK(alpha_eq(substitute(a, "q", img), substitute(b, "q", img)));
  // Even when the image mentions a bound name of only one side.
  auto img2 = t_bang(t_var("x"));
  CHECK(alpha_eq(substitute(a, "q", img2), substitute(b, "q", img2)));

  // free_vars(substitute(t, x -> D)) = (free_vars(t) - x) + free_vars(D).
  Gen g(99);
  int applied = 0;
  for (int i = 0; i < 300 && applied < 60; ++i) {
    auto f = g.formula(3);
    auto fv = free_vars(f);
    if (fv.empty() || fv.count("w9")) continue;
    ++applied;
    auto target = *fv.begin();
    auto after = free_vars(substitute(f, target, t_var("w9")));
    auto expect = fv;
    expect.erase(target);
    expect.insert("w9");
    CHECK(after == expect);
  }
  CHECK(applied >= 50);
}
