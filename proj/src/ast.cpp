#include "hillgts/ast.hpp"

#include <algorithm>
#include <functional>

namespace hillgts {

namespace {

TermPtr mk(Term t) { return std::make_shared<Term>(std::move(t)); }
FormulaPtr mk(Formula f) { return std::make_shared<Formula>(std::move(f)); }
PatternPtr mk(Pattern p) { return std::make_shared<Pattern>(std::move(p)); }

using TK = Term::Kind;
using FK = Formula::Kind;
using PK = Pattern::Kind;

}  // namespace

PatternPtr p_var(std::string name) {
  Pattern p;
  p.kind = PK::Var;
  p.name = std::move(name);
  return mk(std::move(p));
}

PatternPtr p_nil() {
  Pattern p;
  p.kind = PK::Nil;
  return mk(std::move(p));
}

PatternPtr p_tensor(PatternPtr a, PatternPtr b) {
  Pattern p;
  p.kind = PK::Tensor;
  p.a = std::move(a);
  p.b = std::move(b);
  return mk(std::move(p));
}

PatternPtr p_eps(std::string witness, std::string loc, PatternPtr body) {
  Pattern p;
  p.kind = PK::Eps;
  p.name = std::move(witness);
  p.loc = std::move(loc);
  p.a = std::move(body);
  return mk(std::move(p));
}

PatternPtr p_bang(PatternPtr body) {
  Pattern p;
  p.kind = PK::Bang;
  p.a = std::move(body);
  return mk(std::move(p));
}

PatternPtr p_copy(std::string name) {
  Pattern p;
  p.kind = PK::Copy;
  p.name = std::move(name);
  return mk(std::move(p));
}

std::vector<std::string> pattern_vars(const PatternPtr& p) {
  std::vector<std::string> out;
  std::function<void(const PatternPtr&)> go = [&](const PatternPtr& q) {
    if (!q) return;
    switch (q->kind) {
      case PK::Var:
      case PK::Copy:
        out.push_back(q->name);
        break;
      case PK::Nil:
        break;
      case PK::Tensor:
        go(q->a);
        go(q->b);
        break;
      case PK::Eps:
        out.push_back(q->name);
        out.push_back(q->loc);
        go(q->a);
        break;
      case PK::Bang:
        go(q->a);
        break;
    }
  };
  go(p);
  return out;
}

TermPtr t_var(std::string name) {
  Term t;
  t.kind = TK::Var;
  t.var = std::move(name);
  return mk(std::move(t));
}

TermPtr t_nil() {
  Term t;
  t.kind = TK::Nil;
  return mk(std::move(t));
}

TermPtr t_tensor(TermPtr a, TermPtr b) {
  Term t;
  t.kind = TK::Tensor;
  t.a = std::move(a);
  t.b = std::move(b);
  return mk(std::move(t));
}

TermPtr t_eps(TermPtr witness, std::string loc, TermPtr body) {
  Term t;
  t.kind = TK::Eps;
  t.a = std::move(witness);
  t.loc = std::move(loc);
  t.b = std::move(body);
  return mk(std::move(t));
}

TermPtr t_lam(std::string binder, TermPtr body) {
  Term t;
  t.kind = TK::Lam;
  t.var = std::move(binder);
  t.a = std::move(body);
  return mk(std::move(t));
}

TermPtr t_llam(std::string binder, TermPtr body) {
  Term t;
  t.kind = TK::LinLam;
  t.var = std::move(binder);
  t.a = std::move(body);
  return mk(std::move(t));
}

TermPtr t_app(TermPtr f, TermPtr arg) {
  Term t;
  t.kind = TK::App;
  t.a = std::move(f);
  t.b = std::move(arg);
  return mk(std::move(t));
}

TermPtr t_linapp(TermPtr f, TermPtr arg) {
  Term t;
  t.kind = TK::LinApp;
  t.a = std::move(f);
  t.b = std::move(arg);
  return mk(std::move(t));
}

TermPtr t_bang(TermPtr body) {
  Term t;
  t.kind = TK::Bang;
  t.a = std::move(body);
  return mk(std::move(t));
}

TermPtr t_discard(std::vector<std::string> vars, TermPtr body) {
  Term t;
  t.kind = TK::Discard;
  t.discard_vars = std::move(vars);
  t.a = std::move(body);
  return mk(std::move(t));
}

TermPtr t_copy(std::string source) {
  Term t;
  t.kind = TK::Copy;
  t.var = std::move(source);
  return mk(std::move(t));
}

TermPtr t_let(PatternPtr pat, TermPtr bound, TermPtr body) {
  Term t;
  t.kind = TK::Let;
  t.pat = std::move(pat);
  t.a = std::move(bound);
  t.b = std::move(body);
  return mk(std::move(t));
}

FormulaPtr f_atom(std::string name) {
  Formula f;
  f.kind = FK::Atom;
  f.name = std::move(name);
  return mk(std::move(f));
}

FormulaPtr f_edge(std::string label, std::vector<Formula::EdgeArg> args) {
  Formula f;
  f.kind = FK::Edge;
  f.name = std::move(label);
  f.args = std::move(args);
  return mk(std::move(f));
}

FormulaPtr f_one() {
  Formula f;
  f.kind = FK::One;
  return mk(std::move(f));
}

FormulaPtr f_tensor(FormulaPtr a, FormulaPtr b) {
  Formula f;
  f.kind = FK::Tensor;
  f.a = std::move(a);
  f.b = std::move(b);
  return mk(std::move(f));
}

FormulaPtr f_lolli(FormulaPtr a, FormulaPtr b) {
  Formula f;
  f.kind = FK::Lolli;
  f.a = std::move(a);
  f.b = std::move(b);
  return mk(std::move(f));
}

FormulaPtr f_bang(FormulaPtr a) {
  Formula f;
  f.kind = FK::Bang;
  f.a = std::move(a);
  return mk(std::move(f));
}

FormulaPtr f_forall(std::string binder, FormulaPtr domain, FormulaPtr body) {
  Formula f;
  f.kind = FK::Forall;
  f.name = std::move(binder);
  f.a = std::move(domain);
  f.b = std::move(body);
  return mk(std::move(f));
}

FormulaPtr f_ex(std::string binder, FormulaPtr domain, FormulaPtr body) {
  Formula f;
  f.kind = FK::Ex;
  f.name = std::move(binder);
  f.a = std::move(domain);
  f.b = std::move(body);
  return mk(std::move(f));
}

FormulaPtr f_loc(FormulaPtr body, TermPtr naming) {
  Formula f;
  f.kind = FK::Loc;
  f.a = std::move(body);
  f.naming = std::move(naming);
  return mk(std::move(f));
}

FormulaPtr tensor_of(const std::vector<FormulaPtr>& factors) {
  if (factors.empty()) return f_one();
  FormulaPtr out = factors.back();
  for (std::size_t i = factors.size() - 1; i-- > 0;) out = f_tensor(factors[i], out);
  return out;
}

std::set<std::string> free_vars(const TermPtr& t) {
  std::set<std::string> out;
  std::function<void(const TermPtr&, std::set<std::string>)> go =
      [&](const TermPtr& u, std::set<std::string> bound) {
        if (!u) return;
        switch (u->kind) {
          case TK::Var:
          case TK::Copy:
            if (!bound.count(u->var)) out.insert(u->var);
            break;
          case TK::Nil:
            break;
          case TK::Tensor:
          case TK::App:
          case TK::LinApp:
            go(u->a, bound);
            go(u->b, bound);
            break;
          case TK::Eps:
            go(u->a, bound);
            if (!bound.count(u->loc)) out.insert(u->loc);
            go(u->b, bound);
            break;
          case TK::Lam:
          case TK::LinLam: {
            auto b2 = bound;
            b2.insert(u->var);
            go(u->a, std::move(b2));
            break;
          }
          case TK::Bang:
            go(u->a, bound);
            break;
          case TK::Discard:
            for (const auto& v : u->discard_vars)
              if (!bound.count(v)) out.insert(v);
            go(u->a, bound);
            break;
          case TK::Let: {
            go(u->a, bound);
            auto b2 = bound;
            for (const auto& v : pattern_vars(u->pat)) b2.insert(v);
            go(u->b, std::move(b2));
            break;
          }
        }
      };
  go(t, {});
  return out;
}

std::set<std::string> free_vars(const FormulaPtr& f) {
  std::set<std::string> out;
  std::function<void(const FormulaPtr&, std::set<std::string>)> go =
      [&](const FormulaPtr& g, std::set<std::string> bound) {
        if (!g) return;
        auto add_term = [&](const TermPtr& t) {
          for (const auto& v : free_vars(t))
            if (!bound.count(v)) out.insert(v);
        };
        switch (g->kind) {
          case FK::Atom:
          case FK::One:
            break;
          case FK::Edge:
            for (const auto& arg : g->args) {
              add_term(arg.term);
              go(arg.annot, bound);
            }
            break;
          case FK::Tensor:
          case FK::Lolli:
            go(g->a, bound);
            go(g->b, bound);
            break;
          case FK::Bang:
            go(g->a, bound);
            break;
          case FK::Forall:
          case FK::Ex: {
            go(g->a, bound);
            auto b2 = bound;
            b2.insert(g->name);
            go(g->b, std::move(b2));
            break;
          }
          case FK::Loc:
            go(g->a, bound);
            add_term(g->naming);
            break;
        }
      };
  go(f, {});
  return out;
}

bool is_closed(const FormulaPtr& f) { return free_vars(f).empty(); }

std::size_t count_free_uses(const TermPtr& t, const std::string& name) {
  if (!t) return 0;
  switch (t->kind) {
    case TK::Var:
    case TK::Copy:
      return t->var == name ? 1 : 0;
    case TK::Nil:
      return 0;
    case TK::Tensor:
    case TK::App:
    case TK::LinApp:
      return count_free_uses(t->a, name) + count_free_uses(t->b, name);
    case TK::Eps:
      return count_free_uses(t->a, name) + (t->loc == name ? 1 : 0) +
             count_free_uses(t->b, name);
    case TK::Lam:
    case TK::LinLam:
      return t->var == name ? 0 : count_free_uses(t->a, name);
    case TK::Bang:
      return count_free_uses(t->a, name);
    case TK::Discard: {
      std::size_t n = count_free_uses(t->a, name);
      for (const auto& v : t->discard_vars)
        if (v == name) ++n;
      return n;
    }
    case TK::Let: {
      std::size_t n = count_free_uses(t->a, name);
      auto pv = pattern_vars(t->pat);
      if (std::find(pv.begin(), pv.end(), name) == pv.end())
        n += count_free_uses(t->b, name);
      return n;
    }
  }
  return 0;
}

bool is_nonlinear_shape(const TermPtr& t) {
  return t && (t->kind == TK::Var || t->kind == TK::Bang);
}

namespace {

using Renaming = std::vector<std::pair<std::string, std::string>>;

bool var_eq(const Renaming& env, const std::string& x, const std::string& y) {
  for (auto it = env.rbegin(); it != env.rend(); ++it) {
    if (it->first == x || it->second == y) return it->first == x && it->second == y;
  }
  return x == y;
}

bool pat_pairs(const PatternPtr& p, const PatternPtr& q, Renaming& pairs) {
  if (!p || !q || p->kind != q->kind) return false;
  switch (p->kind) {
    case PK::Var:
    case PK::Copy:
      pairs.emplace_back(p->name, q->name);
      return true;
    case PK::Nil:
      return true;
    case PK::Tensor:
      return pat_pairs(p->a, q->a, pairs) && pat_pairs(p->b, q->b, pairs);
    case PK::Eps:
      pairs.emplace_back(p->name, q->name);
      pairs.emplace_back(p->loc, q->loc);
      return pat_pairs(p->a, q->a, pairs);
    case PK::Bang:
      return pat_pairs(p->a, q->a, pairs);
  }
  return false;
}

bool term_alpha(const TermPtr& a, const TermPtr& b, Renaming& env);
bool formula_alpha(const FormulaPtr& a, const FormulaPtr& b, Renaming& env);

bool term_alpha(const TermPtr& a, const TermPtr& b, Renaming& env) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TK::Var:
    case TK::Copy:
      return var_eq(env, a->var, b->var);
    case TK::Nil:
      return true;
    case TK::Tensor:
    case TK::App:
    case TK::LinApp:
      return term_alpha(a->a, b->a, env) && term_alpha(a->b, b->b, env);
    case TK::Eps:
      return var_eq(env, a->loc, b->loc) && term_alpha(a->a, b->a, env) &&
             term_alpha(a->b, b->b, env);
    case TK::Lam:
    case TK::LinLam: {
      env.emplace_back(a->var, b->var);
      bool ok = term_alpha(a->a, b->a, env);
      env.pop_back();
      return ok;
    }
    case TK::Bang:
      return term_alpha(a->a, b->a, env);
    case TK::Discard: {
      if (a->discard_vars.size() != b->discard_vars.size()) return false;
      for (std::size_t i = 0; i < a->discard_vars.size(); ++i)
        if (!var_eq(env, a->discard_vars[i], b->discard_vars[i])) return false;
      return term_alpha(a->a, b->a, env);
    }
    case TK::Let: {
      if (!term_alpha(a->a, b->a, env)) return false;
      Renaming pairs;
      if (!pat_pairs(a->pat, b->pat, pairs)) return false;
      std::size_t base = env.size();
      env.insert(env.end(), pairs.begin(), pairs.end());
      bool ok = term_alpha(a->b, b->b, env);
      env.resize(base);
      return ok;
    }
  }
  return false;
}

bool formula_alpha(const FormulaPtr& a, const FormulaPtr& b, Renaming& env) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case FK::Atom:
      return a->name == b->name;
    case FK::Edge: {
      if (a->name != b->name || a->args.size() != b->args.size()) return false;
      for (std::size_t i = 0; i < a->args.size(); ++i) {
        if (!term_alpha(a->args[i].term, b->args[i].term, env)) return false;
        const auto& an = a->args[i].annot;
        const auto& bn = b->args[i].annot;
        if (!an != !bn) return false;
        if (an && !formula_alpha(an, bn, env)) return false;
      }
      return true;
    }
    case FK::One:
      return true;
    case FK::Tensor:
    case FK::Lolli:
      return formula_alpha(a->a, b->a, env) && formula_alpha(a->b, b->b, env);
    case FK::Bang:
      return formula_alpha(a->a, b->a, env);
    case FK::Forall:
    case FK::Ex: {
      if (!formula_alpha(a->a, b->a, env)) return false;
      env.emplace_back(a->name, b->name);
      bool ok = formula_alpha(a->b, b->b, env);
      env.pop_back();
      return ok;
    }
    case FK::Loc:
      return formula_alpha(a->a, b->a, env) && term_alpha(a->naming, b->naming, env);
  }
  return false;
}

}  // namespace

bool alpha_eq(const TermPtr& a, const TermPtr& b) {
  Renaming env;
  return term_alpha(a, b, env);
}

bool alpha_eq(const FormulaPtr& a, const FormulaPtr& b) {
  Renaming env;
  return formula_alpha(a, b, env);
}

std::string NameGen::fresh(const std::string& hint) {
  std::string base = hint.empty() ? std::string("v") : hint;
  if (!taken.count(base)) {
    taken.insert(base);
    return base;
  }
  int& c = counters[base];
  if (c < 2) c = 2;
  for (;; ++c) {
    std::string cand = base + "_" + std::to_string(c);
    if (!taken.count(cand)) {
      taken.insert(cand);
      ++c;
      return cand;
    }
  }
}

namespace {

std::string avoid_fresh(const std::string& hint, const std::set<std::string>& avoid) {
  if (!avoid.count(hint)) return hint;
  for (int i = 2;; ++i) {
    std::string cand = hint + "_" + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}

using Subst = std::map<std::string, TermPtr>;

std::set<std::string> images_fv(const Subst& sub) {
  std::set<std::string> out;
  for (const auto& [k, v] : sub) {
    auto fv = free_vars(v);
    out.insert(fv.begin(), fv.end());
  }
  return out;
}

std::string subst_name_slot(const std::string& name, const Subst& sub, const char* slot) {
  auto it = sub.find(name);
  if (it == sub.end()) return name;
  if (it->second->kind != TK::Var)
    throw DesugarError(std::string("cannot substitute a compound term for ") + slot +
                       " variable '" + name + "'");
  return it->second->var;
}

PatternPtr rename_pattern(const PatternPtr& p, const std::map<std::string, std::string>& ren) {
  if (!p) return p;
  auto nm = [&](const std::string& n) {
    auto it = ren.find(n);
    return it == ren.end() ? n : it->second;
  };
  switch (p->kind) {
    case PK::Var:
      return p_var(nm(p->name));
    case PK::Copy:
      return p_copy(nm(p->name));
    case PK::Nil:
      return p;
    case PK::Tensor:
      return p_tensor(rename_pattern(p->a, ren), rename_pattern(p->b, ren));
    case PK::Eps:
      return p_eps(nm(p->name), nm(p->loc), rename_pattern(p->a, ren));
    case PK::Bang:
      return p_bang(rename_pattern(p->a, ren));
  }
  return p;
}

TermPtr subst_term(const TermPtr& t, const Subst& sub);
FormulaPtr subst_formula(const FormulaPtr& f, const Subst& sub);

// Renames the binders in `binders` apart from the substitution images, then
// applies `sub` under them. `body` is rewritten via a variable renaming first.
TermPtr subst_under(const std::vector<std::string>& binders, const TermPtr& body,
                    Subst sub, std::vector<std::string>& out_binders) {
  for (const auto& x : binders) sub.erase(x);
  out_binders = binders;
  TermPtr cur = body;
  if (!sub.empty()) {
    std::set<std::string> img = images_fv(sub);
    std::set<std::string> avoid = img;
    for (const auto& [k, v] : sub) avoid.insert(k);
    auto fv = free_vars(body);
    avoid.insert(fv.begin(), fv.end());
    avoid.insert(out_binders.begin(), out_binders.end());
    Subst ren;
    for (auto& x : out_binders) {
      if (img.count(x)) {
        std::string nx = avoid_fresh(x, avoid);
        avoid.insert(nx);
        ren[x] = t_var(nx);
        x = nx;
      }
    }
    if (!ren.empty()) cur = subst_term(cur, ren);
  }
  return subst_term(cur, sub);
}

TermPtr subst_term(const TermPtr& t, const Subst& sub) {
  if (!t || sub.empty()) return t;
  switch (t->kind) {
    case TK::Var: {
      auto it = sub.find(t->var);
      return it == sub.end() ? t : it->second;
    }
    case TK::Nil:
      return t;
    case TK::Tensor:
      return t_tensor(subst_term(t->a, sub), subst_term(t->b, sub));
    case TK::App:
      return t_app(subst_term(t->a, sub), subst_term(t->b, sub));
    case TK::LinApp:
      return t_linapp(subst_term(t->a, sub), subst_term(t->b, sub));
    case TK::Eps:
      return t_eps(subst_term(t->a, sub), subst_name_slot(t->loc, sub, "location"),
                   subst_term(t->b, sub));
    case TK::Lam:
    case TK::LinLam: {
      std::vector<std::string> bs;
      TermPtr body = subst_under({t->var}, t->a, sub, bs);
      return t->kind == TK::Lam ? t_lam(bs[0], body) : t_llam(bs[0], body);
    }
    case TK::Bang:
      return t_bang(subst_term(t->a, sub));
    case TK::Discard: {
      std::vector<std::string> vars;
      vars.reserve(t->discard_vars.size());
      for (const auto& v : t->discard_vars)
        vars.push_back(subst_name_slot(v, sub, "discarded"));
      return t_discard(std::move(vars), subst_term(t->a, sub));
    }
    case TK::Copy:
      return t_copy(subst_name_slot(t->var, sub, "copied"));
    case TK::Let: {
      TermPtr bound = subst_term(t->a, sub);
      auto pv = pattern_vars(t->pat);
      std::vector<std::string> npv;
      TermPtr body = subst_under(pv, t->b, sub, npv);
      PatternPtr pat = t->pat;
      std::map<std::string, std::string> ren;
      for (std::size_t i = 0; i < pv.size(); ++i)
        if (pv[i] != npv[i]) ren[pv[i]] = npv[i];
      if (!ren.empty()) pat = rename_pattern(pat, ren);
      return t_let(pat, bound, body);
    }
  }
  return t;
}

FormulaPtr subst_formula(const FormulaPtr& f, const Subst& sub) {
  if (!f || sub.empty()) return f;
  switch (f->kind) {
    case FK::Atom:
    case FK::One:
      return f;
    case FK::Edge: {
      std::vector<Formula::EdgeArg> args;
      args.reserve(f->args.size());
      for (const auto& arg : f->args)
        args.push_back({subst_term(arg.term, sub), subst_formula(arg.annot, sub)});
      return f_edge(f->name, std::move(args));
    }
    case FK::Tensor:
      return f_tensor(subst_formula(f->a, sub), subst_formula(f->b, sub));
    case FK::Lolli:
      return f_lolli(subst_formula(f->a, sub), subst_formula(f->b, sub));
    case FK::Bang:
      return f_bang(subst_formula(f->a, sub));
    case FK::Forall:
    case FK::Ex: {
      FormulaPtr dom = subst_formula(f->a, sub);
      Subst inner = sub;
      inner.erase(f->name);
      std::string binder = f->name;
      FormulaPtr body = f->b;
      if (!inner.empty()) {
        std::set<std::string> img = images_fv(inner);
        if (img.count(binder)) {
          std::set<std::string> avoid = img;
          auto fv = free_vars(body);
          avoid.insert(fv.begin(), fv.end());
          for (const auto& [k, v] : inner) avoid.insert(k);
          std::string nb = avoid_fresh(binder, avoid);
          body = subst_formula(body, {{binder, t_var(nb)}});
          binder = nb;
        }
        body = subst_formula(body, inner);
      }
      return f->kind == FK::Forall ? f_forall(binder, dom, body) : f_ex(binder, dom, body);
    }
    case FK::Loc:
      return f_loc(subst_formula(f->a, sub), subst_term(f->naming, sub));
  }
  return f;
}

}  // namespace

TermPtr substitute(const TermPtr& t, const std::map<std::string, TermPtr>& sub) {
  return subst_term(t, sub);
}

FormulaPtr substitute(const FormulaPtr& f, const std::map<std::string, TermPtr>& sub) {
  return subst_formula(f, sub);
}

TermPtr substitute(const TermPtr& t, const std::string& var, const TermPtr& image) {
  return subst_term(t, {{var, image}});
}

FormulaPtr substitute(const FormulaPtr& f, const std::string& var, const TermPtr& image) {
  return subst_formula(f, {{var, image}});
}

namespace {

// `replicable` marks bindings whose image is a non-linear term by
// construction: anything matched under a bang, and eps witnesses/locations.
void match_pattern(const PatternPtr& p, const TermPtr& t, bool replicable, Subst& out,
                   std::set<std::string>& repl) {
  if (!p || !t) throw DesugarError("pattern match against missing structure");
  auto bind = [&](const std::string& name, TermPtr img, bool r) {
    if (out.count(name))
      throw DesugarError("pattern binds variable '" + name + "' twice");
    if (r) repl.insert(name);
    out.emplace(name, std::move(img));
  };
  switch (p->kind) {
    case PK::Var:
      bind(p->name, t, replicable);
      return;
    case PK::Nil:
      if (t->kind != TK::Nil) throw DesugarError("pattern 'nil' does not match bound term");
      return;
    case PK::Tensor:
      if (t->kind != TK::Tensor)
        throw DesugarError("tensor pattern does not match bound term");
      match_pattern(p->a, t->a, replicable, out, repl);
      match_pattern(p->b, t->b, replicable, out, repl);
      return;
    case PK::Eps:
      if (t->kind != TK::Eps)
        throw DesugarError("eps pattern does not match bound term");
      bind(p->name, t->a, true);
      bind(p->loc, t_var(t->loc), true);
      match_pattern(p->a, t->b, replicable, out, repl);
      return;
    case PK::Bang:
      if (t->kind != TK::Bang)
        throw DesugarError("bang pattern does not match bound term");
      match_pattern(p->a, t->a, true, out, repl);
      return;
    case PK::Copy:
      if (t->kind != TK::Copy)
        throw DesugarError("copy pattern does not match bound term");
      bind(p->name, t_var(t->var), true);
      return;
  }
}

}  // namespace

TermPtr desugar_let(const PatternPtr& pat, const TermPtr& bound, const TermPtr& body) {
  Subst bindings;
  std::set<std::string> replicable;
  match_pattern(pat, bound, false, bindings, replicable);
  for (const auto& [name, img] : bindings) {
    if (!replicable.count(name) && !is_nonlinear_shape(img) &&
        count_free_uses(body, name) > 1)
      throw DesugarError("variable '" + name +
                         "' would duplicate a linear term in the let body");
  }
  return subst_term(body, bindings);
}

const FormulaPtr* ctx_lookup(const Context& c, const std::string& name) {
  for (const auto& e : c)
    if (e.name == name) return &e.type;
  return nullptr;
}

bool ctx_has(const Context& c, const std::string& name) {
  return ctx_lookup(c, name) != nullptr;
}

Context ctx_remove(const Context& c, const std::string& name) {
  Context out;
  bool removed = false;
  for (const auto& e : c) {
    if (!removed && e.name == name) {
      removed = true;
      continue;
    }
    out.push_back(e);
  }
  return out;
}

std::vector<std::string> sorted_unique(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::set<std::string> free_nominal_vars(const Context& delta) {
  std::set<std::string> out;
  for (const auto& e : delta) {
    if (e.type && e.type->kind == FK::Loc) {
      auto fv = free_vars(e.type->naming);
      out.insert(fv.begin(), fv.end());
    }
  }
  return out;
}

bool is_node_type(const FormulaPtr& f) {
  return f && f->kind == FK::Bang && f->a && f->a->kind == FK::Atom;
}

bool is_graph_formula(const FormulaPtr& f) {
  if (!f) return false;
  switch (f->kind) {
    case FK::One:
      return true;
    case FK::Edge:
      for (const auto& arg : f->args)
        if (!is_nonlinear_shape(arg.term)) return false;
      return true;
    case FK::Tensor:
      return is_graph_formula(f->a) && is_graph_formula(f->b);
    case FK::Forall:
    case FK::Ex:
      return is_node_type(f->a) && is_graph_formula(f->b);
    case FK::Loc:
      return is_node_type(f->a) && is_nonlinear_shape(f->naming);
    case FK::Atom:
    case FK::Lolli:
    case FK::Bang:
      return false;
  }
  return false;
}

std::optional<NormalForm> normal_form(const FormulaPtr& f) {
  if (!f) return std::nullopt;
  NormalForm nf;
  FormulaPtr cur = f;
  while (cur->kind == FK::Ex) {
    if (!is_node_type(cur->a)) return std::nullopt;
    nf.prefix.emplace_back(cur->name, cur->a);
    cur = cur->b;
  }
  std::function<bool(const FormulaPtr&)> flat = [&](const FormulaPtr& g) -> bool {
    if (g->kind == FK::Tensor) return flat(g->a) && flat(g->b);
    if (g->kind == FK::Edge) {
      for (const auto& arg : g->args)
        if (!arg.term || arg.term->kind != TK::Var) return false;
      nf.factors.push_back(g);
      return true;
    }
    return false;
  };
  if (cur->kind != FK::One && !flat(cur)) return std::nullopt;
  nf.closed = free_vars(f).empty();
  return nf;
}

}  // namespace hillgts
