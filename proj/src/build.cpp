#include "hillgts/build.hpp"

#include <algorithm>

namespace hillgts {

namespace {
using FK = Formula::Kind;

Sequent mk_seq(Context gamma, Context delta, TermPtr subject, FormulaPtr goal) {
  Sequent s;
  auto sigma = infer_sigma(delta);
  s.sigma.assign(sigma.begin(), sigma.end());
  s.gamma = std::move(gamma);
  s.delta = std::move(delta);
  s.subject = std::move(subject);
  s.goal = std::move(goal);
  return s;
}

const Sequent& conc(const ProofPtr& p, const char* who) {
  if (!p) throw BuildError(std::string(who) + ": missing premise");
  return p->conclusion;
}

const FormulaPtr& delta_type(const Sequent& s, const std::string& name,
                             const char* who) {
  const FormulaPtr* t = ctx_lookup(s.delta, name);
  if (!t)
    throw BuildError(std::string(who) + ": no linear hypothesis '" + name + "'");
  return *t;
}

const FormulaPtr& gamma_type(const Sequent& s, const std::string& name,
                             const char* who) {
  const FormulaPtr* t = ctx_lookup(s.gamma, name);
  if (!t)
    throw BuildError(std::string(who) + ": no non-linear hypothesis '" + name + "'");
  return *t;
}

Context ctx_concat(const Context& a, const Context& b, const char* who) {
  Context out = a;
  for (const auto& e : b) {
    if (ctx_has(out, e.name))
      throw BuildError(std::string(who) + ": contexts both declare '" + e.name + "'");
    out.push_back(e);
  }
  return out;
}

bool gamma_eq(const Sequent& a, const Sequent& b) {
  if (a.gamma.size() != b.gamma.size()) return false;
  for (const auto& e : a.gamma) {
    const FormulaPtr* t = ctx_lookup(b.gamma, e.name);
    if (!t || !alpha_eq(*t, e.type)) return false;
  }
  return true;
}

void require_same_gamma(const Sequent& a, const Sequent& b, const char* who) {
  if (!gamma_eq(a, b))
    throw BuildError(std::string(who) + ": premises have different non-linear contexts");
}

}  // namespace

ProofPtr lid(Context gamma, const std::string& u, FormulaPtr alpha) {
  if (!is_atomic_formula(alpha)) throw BuildError("lid: goal must be atomic");
  Context delta{{u, alpha}};
  return proof(RuleTag::LId,
               mk_seq(std::move(gamma), std::move(delta), t_var(u), std::move(alpha)));
}

ProofPtr uid(Context gamma, const std::string& x) {
  const FormulaPtr* t = ctx_lookup(gamma, x);
  if (!t) throw BuildError("uid: no non-linear hypothesis '" + x + "'");
  FormulaPtr goal = *t;
  return proof(RuleTag::UId, mk_seq(std::move(gamma), {}, t_var(x), std::move(goal)));
}

ProofPtr one_r(Context gamma) {
  return proof(RuleTag::OneR, mk_seq(std::move(gamma), {}, t_nil(), f_one()));
}

ProofPtr one_l(ProofPtr p, const std::string& u) {
  const Sequent& s = conc(p, "one_l");
  Context delta = s.delta;
  if (ctx_has(delta, u)) throw BuildError("one_l: '" + u + "' already in use");
  delta.push_back({u, f_one()});
  TermPtr subj = t_let(p_nil(), t_var(u), s.subject);
  return proof(RuleTag::OneL, mk_seq(s.gamma, std::move(delta), subj, s.goal),
               {std::move(p)});
}

ProofPtr tens_r(ProofPtr left, ProofPtr right) {
  const Sequent& l = conc(left, "tens_r");
  const Sequent& r = conc(right, "tens_r");
  require_same_gamma(l, r, "tens_r");
  Context delta = ctx_concat(l.delta, r.delta, "tens_r");
  TermPtr subj = t_tensor(l.subject, r.subject);
  FormulaPtr goal = f_tensor(l.goal, r.goal);
  return proof(RuleTag::TensR, mk_seq(l.gamma, std::move(delta), subj, goal),
               {std::move(left), std::move(right)});
}

ProofPtr tens_l(ProofPtr p, const std::string& u, const std::string& v,
                const std::string& w) {
  const Sequent& s = conc(p, "tens_l");
  FormulaPtr a = delta_type(s, u, "tens_l");
  FormulaPtr b = delta_type(s, v, "tens_l");
  Context delta = ctx_remove(ctx_remove(s.delta, u), v);
  if (ctx_has(delta, w) || ctx_has(s.gamma, w))
    throw BuildError("tens_l: '" + w + "' already in use");
  delta.push_back({w, f_tensor(a, b)});
  TermPtr subj = t_let(p_tensor(p_var(u), p_var(v)), t_var(w), s.subject);
  return proof(RuleTag::TensL, mk_seq(s.gamma, std::move(delta), subj, s.goal),
               {std::move(p)});
}

ProofPtr lolli_r(ProofPtr p, const std::string& u) {
  const Sequent& s = conc(p, "lolli_r");
  FormulaPtr a = delta_type(s, u, "lolli_r");
  Context delta = ctx_remove(s.delta, u);
  TermPtr subj = t_llam(u, s.subject);
  FormulaPtr goal = f_lolli(a, s.goal);
  return proof(RuleTag::LolliR, mk_seq(s.gamma, std::move(delta), subj, goal),
               {std::move(p)});
}

ProofPtr lolli_l(ProofPtr arg, ProofPtr rest, const std::string& u,
                 const std::string& v) {
  const Sequent& a = conc(arg, "lolli_l");
  const Sequent& r = conc(rest, "lolli_l");
  require_same_gamma(a, r, "lolli_l");
  FormulaPtr b = delta_type(r, u, "lolli_l");
  Context delta = ctx_concat(a.delta, ctx_remove(r.delta, u), "lolli_l");
  if (ctx_has(delta, v) || ctx_has(a.gamma, v))
    throw BuildError("lolli_l: '" + v + "' already in use");
  delta.push_back({v, f_lolli(a.goal, b)});
  TermPtr subj = t_let(p_var(u), t_linapp(t_var(v), a.subject), r.subject);
  return proof(RuleTag::LolliL, mk_seq(r.gamma, std::move(delta), subj, r.goal),
               {std::move(arg), std::move(rest)});
}

ProofPtr all_r(ProofPtr p, const std::string& x) {
  const Sequent& s = conc(p, "all_r");
  FormulaPtr b = gamma_type(s, x, "all_r");
  Context gamma = ctx_remove(s.gamma, x);
  if (std::find(s.sigma.begin(), s.sigma.end(), x) != s.sigma.end())
    throw BuildError("all_r: '" + x + "' occurs in a naming term");
  TermPtr subj = t_lam(x, s.subject);
  FormulaPtr goal = f_forall(x, b, s.goal);
  return proof(RuleTag::AllR, mk_seq(std::move(gamma), s.delta, subj, goal),
               {std::move(p)});
}

ProofPtr all_l(ProofPtr witness, ProofPtr rest, const std::string& u,
               const std::string& v, FormulaPtr univ) {
  const Sequent& w = conc(witness, "all_l");
  const Sequent& r = conc(rest, "all_l");
  require_same_gamma(w, r, "all_l");
  if (!univ || univ->kind != FK::Forall)
    throw BuildError("all_l: hypothesis must be a universal");
  if (!w.delta.empty())
    throw BuildError("all_l: witness premise must have an empty linear context");
  if (!alpha_eq(w.goal, univ->a))
    throw BuildError("all_l: witness type differs from the quantifier domain");
  FormulaPtr inst = substitute(univ->b, univ->name, w.subject);
  const FormulaPtr& vt = delta_type(r, v, "all_l");
  if (!alpha_eq(vt, inst))
    throw BuildError("all_l: hypothesis '" + v + "' is not the instantiated body");
  Context delta = ctx_remove(r.delta, v);
  if (ctx_has(delta, u) || ctx_has(r.gamma, u))
    throw BuildError("all_l: '" + u + "' already in use");
  delta.push_back({u, std::move(univ)});
  TermPtr subj = t_let(p_var(v), t_app(t_var(u), w.subject), r.subject);
  return proof(RuleTag::AllL, mk_seq(r.gamma, std::move(delta), subj, r.goal),
               {std::move(witness), std::move(rest)});
}

ProofPtr ex_r(ProofPtr witness, ProofPtr identity, ProofPtr main,
              const std::string& x, const std::string& n) {
  const Sequent& w = conc(witness, "ex_r");
  const Sequent& id = conc(identity, "ex_r");
  const Sequent& m = conc(main, "ex_r");
  if (!w.delta.empty() || !id.delta.empty())
    throw BuildError("ex_r: witness and identity premises must have empty linear contexts");
  if (!id.goal || id.goal->kind != FK::Lolli || !alpha_eq(id.goal->a, id.goal->b))
    throw BuildError("ex_r: identity premise must prove a -o a");
  const FormulaPtr* xt = ctx_lookup(id.gamma, x);
  if (!xt || !alpha_eq(*xt, w.goal))
    throw BuildError("ex_r: identity premise must hypothesise '" + x +
                     "' at the witness type");
  Context gamma = ctx_concat(w.gamma, ctx_remove(id.gamma, x), "ex_r");
  if (!gamma_eq(m, mk_seq(gamma, {}, nullptr, f_one())))
    throw BuildError("ex_r: main premise non-linear context does not match the split");
  const TermPtr& d = w.subject;
  if (!is_nonlinear_shape(d))
    throw BuildError("ex_r: witness must be a variable or a banged term");
  FormulaPtr alpha = id.goal->a;
  if (!alpha_eq(m.goal, substitute(alpha, x, d)))
    throw BuildError("ex_r: main premise goal is not the instantiated body");
  Context delta = m.delta;
  if (ctx_has(delta, n) || ctx_has(m.gamma, n))
    throw BuildError("ex_r: '" + n + "' already in use");
  delta.push_back({n, f_loc(w.goal, d)});
  TermPtr subj = t_eps(d, n, m.subject);
  FormulaPtr goal = f_ex(x, w.goal, alpha);
  return proof(RuleTag::ExR, mk_seq(m.gamma, std::move(delta), subj, goal),
               {std::move(witness), std::move(identity), std::move(main)});
}

ProofPtr ex_l(ProofPtr p, const std::string& u, const std::string& z,
              const std::string& n, const std::string& v) {
  const Sequent& s = conc(p, "ex_l");
  FormulaPtr beta = gamma_type(s, z, "ex_l");
  const FormulaPtr& lt = delta_type(s, n, "ex_l");
  if (lt->kind != FK::Loc || !alpha_eq(lt->a, beta) ||
      lt->naming->kind != Term::Kind::Var || lt->naming->var != z)
    throw BuildError("ex_l: '" + n + "' must be a location at '" + z + "'");
  FormulaPtr body = delta_type(s, v, "ex_l");
  Context gamma = ctx_remove(s.gamma, z);
  Context delta = ctx_remove(ctx_remove(s.delta, n), v);
  if (ctx_has(delta, u) || ctx_has(gamma, u))
    throw BuildError("ex_l: '" + u + "' already in use");
  delta.push_back({u, f_ex(z, beta, body)});
  TermPtr subj = t_let(p_eps(z, n, p_var(v)), t_var(u), s.subject);
  return proof(RuleTag::ExL, mk_seq(std::move(gamma), std::move(delta), subj, s.goal),
               {std::move(p)});
}

ProofPtr bang_r(ProofPtr p) {
  const Sequent& s = conc(p, "bang_r");
  if (!s.delta.empty())
    throw BuildError("bang_r: premise must have an empty linear context");
  return proof(RuleTag::BangR,
               mk_seq(s.gamma, {}, t_bang(s.subject), f_bang(s.goal)), {std::move(p)});
}

ProofPtr bang_l(ProofPtr p, const std::string& u, const std::string& x) {
  const Sequent& s = conc(p, "bang_l");
  FormulaPtr a = gamma_type(s, x, "bang_l");
  if (!is_closed(a)) throw BuildError("bang_l: hypothesis type must be closed");
  Context gamma = ctx_remove(s.gamma, x);
  Context delta = s.delta;
  if (ctx_has(delta, u) || ctx_has(gamma, u))
    throw BuildError("bang_l: '" + u + "' already in use");
  delta.push_back({u, f_bang(a)});
  TermPtr subj = t_let(p_bang(p_var(x)), t_var(u), s.subject);
  return proof(RuleTag::BangL, mk_seq(std::move(gamma), std::move(delta), subj, s.goal),
               {std::move(p)});
}

ProofPtr weak(ProofPtr p, Context dropped) {
  const Sequent& s = conc(p, "weak");
  Context gamma = s.gamma;
  std::vector<std::string> names;
  for (const auto& e : dropped) {
    if (ctx_has(gamma, e.name))
      throw BuildError("weak: '" + e.name + "' already in use");
    gamma.push_back(e);
    names.push_back(e.name);
  }
  TermPtr subj = t_discard(std::move(names), s.subject);
  return proof(RuleTag::Weak, mk_seq(std::move(gamma), s.delta, subj, s.goal),
               {std::move(p)});
}

ProofPtr contr(ProofPtr p, const std::string& x, const std::string& u) {
  const Sequent& s = conc(p, "contr");
  const FormulaPtr& xt = gamma_type(s, x, "contr");
  const FormulaPtr& ut = delta_type(s, u, "contr");
  if (!alpha_eq(xt, ut))
    throw BuildError("contr: '" + u + "' is not a copy of '" + x + "'");
  Context delta = ctx_remove(s.delta, u);
  TermPtr subj = t_let(p_var(u), t_copy(x), s.subject);
  return proof(RuleTag::Contr, mk_seq(s.gamma, std::move(delta), subj, s.goal),
               {std::move(p)});
}

ProofPtr cut(ProofPtr left, ProofPtr right, const std::string& u) {
  const Sequent& l = conc(left, "cut");
  const Sequent& r = conc(right, "cut");
  require_same_gamma(l, r, "cut");
  const FormulaPtr& ut = delta_type(r, u, "cut");
  if (!alpha_eq(ut, l.goal))
    throw BuildError("cut: '" + u + "' is not typed by the cut formula");
  Context delta = ctx_concat(l.delta, ctx_remove(r.delta, u), "cut");
  TermPtr subj = t_let(p_var(u), l.subject, r.subject);
  return proof(RuleTag::Cut, mk_seq(r.gamma, std::move(delta), subj, r.goal),
               {std::move(left), std::move(right)});
}

ProofPtr bang_cut(ProofPtr d, ProofPtr m, const std::string& x) {
  const Sequent& ds = conc(d, "bang_cut");
  const Sequent& ms = conc(m, "bang_cut");
  if (!ds.delta.empty())
    throw BuildError("bang_cut: first premise must have an empty linear context");
  if (!is_nonlinear_shape(ds.subject))
    throw BuildError("bang_cut: cut term must be a variable or a banged term");
  const FormulaPtr* xt = ctx_lookup(ms.gamma, x);
  if (!xt || !alpha_eq(*xt, ds.goal))
    throw BuildError("bang_cut: second premise must hypothesise '" + x +
                     "' at the cut type");
  Context gamma = ctx_remove(ms.gamma, x);
  if (!gamma_eq(ds, mk_seq(gamma, {}, nullptr, f_one())))
    throw BuildError("bang_cut: premise non-linear contexts do not match");
  Context delta;
  for (const auto& e : ms.delta)
    delta.push_back({e.name, substitute(e.type, x, ds.subject)});
  TermPtr subj = t_let(p_var(x), ds.subject, ms.subject);
  FormulaPtr goal = substitute(ms.goal, x, ds.subject);
  return proof(RuleTag::BangCut, mk_seq(std::move(gamma), std::move(delta), subj, goal),
               {std::move(d), std::move(m)});
}

ProofPtr id_seq(const Context& gamma, const std::string& u, const FormulaPtr& alpha) {
  if (!alpha) throw BuildError("id_seq: missing formula");
  NameGen gen;
  for (const auto& e : gamma) gen.reserve(e.name);
  gen.reserve(u);
  gen.reserve_all(free_vars(alpha));
  switch (alpha->kind) {
    case FK::Atom:
    case FK::Edge:
      return lid(gamma, u, alpha);
    case FK::One:
      return one_l(one_r(gamma), u);
    case FK::Tensor: {
      std::string a = gen.fresh("p");
      std::string b = gen.fresh("q");
      return tens_l(tens_r(id_seq(gamma, a, alpha->a), id_seq(gamma, b, alpha->b)),
                    a, b, u);
    }
    case FK::Lolli: {
      std::string a = gen.fresh("p");
      std::string r = gen.fresh("q");
      ProofPtr app = lolli_l(id_seq(gamma, a, alpha->a), id_seq(gamma, r, alpha->b),
                             r, u);
      return lolli_r(std::move(app), a);
    }
    case FK::Forall: {
      if (!is_closed(alpha->a))
        throw BuildError("id_seq: quantifier domain must be closed");
      std::string x = alpha->name;
      FormulaPtr body = alpha->b;
      if (ctx_has(gamma, x) || x == u) {
        std::string x2 = gen.fresh(x);
        body = substitute(body, x, t_var(x2));
        x = x2;
      }
      gen.reserve(x);
      Context inner = gamma;
      inner.push_back({x, alpha->a});
      std::string v = gen.fresh("p");
      ProofPtr rest = id_seq(inner, v, body);
      ProofPtr w = uid(inner, x);
      return all_r(all_l(std::move(w), std::move(rest), u, v,
                         f_forall(x, alpha->a, body)),
                   x);
    }
    case FK::Ex: {
      if (!is_closed(alpha->a))
        throw BuildError("id_seq: quantifier domain must be closed");
      std::string x = alpha->name;
      FormulaPtr body = alpha->b;
      if (ctx_has(gamma, x) || x == u) {
        std::string x2 = gen.fresh(x);
        body = substitute(body, x, t_var(x2));
        x = x2;
      }
      gen.reserve(x);
      std::string z = gen.fresh("z");
      std::string n = gen.fresh("n");
      std::string v = gen.fresh("p");
      Context inner = gamma;
      inner.push_back({z, alpha->a});
      FormulaPtr inst = substitute(body, x, t_var(z));
      ProofPtr w = uid(Context{{z, alpha->a}}, z);
      ProofPtr identity = id_proof(ctx_concat(gamma, {{x, alpha->a}}, "id_seq"), body);
      ProofPtr main = id_seq(inner, v, inst);
      ProofPtr packed = ex_r(std::move(w), std::move(identity), std::move(main), x, n);
      return ex_l(std::move(packed), u, z, n, v);
    }
    case FK::Bang: {
      if (!is_closed(alpha->a))
        throw BuildError("id_seq: banged hypothesis type must be closed");
      std::string x = gen.fresh("p");
      Context inner = gamma;
      inner.push_back({x, alpha->a});
      return bang_l(bang_r(uid(inner, x)), u, x);
    }
    case FK::Loc:
      throw BuildError("id_seq: located types have no identity derivation");
  }
  throw BuildError("id_seq: unreachable");
}

ProofPtr id_proof(const Context& gamma, const FormulaPtr& alpha) {
  NameGen gen;
  for (const auto& e : gamma) gen.reserve(e.name);
  gen.reserve_all(free_vars(alpha));
  std::string u = gen.fresh("q");
  return lolli_r(id_seq(gamma, u, alpha), u);
}

}  // namespace hillgts
