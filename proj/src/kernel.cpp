#include "hillgts/kernel.hpp"

#include <algorithm>
#include <sstream>

namespace hillgts {

namespace {
using TK = Term::Kind;
using FK = Formula::Kind;
using PK = Pattern::Kind;
}  // namespace

const char* rule_name(RuleTag tag) {
  switch (tag) {
    case RuleTag::LId: return "LId";
    case RuleTag::UId: return "UId";
    case RuleTag::ExR: return "ExR";
    case RuleTag::ExL: return "ExL";
    case RuleTag::AllR: return "AllR";
    case RuleTag::AllL: return "AllL";
    case RuleTag::LolliR: return "LolliR";
    case RuleTag::LolliL: return "LolliL";
    case RuleTag::TensR: return "TensR";
    case RuleTag::TensL: return "TensL";
    case RuleTag::OneR: return "OneR";
    case RuleTag::OneL: return "OneL";
    case RuleTag::BangR: return "BangR";
    case RuleTag::BangL: return "BangL";
    case RuleTag::Weak: return "Weak";
    case RuleTag::Contr: return "Contr";
    case RuleTag::Cut: return "Cut";
    case RuleTag::BangCut: return "BangCut";
  }
  return "?";
}

std::optional<RuleTag> rule_from_name(const std::string& name) {
  static const std::map<std::string, RuleTag> table = {
      {"LId", RuleTag::LId},       {"UId", RuleTag::UId},
      {"ExR", RuleTag::ExR},       {"ExL", RuleTag::ExL},
      {"AllR", RuleTag::AllR},     {"AllL", RuleTag::AllL},
      {"LolliR", RuleTag::LolliR}, {"LolliL", RuleTag::LolliL},
      {"TensR", RuleTag::TensR},   {"TensL", RuleTag::TensL},
      {"OneR", RuleTag::OneR},     {"OneL", RuleTag::OneL},
      {"BangR", RuleTag::BangR},   {"BangL", RuleTag::BangL},
      {"Weak", RuleTag::Weak},     {"Contr", RuleTag::Contr},
      {"Cut", RuleTag::Cut},       {"BangCut", RuleTag::BangCut},
  };
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

ProofPtr proof(RuleTag rule, Sequent conclusion, std::vector<ProofPtr> premises) {
  ProofTree t;
  t.rule = rule;
  t.conclusion = std::move(conclusion);
  t.premises = std::move(premises);
  return std::make_shared<ProofTree>(std::move(t));
}

std::string CheckReport::to_text() const {
  if (ok()) return "ok\n";
  std::ostringstream os;
  for (const auto& f : failures)
    os << f.path << ": [" << f.condition << "] " << f.detail << "\n";
  return os.str();
}

bool is_atomic_formula(const FormulaPtr& f) {
  return f && (f->kind == FK::Atom || f->kind == FK::Edge);
}

std::set<std::string> infer_sigma(const Context& delta) {
  std::set<std::string> sigma;
  std::map<std::string, std::string> owner;  // variable -> location name
  for (const auto& e : delta) {
    if (!e.type || e.type->kind != FK::Loc) continue;
    for (const auto& v : free_vars(e.type->naming)) {
      auto [it, fresh] = owner.emplace(v, e.name);
      if (!fresh && it->second != e.name)
        throw SeparationViolation(it->second, e.name, v);
      sigma.insert(v);
    }
  }
  return sigma;
}

namespace {

// Violations of structural formula invariants: edge arguments non-linear,
// edge annotations closed, located types with closed body and non-linear
// naming term.
void formula_shape_violations(const FormulaPtr& f, std::vector<std::string>& out) {
  if (!f) {
    out.push_back("missing formula");
    return;
  }
  switch (f->kind) {
    case FK::Atom:
    case FK::One:
      return;
    case FK::Edge:
      for (const auto& arg : f->args) {
        if (!is_nonlinear_shape(arg.term))
          out.push_back("edge '" + f->name + "' has a compound linear argument");
        if (arg.annot) {
          if (!is_closed(arg.annot))
            out.push_back("edge '" + f->name + "' has an open type annotation");
          formula_shape_violations(arg.annot, out);
        }
      }
      return;
    case FK::Tensor:
    case FK::Lolli:
      formula_shape_violations(f->a, out);
      formula_shape_violations(f->b, out);
      return;
    case FK::Bang:
      formula_shape_violations(f->a, out);
      return;
    case FK::Forall:
    case FK::Ex:
      formula_shape_violations(f->a, out);
      formula_shape_violations(f->b, out);
      return;
    case FK::Loc:
      if (!is_closed(f->a)) out.push_back("located type has an open body");
      if (!is_nonlinear_shape(f->naming))
        out.push_back("located type has a compound linear naming term");
      formula_shape_violations(f->a, out);
      return;
  }
}

bool subset_of(const std::set<std::string>& a, const std::set<std::string>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

std::vector<std::string> sequent_violations(const Sequent& s) {
  std::vector<std::string> out;
  std::set<std::string> names;
  for (const auto& e : s.gamma) {
    if (!names.insert(e.name).second)
      out.push_back("duplicate context variable '" + e.name + "'");
  }
  std::set<std::string> gamma_names = names;
  for (const auto& e : s.delta) {
    if (!names.insert(e.name).second)
      out.push_back("duplicate context variable '" + e.name + "'");
  }

  for (const auto& e : s.gamma) {
    if (!e.type) {
      out.push_back("missing type for '" + e.name + "'");
      continue;
    }
    if (!is_closed(e.type))
      out.push_back("non-linear hypothesis '" + e.name + "' has an open type");
    formula_shape_violations(e.type, out);
  }
  for (const auto& e : s.delta) {
    if (!e.type) {
      out.push_back("missing type for '" + e.name + "'");
      continue;
    }
    if (!subset_of(free_vars(e.type), gamma_names))
      out.push_back("linear hypothesis '" + e.name +
                    "' mentions variables not declared in the non-linear context");
    formula_shape_violations(e.type, out);
  }
  if (!s.goal) {
    out.push_back("missing goal formula");
  } else {
    if (!subset_of(free_vars(s.goal), gamma_names))
      out.push_back("goal mentions variables not declared in the non-linear context");
    formula_shape_violations(s.goal, out);
  }

  auto sigma_sorted = sorted_unique(s.sigma);
  if (sigma_sorted != s.sigma)
    out.push_back("sigma is not sorted and duplicate-free");
  try {
    auto expect = infer_sigma(s.delta);
    std::set<std::string> given(s.sigma.begin(), s.sigma.end());
    if (given != expect) {
      std::ostringstream os;
      os << "sigma {";
      for (const auto& v : given) os << " " << v;
      os << " } does not match the naming-term variables {";
      for (const auto& v : expect) os << " " << v;
      os << " }";
      out.push_back(os.str());
    }
    // Every sigma variable belongs to exactly one naming term and every
    // naming term with free variables is covered (location map totality).
    for (const auto& e : s.delta) {
      if (e.type && e.type->kind == FK::Loc) {
        if (!subset_of(free_vars(e.type->naming), expect))
          out.push_back("naming term of '" + e.name + "' escapes sigma");
      }
    }
  } catch (const SeparationViolation& v) {
    out.push_back(v.what());
  }

  if (s.subject) {
    auto fv = free_vars(s.subject);
    if (!subset_of(fv, names))
      out.push_back("subject term mentions undeclared variables");
    for (const auto& e : s.delta) {
      auto uses = count_free_uses(s.subject, e.name);
      if (uses != 1)
        out.push_back("linear variable '" + e.name + "' is used " +
                      std::to_string(uses) + " times in the subject");
    }
  }
  return out;
}

namespace {

bool perm_eq(const Context& a, const Context& b) {
  if (a.size() != b.size()) return false;
  for (const auto& e : a) {
    const FormulaPtr* t = ctx_lookup(b, e.name);
    if (!t || !alpha_eq(*t, e.type)) return false;
  }
  return true;
}

// whole == p1 + p2 (disjoint union, up to permutation).
bool split_eq(const Context& whole, const Context& p1, const Context& p2) {
  if (p1.size() + p2.size() != whole.size()) return false;
  for (const auto& e : p1)
    if (ctx_has(p2, e.name)) return false;
  for (const auto* part : {&p1, &p2})
    for (const auto& e : *part) {
      const FormulaPtr* t = ctx_lookup(whole, e.name);
      if (!t || !alpha_eq(*t, e.type)) return false;
    }
  return true;
}

Context ctx_add(Context c, const std::string& name, const FormulaPtr& ty) {
  c.push_back({name, ty});
  return c;
}

struct Checker {
  CheckReport report;

  void fail(const std::string& path, std::string condition, std::string detail) {
    report.failures.push_back({path, std::move(condition), std::move(detail)});
  }

  bool need(bool ok, const std::string& path, const char* condition,
            const std::string& detail) {
    if (!ok) fail(path, condition, detail);
    return ok;
  }

  void node(const ProofTree& t, const std::string& path) {
    for (const auto& v : sequent_violations(t.conclusion))
      fail(path, "wellformedness", v);
    rule(t, path);
    for (std::size_t i = 0; i < t.premises.size(); ++i) {
      if (!t.premises[i]) {
        fail(path, "premise-count", "missing premise");
        continue;
      }
      node(*t.premises[i], path + "." + std::to_string(i + 1));
    }
  }

  bool arity(const ProofTree& t, const std::string& path, std::size_t n) {
    if (t.premises.size() != n) {
      fail(path, "premise-count",
           std::string(rule_name(t.rule)) + " expects " + std::to_string(n) +
               " premises, has " + std::to_string(t.premises.size()));
      return false;
    }
    for (const auto& p : t.premises)
      if (!p) return false;
    return true;
  }

  const Sequent& prem(const ProofTree& t, std::size_t i) {
    return t.premises[i]->conclusion;
  }

  bool same_gamma(const std::string& path, const Sequent& c, const Sequent& p,
                  const char* which) {
    return need(perm_eq(c.gamma, p.gamma), path, "gamma-shape",
                std::string("non-linear context of the ") + which +
                    " premise differs from the conclusion's");
  }

  bool goal_is(const std::string& path, const Sequent& p, const FormulaPtr& f,
               const char* what) {
    return need(alpha_eq(p.goal, f), path, "goal-shape",
                std::string("premise goal is not ") + what);
  }

  bool subject_is(const std::string& path, const Sequent& p, const TermPtr& t,
                  const char* what) {
    if (!p.subject || !t)
      return need(false, path, "subject-shape",
                  std::string("missing subject for ") + what);
    return need(alpha_eq(p.subject, t), path, "subject-shape",
                std::string("premise subject is not ") + what);
  }

  // The conclusion subject must be a let with the given pattern shape.
  const Term* let_subject(const ProofTree& t, const std::string& path) {
    const TermPtr& s = t.conclusion.subject;
    if (!s || s->kind != TK::Let) {
      fail(path, "subject-shape",
           std::string(rule_name(t.rule)) + " subject must be a let binding");
      return nullptr;
    }
    return s.get();
  }

  void rule(const ProofTree& t, const std::string& path) {
    const Sequent& c = t.conclusion;
    if (!c.goal || !c.subject) {
      if (!c.subject)
        fail(path, "subject-shape", "derivation sequents must carry subject terms");
      return;
    }
    switch (t.rule) {
      case RuleTag::LId: {
        if (!arity(t, path, 0)) return;
        need(is_atomic_formula(c.goal), path, "atomicity",
             "linear identity requires an atomic goal");
        if (!need(c.delta.size() == 1, path, "delta-shape",
                  "linear identity requires exactly one linear hypothesis"))
          return;
        need(alpha_eq(c.delta[0].type, c.goal), path, "goal-shape",
             "hypothesis type differs from the goal");
        need(c.subject->kind == TK::Var && c.subject->var == c.delta[0].name, path,
             "subject-shape", "subject must be the linear hypothesis variable");
        return;
      }
      case RuleTag::UId: {
        if (!arity(t, path, 0)) return;
        need(c.delta.empty(), path, "delta-shape",
             "non-linear identity requires an empty linear context");
        if (!need(c.subject->kind == TK::Var, path, "subject-shape",
                  "subject must be a variable"))
          return;
        const FormulaPtr* ty = ctx_lookup(c.gamma, c.subject->var);
        if (!need(ty != nullptr, path, "subject-shape",
                  "subject variable '" + c.subject->var +
                      "' is not a non-linear hypothesis"))
          return;
        need(alpha_eq(*ty, c.goal), path, "goal-shape",
             "hypothesis type differs from the goal");
        need(is_closed(c.goal), path, "closedness",
             "non-linear identity requires a closed goal");
        return;
      }
      case RuleTag::OneR: {
        if (!arity(t, path, 0)) return;
        need(c.delta.empty(), path, "delta-shape",
             "unit introduction requires an empty linear context");
        need(c.goal->kind == FK::One, path, "goal-shape", "goal must be the unit");
        need(c.subject->kind == TK::Nil, path, "subject-shape", "subject must be nil");
        return;
      }
      case RuleTag::OneL: {
        if (!arity(t, path, 1)) return;
        const Term* let = let_subject(t, path);
        if (!let) return;
        if (!need(let->pat->kind == PK::Nil && let->a->kind == TK::Var, path,
                  "subject-shape", "subject must be let nil = u in N"))
          return;
        const std::string& u = let->a->var;
        const FormulaPtr* ty = ctx_lookup(c.delta, u);
        if (!need(ty && (*ty)->kind == FK::One, path, "delta-shape",
                  "principal variable '" + u + "' must be a unit hypothesis"))
          return;
        const Sequent& p = prem(t, 0);
        same_gamma(path, c, p, "only");
        need(perm_eq(p.delta, ctx_remove(c.delta, u)), path, "delta-shape",
             "premise must drop exactly the unit hypothesis");
        goal_is(path, p, c.goal, "the conclusion goal");
        subject_is(path, p, let->b, "the let body");
        return;
      }
      case RuleTag::TensR: {
        if (!arity(t, path, 2)) return;
        if (!need(c.subject->kind == TK::Tensor, path, "subject-shape",
                  "subject must be a pair"))
          return;
        if (!need(c.goal->kind == FK::Tensor, path, "goal-shape",
                  "goal must be a tensor"))
          return;
        const Sequent& p1 = prem(t, 0);
        const Sequent& p2 = prem(t, 1);
        same_gamma(path, c, p1, "first");
        same_gamma(path, c, p2, "second");
        goal_is(path, p1, c.goal->a, "the left tensor component");
        goal_is(path, p2, c.goal->b, "the right tensor component");
        subject_is(path, p1, c.subject->a, "the left pair component");
        subject_is(path, p2, c.subject->b, "the right pair component");
        need(split_eq(c.delta, p1.delta, p2.delta), path, "delta-split",
             "premise linear contexts do not split the conclusion's");
        return;
      }
      case RuleTag::TensL: {
        if (!arity(t, path, 1)) return;
        const Term* let = let_subject(t, path);
        if (!let) return;
        bool shape = let->pat->kind == PK::Tensor && let->pat->a &&
                     let->pat->b && let->pat->a->kind == PK::Var &&
                     let->pat->b->kind == PK::Var && let->a->kind == TK::Var;
        if (!need(shape, path, "subject-shape",
                  "subject must be let u * v = w in N"))
          return;
        const std::string& u = let->pat->a->name;
        const std::string& v = let->pat->b->name;
        const std::string& w = let->a->var;
        const FormulaPtr* ty = ctx_lookup(c.delta, w);
        if (!need(ty && (*ty)->kind == FK::Tensor, path, "delta-shape",
                  "principal variable '" + w + "' must be a tensor hypothesis"))
          return;
        const Sequent& p = prem(t, 0);
        same_gamma(path, c, p, "only");
        Context expect = ctx_remove(c.delta, w);
        expect.push_back({u, (*ty)->a});
        expect.push_back({v, (*ty)->b});
        need(perm_eq(p.delta, expect), path, "delta-shape",
             "premise must replace the tensor hypothesis by its components");
        goal_is(path, p, c.goal, "the conclusion goal");
        subject_is(path, p, let->b, "the let body");
        return;
      }
      case RuleTag::LolliR: {
        if (!arity(t, path, 1)) return;
        if (!need(c.subject->kind == TK::LinLam, path, "subject-shape",
                  "subject must be a linear abstraction"))
          return;
        if (!need(c.goal->kind == FK::Lolli, path, "goal-shape",
                  "goal must be a linear implication"))
          return;
        const Sequent& p = prem(t, 0);
        same_gamma(path, c, p, "only");
        need(perm_eq(p.delta, ctx_add(c.delta, c.subject->var, c.goal->a)), path,
             "delta-shape", "premise must add the abstracted hypothesis");
        goal_is(path, p, c.goal->b, "the implication consequent");
        subject_is(path, p, c.subject->a, "the abstraction body");
        return;
      }
      case RuleTag::LolliL: {
        if (!arity(t, path, 2)) return;
        const Term* let = let_subject(t, path);
        if (!let) return;
        bool shape = let->pat->kind == PK::Var && let->a->kind == TK::LinApp &&
                     let->a->a->kind == TK::Var;
        if (!need(shape, path, "subject-shape",
                  "subject must be let u = v ^ M in N"))
          return;
        const std::string& u = let->pat->name;
        const std::string& v = let->a->a->var;
        const FormulaPtr* ty = ctx_lookup(c.delta, v);
        if (!need(ty && (*ty)->kind == FK::Lolli, path, "delta-shape",
                  "principal variable '" + v + "' must be an implication hypothesis"))
          return;
        const Sequent& p1 = prem(t, 0);
        const Sequent& p2 = prem(t, 1);
        same_gamma(path, c, p1, "first");
        same_gamma(path, c, p2, "second");
        goal_is(path, p1, (*ty)->a, "the implication antecedent");
        subject_is(path, p1, let->a->b, "the applied argument");
        goal_is(path, p2, c.goal, "the conclusion goal");
        subject_is(path, p2, let->b, "the let body");
        const FormulaPtr* ub = ctx_lookup(p2.delta, u);
        if (!need(ub && alpha_eq(*ub, (*ty)->b), path, "delta-shape",
                  "second premise must hypothesise the consequent as '" + u + "'"))
          return;
        need(split_eq(ctx_remove(c.delta, v), p1.delta, ctx_remove(p2.delta, u)),
             path, "delta-split",
             "premise linear contexts do not split the conclusion's");
        return;
      }
      case RuleTag::AllR: {
        if (!arity(t, path, 1)) return;
        if (!need(c.goal->kind == FK::Forall, path, "goal-shape",
                  "goal must be a universal"))
          return;
        if (!need(c.subject->kind == TK::Lam && c.subject->var == c.goal->name,
                  path, "subject-shape",
                  "subject must abstract the quantified variable"))
          return;
        const std::string& x = c.goal->name;
        need(std::find(c.sigma.begin(), c.sigma.end(), x) == c.sigma.end(), path,
             "eigenvariable",
             "quantified variable '" + x + "' occurs in a naming term");
        const Sequent& p = prem(t, 0);
        need(perm_eq(p.gamma, ctx_add(c.gamma, x, c.goal->a)), path, "gamma-shape",
             "premise must add the quantified variable to the non-linear context");
        need(perm_eq(p.delta, c.delta), path, "delta-shape",
             "premise linear context differs from the conclusion's");
        need(std::find(p.sigma.begin(), p.sigma.end(), x) == p.sigma.end(), path,
             "eigenvariable",
             "quantified variable '" + x + "' occurs in a premise naming term");
        goal_is(path, p, c.goal->b, "the quantifier body");
        subject_is(path, p, c.subject->a, "the abstraction body");
        return;
      }
      case RuleTag::AllL: {
        if (!arity(t, path, 2)) return;
        const Term* let = let_subject(t, path);
        if (!let) return;
        bool shape = let->pat->kind == PK::Var && let->a->kind == TK::App &&
                     let->a->a->kind == TK::Var;
        if (!need(shape, path, "subject-shape",
                  "subject must be let v = u D in N"))
          return;
        const std::string& v = let->pat->name;
        const std::string& u = let->a->a->var;
        const TermPtr& d = let->a->b;
        need(is_nonlinear_shape(d), path, "nonlinear-term",
             "instantiation witness must be a variable or a banged term");
        const FormulaPtr* ty = ctx_lookup(c.delta, u);
        if (!need(ty && (*ty)->kind == FK::Forall, path, "delta-shape",
                  "principal variable '" + u + "' must be a universal hypothesis"))
          return;
        const Sequent& p1 = prem(t, 0);
        const Sequent& p2 = prem(t, 1);
        same_gamma(path, c, p1, "first");
        same_gamma(path, c, p2, "second");
        need(p1.delta.empty(), path, "delta-shape",
             "witness premise must have an empty linear context");
        goal_is(path, p1, (*ty)->a, "the quantifier domain");
        subject_is(path, p1, d, "the instantiation witness");
        FormulaPtr inst = substitute((*ty)->b, (*ty)->name, d);
        Context expect = ctx_remove(c.delta, u);
        expect.push_back({v, inst});
        need(perm_eq(p2.delta, expect), path, "delta-shape",
             "premise must replace the universal hypothesis by its instance");
        goal_is(path, p2, c.goal, "the conclusion goal");
        subject_is(path, p2, let->b, "the let body");
        return;
      }
      case RuleTag::ExR: {
        if (!arity(t, path, 3)) return;
        if (!need(c.subject->kind == TK::Eps, path, "subject-shape",
                  "subject must be a hiding term"))
          return;
        if (!need(c.goal->kind == FK::Ex, path, "goal-shape",
                  "goal must be a resource-bound quantifier"))
          return;
        const TermPtr& d = c.subject->a;
        const std::string& n = c.subject->loc;
        const std::string& x = c.goal->name;
        const FormulaPtr& beta = c.goal->a;
        const FormulaPtr& alpha = c.goal->b;
        need(is_nonlinear_shape(d), path, "nonlinear-term",
             "hidden witness must be a variable or a banged term");
        auto dfv = free_vars(d);
        need(!dfv.count(x), path, "freshness",
             "the quantified variable occurs in the witness");
        {
          auto afv = free_vars(alpha);
          std::vector<std::string> both;
          std::set_intersection(dfv.begin(), dfv.end(), afv.begin(), afv.end(),
                                std::back_inserter(both));
          need(both.empty(), path, "freshness",
               "witness variables occur in the quantifier body");
        }
        const FormulaPtr* lty = ctx_lookup(c.delta, n);
        bool loc_ok = lty && (*lty)->kind == FK::Loc && alpha_eq((*lty)->a, beta) &&
                      alpha_eq((*lty)->naming, d);
        if (!need(loc_ok, path, "delta-shape",
                  "conclusion must hold the fresh location '" + n +
                      "' at the witness"))
          return;
        const Sequent& w = prem(t, 0);
        const Sequent& id = prem(t, 1);
        const Sequent& m = prem(t, 2);
        need(w.delta.empty(), path, "delta-shape",
             "witness premise must have an empty linear context");
        goal_is(path, w, beta, "the quantifier domain");
        subject_is(path, w, d, "the hidden witness");
        need(id.delta.empty(), path, "delta-shape",
             "identity premise must have an empty linear context");
        goal_is(path, id, f_lolli(alpha, alpha), "an identity implication");
        const FormulaPtr* xty = ctx_lookup(id.gamma, x);
        if (!need(xty && alpha_eq(*xty, beta), path, "gamma-shape",
                  "identity premise must hypothesise the quantified variable"))
          return;
        need(split_eq(c.gamma, w.gamma, ctx_remove(id.gamma, x)), path,
             "gamma-split",
             "witness and identity premises do not split the non-linear context");
        same_gamma(path, c, m, "main");
        need(perm_eq(m.delta, ctx_remove(c.delta, n)), path, "delta-shape",
             "main premise must carry the conclusion's linear context minus the "
             "fresh location");
        goal_is(path, m, substitute(alpha, x, d), "the instantiated body");
        subject_is(path, m, c.subject->b, "the hiding body");
        return;
      }
      case RuleTag::ExL: {
        if (!arity(t, path, 1)) return;
        const Term* let = let_subject(t, path);
        if (!let) return;
        bool shape = let->pat->kind == PK::Eps && let->pat->a &&
                     let->pat->a->kind == PK::Var && let->a->kind == TK::Var;
        if (!need(shape, path, "subject-shape",
                  "subject must be let eps(z|n). v = u in N"))
          return;
        const std::string& z = let->pat->name;
        const std::string& n = let->pat->loc;
        const std::string& v = let->pat->a->name;
        const std::string& u = let->a->var;
        const FormulaPtr* ty = ctx_lookup(c.delta, u);
        if (!need(ty && (*ty)->kind == FK::Ex, path, "delta-shape",
                  "principal variable '" + u +
                      "' must be a resource-bound hypothesis"))
          return;
        const Sequent& p = prem(t, 0);
        need(perm_eq(p.gamma, ctx_add(c.gamma, z, (*ty)->a)), path, "gamma-shape",
             "premise must add the witness variable to the non-linear context");
        Context expect = ctx_remove(c.delta, u);
        expect.push_back({n, f_loc((*ty)->a, t_var(z))});
        expect.push_back({v, substitute((*ty)->b, (*ty)->name, t_var(z))});
        need(perm_eq(p.delta, expect), path, "delta-shape",
             "premise must open the hypothesis into a location and contents");
        goal_is(path, p, c.goal, "the conclusion goal");
        subject_is(path, p, let->b, "the let body");
        return;
      }
      case RuleTag::BangR: {
        if (!arity(t, path, 1)) return;
        need(c.delta.empty(), path, "delta-shape",
             "bang introduction requires an empty linear context");
        if (!need(c.goal->kind == FK::Bang, path, "goal-shape",
                  "goal must be a banged formula"))
          return;
        if (!need(c.subject->kind == TK::Bang, path, "subject-shape",
                  "subject must be a banged term"))
          return;
        const Sequent& p = prem(t, 0);
        same_gamma(path, c, p, "only");
        need(p.delta.empty(), path, "delta-shape",
             "premise must have an empty linear context");
        goal_is(path, p, c.goal->a, "the unbanged goal");
        subject_is(path, p, c.subject->a, "the unbanged subject");
        return;
      }
      case RuleTag::BangL: {
        if (!arity(t, path, 1)) return;
        const Term* let = let_subject(t, path);
        if (!let) return;
        bool shape = let->pat->kind == PK::Bang && let->pat->a &&
                     let->pat->a->kind == PK::Var && let->a->kind == TK::Var;
        if (!need(shape, path, "subject-shape",
                  "subject must be let !x = u in N"))
          return;
        const std::string& x = let->pat->a->name;
        const std::string& u = let->a->var;
        const FormulaPtr* ty = ctx_lookup(c.delta, u);
        if (!need(ty && (*ty)->kind == FK::Bang, path, "delta-shape",
                  "principal variable '" + u + "' must be a banged hypothesis"))
          return;
        need(is_closed((*ty)->a), path, "closedness",
             "dereliction into the non-linear context requires a closed type");
        const Sequent& p = prem(t, 0);
        need(perm_eq(p.gamma, ctx_add(c.gamma, x, (*ty)->a)), path, "gamma-shape",
             "premise must add the unbanged hypothesis to the non-linear context");
        need(perm_eq(p.delta, ctx_remove(c.delta, u)), path, "delta-shape",
             "premise must drop the banged hypothesis");
        goal_is(path, p, c.goal, "the conclusion goal");
        subject_is(path, p, let->b, "the let body");
        return;
      }
      case RuleTag::Weak: {
        if (!arity(t, path, 1)) return;
        if (!need(c.subject->kind == TK::Discard, path, "subject-shape",
                  "subject must be a discard"))
          return;
        const Sequent& p = prem(t, 0);
        Context expect = c.gamma;
        bool all_found = true;
        std::set<std::string> seen;
        for (const auto& g : c.subject->discard_vars) {
          if (!seen.insert(g).second || !ctx_has(expect, g)) {
            all_found = false;
            break;
          }
          expect = ctx_remove(expect, g);
        }
        if (!need(all_found, path, "gamma-shape",
                  "discarded variables must be distinct non-linear hypotheses"))
          return;
        need(perm_eq(p.gamma, expect), path, "gamma-shape",
             "premise must drop exactly the discarded hypotheses");
        need(perm_eq(p.delta, c.delta), path, "delta-shape",
             "premise linear context differs from the conclusion's");
        goal_is(path, p, c.goal, "the conclusion goal");
        subject_is(path, p, c.subject->a, "the discard body");
        return;
      }
      case RuleTag::Contr: {
        if (!arity(t, path, 1)) return;
        const Term* let = let_subject(t, path);
        if (!let) return;
        bool shape = let->pat->kind == PK::Var && let->a->kind == TK::Copy;
        if (!need(shape, path, "subject-shape",
                  "subject must be let u = copy(x) in N"))
          return;
        const std::string& u = let->pat->name;
        const std::string& x = let->a->var;
        const FormulaPtr* ty = ctx_lookup(c.gamma, x);
        if (!need(ty != nullptr, path, "gamma-shape",
                  "copied variable '" + x + "' must be a non-linear hypothesis"))
          return;
        const Sequent& p = prem(t, 0);
        same_gamma(path, c, p, "only");
        need(perm_eq(p.delta, ctx_add(c.delta, u, *ty)), path, "delta-shape",
             "premise must add a linear copy of the hypothesis");
        goal_is(path, p, c.goal, "the conclusion goal");
        subject_is(path, p, let->b, "the let body");
        return;
      }
      case RuleTag::Cut: {
        if (!arity(t, path, 2)) return;
        const Term* let = let_subject(t, path);
        if (!let) return;
        if (!need(let->pat->kind == PK::Var, path, "subject-shape",
                  "subject must be let u = N in M"))
          return;
        const std::string& u = let->pat->name;
        const Sequent& p1 = prem(t, 0);
        const Sequent& p2 = prem(t, 1);
        same_gamma(path, c, p1, "first");
        same_gamma(path, c, p2, "second");
        subject_is(path, p1, let->a, "the cut term");
        const FormulaPtr* ub = ctx_lookup(p2.delta, u);
        if (!need(ub && alpha_eq(*ub, p1.goal), path, "delta-shape",
                  "second premise must hypothesise the cut formula as '" + u + "'"))
          return;
        goal_is(path, p2, c.goal, "the conclusion goal");
        subject_is(path, p2, let->b, "the let body");
        need(split_eq(c.delta, p1.delta, ctx_remove(p2.delta, u)), path,
             "delta-split",
             "premise linear contexts do not split the conclusion's");
        return;
      }
      case RuleTag::BangCut: {
        if (!arity(t, path, 2)) return;
        const Term* let = let_subject(t, path);
        if (!let) return;
        if (!need(let->pat->kind == PK::Var, path, "subject-shape",
                  "subject must be let x = D in M"))
          return;
        const std::string& x = let->pat->name;
        const TermPtr& d = let->a;
        need(is_nonlinear_shape(d), path, "nonlinear-term",
             "cut term must be a variable or a banged term");
        const Sequent& p1 = prem(t, 0);
        const Sequent& p2 = prem(t, 1);
        same_gamma(path, c, p1, "first");
        need(p1.delta.empty(), path, "delta-shape",
             "first premise must have an empty linear context");
        subject_is(path, p1, d, "the cut term");
        need(perm_eq(p2.gamma, ctx_add(c.gamma, x, p1.goal)), path, "gamma-shape",
             "second premise must hypothesise the cut variable");
        subject_is(path, p2, let->b, "the let body");
        Context expect;
        for (const auto& e : p2.delta)
          expect.push_back({e.name, substitute(e.type, x, d)});
        need(perm_eq(c.delta, expect), path, "delta-shape",
             "conclusion linear context must be the premise's with the cut term "
             "substituted");
        need(alpha_eq(c.goal, substitute(p2.goal, x, d)), path, "goal-shape",
             "conclusion goal must be the premise goal with the cut term "
             "substituted");
        return;
      }
    }
  }
};

}  // namespace

CheckReport check(const ProofTree& tree) {
  Checker ch;
  ch.node(tree, "root");
  return std::move(ch.report);
}

CheckReport check(const ProofPtr& tree) {
  if (!tree) {
    CheckReport r;
    r.failures.push_back({"root", "premise-count", "missing derivation"});
    return r;
  }
  return check(*tree);
}

namespace {

void balance_walk(const FormulaPtr& f, bool positive, const FormulaPtr& alpha,
                  int& neg, int& pos) {
  if (!f) return;
  switch (f->kind) {
    case FK::Atom:
    case FK::One:
    case FK::Edge:
      return;
    case FK::Tensor:
      balance_walk(f->a, positive, alpha, neg, pos);
      balance_walk(f->b, positive, alpha, neg, pos);
      return;
    case FK::Lolli:
      balance_walk(f->a, !positive, alpha, neg, pos);
      balance_walk(f->b, positive, alpha, neg, pos);
      return;
    case FK::Bang:
      balance_walk(f->a, positive, alpha, neg, pos);
      return;
    case FK::Forall:
      balance_walk(f->b, positive, alpha, neg, pos);
      return;
    case FK::Ex:
      if (alpha_eq(f->a, alpha)) (positive ? pos : neg) += 1;
      balance_walk(f->b, positive, alpha, neg, pos);
      return;
    case FK::Loc:
      if (alpha_eq(f->a, alpha)) (positive ? pos : neg) += 1;
      return;
  }
}

}  // namespace

std::pair<int, int> location_balance(const Sequent& s, const FormulaPtr& alpha) {
  int neg = 0, pos = 0;
  for (const auto& e : s.gamma) balance_walk(e.type, false, alpha, neg, pos);
  for (const auto& e : s.delta) balance_walk(e.type, false, alpha, neg, pos);
  balance_walk(s.goal, true, alpha, neg, pos);
  return {neg, pos};
}

bool sequents_equal(const Sequent& a, const Sequent& b) {
  if (a.sigma != b.sigma) return false;
  if (!perm_eq(a.gamma, b.gamma) || !perm_eq(a.delta, b.delta)) return false;
  if (!a.subject != !b.subject) return false;
  if (a.subject && !alpha_eq(a.subject, b.subject)) return false;
  return alpha_eq(a.goal, b.goal);
}

std::size_t proof_size(const ProofTree& tree) {
  std::size_t n = 1;
  for (const auto& p : tree.premises)
    if (p) n += proof_size(*p);
  return n;
}

bool uses_cut(const ProofTree& tree) {
  if (tree.rule == RuleTag::Cut || tree.rule == RuleTag::BangCut) return true;
  for (const auto& p : tree.premises)
    if (p && uses_cut(*p)) return true;
  return false;
}

}  // namespace hillgts
