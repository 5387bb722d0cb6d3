#include "hillgts/prover.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

#include "hillgts/build.hpp"
#include "hillgts/syntax.hpp"

namespace hillgts {

namespace {
using FK = Formula::Kind;
using TK = Term::Kind;

Context restrict_ctx(const Context& g, const std::set<std::string>& keep) {
  Context out;
  for (const auto& e : g)
    if (keep.count(e.name)) out.push_back(e);
  return out;
}

Context without(const Context& g, const std::set<std::string>& drop) {
  Context out;
  for (const auto& e : g)
    if (!drop.count(e.name)) out.push_back(e);
  return out;
}

bool disjoint(const std::set<std::string>& a, const std::set<std::string>& b) {
  for (const auto& x : a)
    if (b.count(x)) return false;
  return true;
}

using Copies = std::map<std::string, int>;

bool has_quantifier(const FormulaPtr& f) {
  if (!f) return false;
  switch (f->kind) {
    case FK::Forall:
    case FK::Ex:
      return true;
    case FK::Tensor:
    case FK::Lolli:
      return has_quantifier(f->a) || has_quantifier(f->b);
    case FK::Bang:
    case FK::Loc:
      return has_quantifier(f->a);
    default:
      return false;
  }
}

// The continuation receives a candidate subproof and either extends it to a
// full derivation or rejects it, sending the search back for alternatives.
using Cont = std::function<bool(const ProofPtr&)>;

struct Searcher {
  ProverOptions opts;
  std::size_t visited = 0;
  bool cutoff = false;
  bool budget = false;
  std::map<const Formula*, std::set<std::string>> supply_cache[2];
  std::map<const Formula*, std::set<std::string>> domain_cache;

  // Tokens that can reach goal position when f starts on the given side:
  // atom labels are matchable by identity leaves, "@domain" markers are the
  // binders a location can be spent on. Quantifier domains are skipped, as
  // witness premises never consume linear hypotheses.
  void collect_supplies(const FormulaPtr& f, bool as_goal,
                        std::set<std::string>& out) {
    if (!f) return;
    switch (f->kind) {
      case FK::Atom:
      case FK::Edge:
        if (as_goal) out.insert(f->name);
        break;
      case FK::One:
      case FK::Loc:
        break;
      case FK::Tensor:
        collect_supplies(f->a, as_goal, out);
        collect_supplies(f->b, as_goal, out);
        break;
      case FK::Lolli:
        collect_supplies(f->a, !as_goal, out);
        collect_supplies(f->b, as_goal, out);
        break;
      case FK::Bang:
        collect_supplies(f->a, as_goal, out);
        break;
      case FK::Forall:
        collect_supplies(f->b, as_goal, out);
        break;
      case FK::Ex:
        if (as_goal) out.insert("@" + print_formula(f->a));
        collect_supplies(f->b, as_goal, out);
        break;
    }
  }

  const std::set<std::string>& supplies(const FormulaPtr& f, bool as_goal) {
    auto& cache = supply_cache[as_goal ? 1 : 0];
    auto it = cache.find(f.get());
    if (it != cache.end()) return it->second;
    std::set<std::string> out;
    collect_supplies(f, as_goal, out);
    return cache.emplace(f.get(), std::move(out)).first->second;
  }

  // Printed forms of the universal domains in f; a non-linear variable of
  // such a type can serve as an instantiation witness.
  void collect_domains(const FormulaPtr& f, std::set<std::string>& out) {
    if (!f) return;
    switch (f->kind) {
      case FK::Forall:
        if (!has_quantifier(f->a)) out.insert(print_formula(f->a));
        collect_domains(f->a, out);
        collect_domains(f->b, out);
        break;
      case FK::Ex:
        collect_domains(f->a, out);
        collect_domains(f->b, out);
        break;
      case FK::Tensor:
      case FK::Lolli:
        collect_domains(f->a, out);
        collect_domains(f->b, out);
        break;
      case FK::Bang:
      case FK::Loc:
        collect_domains(f->a, out);
        break;
      default:
        break;
    }
  }

  const std::set<std::string>& domains(const FormulaPtr& f) {
    auto it = domain_cache.find(f.get());
    if (it != domain_cache.end()) return it->second;
    std::set<std::string> out;
    collect_domains(f, out);
    return domain_cache.emplace(f.get(), std::move(out)).first->second;
  }

  // The token an entry of this type must be matched against to be consumed,
  // or "" when consumption is not token-driven.
  std::string demand_key(const FormulaPtr& ty) {
    if (ty->kind == FK::Atom || ty->kind == FK::Edge) return ty->name;
    if (ty->kind == FK::Loc && !has_quantifier(ty->a))
      return "@" + print_formula(ty->a);
    return "";
  }

  bool key_supplied(const std::string& key, const Context& gamma,
                    const Context& avail, const FormulaPtr& goal,
                    const std::string& self) {
    if (key.empty()) return true;
    if (supplies(goal, true).count(key)) return true;
    for (const auto& g : gamma)
      if (supplies(g.type, false).count(key)) return true;
    for (const auto& e : avail)
      if (e.name != self && supplies(e.type, false).count(key)) return true;
    return false;
  }

  // A rule must arrange consumption of the hypotheses it introduces inside
  // its own premise, so an introduced entry with an unsupplied token makes
  // the attempt pointless.
  bool intro_ok(const Context& gamma, const Context& avail,
                const FormulaPtr& goal,
                std::initializer_list<std::string> names) {
    for (const auto& name : names) {
      const FormulaPtr* ty = ctx_lookup(avail, name);
      if (!ty) return false;
      if (!key_supplied(demand_key(*ty), gamma, avail, goal, name))
        return false;
    }
    return true;
  }

  bool domain_matchable(const FormulaPtr& ty, const Context& gamma,
                        const Context& avail, const FormulaPtr& goal) {
    if (has_quantifier(ty)) return true;
    std::string p = print_formula(ty);
    if (domains(goal).count(p)) return true;
    for (const auto& g : gamma)
      if (domains(g.type).count(p)) return true;
    for (const auto& e : avail)
      if (domains(e.type).count(p)) return true;
    return false;
  }

  // Copying x :: !...!A is useful only if the unfolded A can close a leaf or
  // stand as an instantiation witness somewhere.
  bool copy_useful(const FormulaPtr& ty, const Context& gamma,
                   const Context& avail, const FormulaPtr& goal) {
    FormulaPtr core = ty;
    while (core->kind == FK::Bang) {
      core = core->a;
      if (domain_matchable(core, gamma, avail, goal)) return true;
    }
    if (core->kind != FK::Atom && core->kind != FK::Edge) return true;
    return key_supplied(core->name, gamma, avail, goal, "");
  }

  NameGen names_of(const Context& gamma, const Context& delta,
                   const FormulaPtr& goal) {
    NameGen gen;
    for (const auto& e : gamma) gen.reserve(e.name);
    for (const auto& e : delta) gen.reserve(e.name);
    gen.reserve_all(free_vars(goal));
    return gen;
  }

  // Derives gamma ; . |- d :: beta for the fixed non-linear subject d.
  std::optional<ProofPtr> prove_term(const Context& gamma, const TermPtr& d,
                                     const FormulaPtr& beta) {
    if (!d || !beta) return std::nullopt;
    switch (d->kind) {
      case TK::Var: {
        const FormulaPtr* t = ctx_lookup(gamma, d->var);
        if (!t || !alpha_eq(*t, beta)) return std::nullopt;
        return uid(gamma, d->var);
      }
      case TK::Nil:
        if (beta->kind != FK::One) return std::nullopt;
        return one_r(gamma);
      case TK::Tensor: {
        if (beta->kind != FK::Tensor) return std::nullopt;
        auto l = prove_term(gamma, d->a, beta->a);
        if (!l) return std::nullopt;
        auto r = prove_term(gamma, d->b, beta->b);
        if (!r) return std::nullopt;
        return tens_r(std::move(*l), std::move(*r));
      }
      case TK::Bang: {
        if (beta->kind != FK::Bang) return std::nullopt;
        auto sub = prove_term(gamma, d->a, beta->a);
        if (!sub) return std::nullopt;
        return bang_r(std::move(*sub));
      }
      default:
        return std::nullopt;
    }
  }

  static bool consumed(const ProofPtr& p, const std::string& name) {
    return ctx_has(p->conclusion.delta, name);
  }

  // Hypotheses the subproof left untouched, available to a sibling premise.
  static Context leftover(const Context& avail, const ProofPtr& p) {
    Context out;
    for (const auto& e : avail)
      if (!ctx_has(p->conclusion.delta, e.name)) out.push_back(e);
    return out;
  }

  // Searches for a derivation of gamma ; D |- goal where D is some subset of
  // `avail`; the subproof handed to `k` records in its end statement exactly
  // the hypotheses it consumed. Entries a rule introduces must be consumed
  // within its own premise, which the wrapping continuations enforce.
  bool search(const Context& gamma, const Context& avail,
              const FormulaPtr& goal, int depth, const Copies& copies,
              const Cont& k) {
    if (budget) return false;
    if (++visited > opts.max_visited) {
      budget = true;
      return false;
    }
    if (!goal) return false;

    NameGen gen = names_of(gamma, avail, goal);

    // Hypotheses with an invertible left rule are decomposed on sight; the
    // rule is re-attached underneath whatever derivation comes back.
    for (const auto& e : avail) {
      const FormulaPtr& ty = e.type;
      switch (ty->kind) {
        case FK::One:
          return search(gamma, ctx_remove(avail, e.name), goal, depth, copies,
                        [&](const ProofPtr& p) { return k(one_l(p, e.name)); });
        case FK::Tensor: {
          std::string u = gen.fresh("u"), v = gen.fresh("v");
          Context a2 = ctx_remove(avail, e.name);
          a2.push_back({u, ty->a});
          a2.push_back({v, ty->b});
          if (!intro_ok(gamma, a2, goal, {u, v})) return false;
          return search(gamma, a2, goal, depth, copies,
                        [&](const ProofPtr& p) {
                          if (!consumed(p, u) || !consumed(p, v)) return false;
                          return k(tens_l(p, u, v, e.name));
                        });
        }
        case FK::Bang: {
          // Moving under ! declares the body non-linearly, which needs a
          // closed type; an open banged hypothesis can never be consumed.
          if (!is_closed(ty->a)) return false;
          std::string x = gen.fresh("x");
          Context g2 = gamma;
          g2.push_back({x, ty->a});
          return search(g2, ctx_remove(avail, e.name), goal, depth, copies,
                        [&](const ProofPtr& p) {
                          return k(bang_l(p, e.name, x));
                        });
        }
        case FK::Ex: {
          if (!is_closed(ty->a)) return false;
          std::string z = gen.fresh("z"), n = gen.fresh("n"),
                      v = gen.fresh("v");
          Context g2 = gamma;
          g2.push_back({z, ty->a});
          Context a2 = ctx_remove(avail, e.name);
          a2.push_back({n, f_loc(ty->a, t_var(z))});
          a2.push_back({v, substitute(ty->b, ty->name, t_var(z))});
          if (!intro_ok(g2, a2, goal, {n, v})) return false;
          return search(g2, a2, goal, depth, copies,
                        [&](const ProofPtr& p) {
                          if (!consumed(p, n) || !consumed(p, v)) return false;
                          return k(ex_l(p, e.name, z, n, v));
                        });
        }
        default:
          break;
      }
    }

    // Leaves.
    if (is_atomic_formula(goal)) {
      for (const auto& e : avail)
        if (alpha_eq(e.type, goal) && k(lid(gamma, e.name, goal))) return true;
    }
    if (is_closed(goal)) {
      for (const auto& e : gamma)
        if (alpha_eq(e.type, goal) && k(uid(gamma, e.name))) return true;
    }
    if (goal->kind == FK::One && k(one_r(gamma))) return true;

    // Goal-side rules that commute below everything else.
    if (goal->kind == FK::Lolli) {
      std::string u = gen.fresh("u");
      Context a2 = avail;
      a2.push_back({u, goal->a});
      if (!intro_ok(gamma, a2, goal->b, {u})) return false;
      return search(gamma, a2, goal->b, depth, copies,
                    [&](const ProofPtr& p) {
                      if (!consumed(p, u)) return false;
                      return k(lolli_r(p, u));
                    });
    }
    if (goal->kind == FK::Forall) {
      // An open domain admits no eigenvariable declaration, and the open
      // goal admits no identity leaf, so the statement is unprovable.
      if (!is_closed(goal->a)) return false;
      std::string x = goal->name;
      FormulaPtr body = goal->b;
      if (gen.taken.count(x)) {
        std::string x2 = gen.fresh(x);
        body = substitute(body, x, t_var(x2));
        x = x2;
      } else {
        gen.reserve(x);
      }
      Context g2 = gamma;
      g2.push_back({x, goal->a});
      return search(g2, avail, body, depth, copies,
                    [&](const ProofPtr& p) { return k(all_r(p, x)); });
    }

    if (goal->kind == FK::Bang) {
      if (search(gamma, {}, goal->a, depth, copies,
                 [&](const ProofPtr& p) { return k(bang_r(p)); }))
        return true;
    }

    if (depth <= 0) {
      cutoff = true;
      return false;
    }

    // Tensor goal: the left factor takes what it needs, the right factor
    // takes from what is left.
    if (goal->kind == FK::Tensor) {
      bool hit = search(
          gamma, avail, goal->a, depth - 1, copies, [&](const ProofPtr& l) {
            return search(gamma, leftover(avail, l), goal->b, depth - 1,
                          copies, [&](const ProofPtr& r) {
                            return k(tens_r(l, r));
                          });
          });
      if (hit) return true;
    }

    // Resource-bound goal: spend a matching location, hiding its naming term.
    if (goal->kind == FK::Ex) {
      for (const auto& e : avail) {
        if (e.type->kind != FK::Loc || !alpha_eq(e.type->a, goal->a)) continue;
        const TermPtr& d = e.type->naming;
        auto dfv = free_vars(d);
        std::string x = goal->name;
        FormulaPtr body = goal->b;
        if (gen.taken.count(x) || dfv.count(x)) {
          std::string x2 = gen.fresh(x);
          body = substitute(body, x, t_var(x2));
          x = x2;
        }
        if (!disjoint(dfv, free_vars(body))) continue;
        Context g1 = restrict_ctx(gamma, dfv);
        auto witness = prove_term(g1, d, goal->a);
        if (!witness) continue;
        Context idg = without(gamma, dfv);
        idg.push_back({x, goal->a});
        ProofPtr identity;
        try {
          identity = id_proof(idg, body);
        } catch (const BuildError&) {
          continue;
        }
        bool hit = search(gamma, ctx_remove(avail, e.name),
                          substitute(body, x, d), depth - 1, copies,
                          [&](const ProofPtr& m) {
                            return k(ex_r(*witness, identity, m, x, e.name));
                          });
        if (hit) return true;
      }
    }

    // Implication hypotheses.
    for (const auto& e : avail) {
      if (e.type->kind != FK::Lolli) continue;
      Context rest = ctx_remove(avail, e.name);
      std::string v = gen.fresh("v");
      if (!key_supplied(demand_key(e.type->b), gamma, rest, goal, "")) continue;
      bool hit = search(
          gamma, rest, e.type->a, depth - 1, copies, [&](const ProofPtr& a) {
            Context after = leftover(rest, a);
            after.push_back({v, e.type->b});
            return search(gamma, after, goal, depth - 1, copies,
                          [&](const ProofPtr& r) {
                            if (!consumed(r, v)) return false;
                            return k(lolli_l(a, r, v, e.name));
                          });
          });
      if (hit) return true;
    }

    // Universal hypotheses, instantiated at non-linear variables.
    for (const auto& e : avail) {
      if (e.type->kind != FK::Forall) continue;
      for (const auto& g : gamma) {
        if (!alpha_eq(g.type, e.type->a)) continue;
        FormulaPtr inst = substitute(e.type->b, e.type->name, t_var(g.name));
        std::string v = gen.fresh("v");
        Context a2 = ctx_remove(avail, e.name);
        a2.push_back({v, inst});
        if (!intro_ok(gamma, a2, goal, {v})) continue;
        bool hit = search(gamma, a2, goal, depth - 1, copies,
                          [&](const ProofPtr& r) {
                            if (!consumed(r, v)) return false;
                            return k(all_l(uid(gamma, g.name), r, e.name, v,
                                           e.type));
                          });
        if (hit) return true;
      }
    }

    // Contraction, bounded per hypothesis.
    for (const auto& g : gamma) {
      auto it = copies.find(g.name);
      int used = it == copies.end() ? 0 : it->second;
      if (used >= opts.contraction_limit) continue;
      if (!copy_useful(g.type, gamma, avail, goal)) continue;
      std::string u = gen.fresh("u");
      Context a2 = avail;
      a2.push_back({u, g.type});
      Copies c2 = copies;
      c2[g.name] = used + 1;
      bool hit = search(gamma, a2, goal, depth - 1, c2,
                        [&](const ProofPtr& p) {
                          if (!consumed(p, u)) return false;
                          return k(contr(p, g.name, u));
                        });
      if (hit) return true;
    }

    return false;
  }
};

}  // namespace

ProverResult prove(const Sequent& goal, const ProverOptions& opts) {
  Sequent stmt = goal;
  stmt.subject = nullptr;
  auto viols = sequent_violations(stmt);
  if (!viols.empty())
    throw std::invalid_argument("ill-formed goal: " + viols.front());

  ProverResult res;
  Searcher s;
  s.opts = opts;
  for (const auto& e : stmt.delta) {
    if (s.key_supplied(s.demand_key(e.type), stmt.gamma, stmt.delta,
                       stmt.goal, e.name))
      continue;
    res.exhausted = true;
    return res;
  }
  for (int d = 0; d <= opts.max_depth; ++d) {
    s.cutoff = false;
    ProofPtr found;
    s.search(stmt.gamma, stmt.delta, stmt.goal, d, {},
             [&](const ProofPtr& p) {
               if (p->conclusion.delta.size() != stmt.delta.size())
                 return false;
               found = p;
               return true;
             });
    res.visited = s.visited;
    if (found) {
      res.proof = std::move(found);
      return res;
    }
    if (s.budget) return res;
    if (!s.cutoff) {
      res.exhausted = true;
      return res;
    }
  }
  return res;
}

ProverResult reprove(const ProofTree& tree, const ProverOptions& opts) {
  return prove(tree.conclusion, opts);
}

ProofPtr verify_cut_admissibility(const ProofPtr& tree,
                                  const ProverOptions& opts) {
  if (!tree) return nullptr;
  if (!uses_cut(*tree)) return tree;
  return reprove(*tree, opts).proof;
}

}  // namespace hillgts
