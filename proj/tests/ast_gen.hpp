#pragma once

#include <random>
#include <string>
#include <vector>

#include "hillgts/syntax.hpp"

namespace th {

using namespace hillgts;

// Seeded random ASTs for the round-trip property. Variables are drawn from a
// small pool so binders shadow and collide on purpose.
struct Gen {
  std::mt19937 rng;
  explicit Gen(unsigned seed) : rng(seed) {}

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  std::string var() {
    static const char* pool[] = {"x", "y", "z", "u", "v", "n", "m", "x1", "y2"};
    return pool[pick(9)];
  }

  std::string label() {
    static const char* pool[] = {"A", "B", "C", "E", "a1", "a2"};
    return pool[pick(6)];
  }

  TermPtr term(int depth) {
    if (depth <= 0) {
      switch (pick(3)) {
        case 0: return t_nil();
        case 1: return t_copy(var());
        default: return t_var(var());
      }
    }
    switch (pick(12)) {
      case 0: return t_nil();
      case 1: return t_var(var());
      case 2: return t_tensor(term(depth - 1), term(depth - 1));
      case 3: return t_eps(term(depth - 1), var(), term(depth - 1));
      case 4: return t_lam(var(), term(depth - 1));
      case 5: return t_llam(var(), term(depth - 1));
      case 6: return t_app(term(depth - 1), term(depth - 1));
      case 7: return t_linapp(term(depth - 1), term(depth - 1));
      case 8: return t_bang(term(depth - 1));
      case 9: {
        std::vector<std::string> vs;
        int n = 1 + pick(2);
        for (int i = 0; i < n; ++i) vs.push_back(var() + std::to_string(i));
        return t_discard(vs, term(depth - 1));
      }
      case 10: return t_let(pattern(depth - 1), term(depth - 1), term(depth - 1));
      default: return t_copy(var());
    }
  }

  PatternPtr pattern(int depth) {
    if (depth <= 0) return pick(2) ? p_var(var()) : p_nil();
    switch (pick(6)) {
      case 0: return p_var(var());
      case 1: return p_nil();
      case 2: return p_tensor(pattern(depth - 1), pattern(depth - 1));
      case 3: return p_eps(var(), var(), pattern(depth - 1));
      case 4: return p_bang(pattern(depth - 1));
      default: return p_copy(var());
    }
  }

  FormulaPtr formula(int depth) {
    if (depth <= 0) {
      switch (pick(3)) {
        case 0: return f_one();
        case 1: return f_atom(label());
        default: return f_edge(label(), {{t_var(var()), nullptr}});
      }
    }
    switch (pick(9)) {
      case 0: return f_one();
      case 1: return f_atom(label());
      case 2: {
        std::vector<Formula::EdgeArg> args;
        int n = pick(3);
        for (int i = 0; i < n; ++i) {
          Formula::EdgeArg a{term(std::min(depth - 1, 1)), nullptr};
          if (!is_nonlinear_shape(a.term)) a.term = t_var(var());
          if (pick(3) == 0) a.annot = f_bang(f_atom(label()));
          args.push_back(std::move(a));
        }
        return f_edge(label(), std::move(args));
      }
      case 3: return f_tensor(formula(depth - 1), formula(depth - 1));
      case 4: return f_lolli(formula(depth - 1), formula(depth - 1));
      case 5: return f_bang(formula(depth - 1));
      case 6: return f_forall(var(), f_bang(f_atom(label())), formula(depth - 1));
      case 7: return f_ex(var(), f_bang(f_atom(label())), formula(depth - 1));
      default: return f_loc(f_bang(f_atom(label())), t_var(var()));
    }
  }
};

inline bool structural_eq(const TermPtr& a, const TermPtr& b);
inline bool structural_eq(const FormulaPtr& a, const FormulaPtr& b);

inline bool structural_eq(const PatternPtr& a, const PatternPtr& b) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind || a->name != b->name || a->loc != b->loc) return false;
  return structural_eq(a->a, b->a) && structural_eq(a->b, b->b);
}

inline bool structural_eq(const TermPtr& a, const TermPtr& b) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind || a->var != b->var || a->loc != b->loc ||
      a->discard_vars != b->discard_vars)
    return false;
  if (!structural_eq(a->pat, b->pat)) return false;
  return structural_eq(a->a, b->a) && structural_eq(a->b, b->b);
}

inline bool structural_eq(const FormulaPtr& a, const FormulaPtr& b) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind || a->name != b->name) return false;
  if (a->args.size() != b->args.size()) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i) {
    if (!structural_eq(a->args[i].term, b->args[i].term)) return false;
    if (!structural_eq(a->args[i].annot, b->args[i].annot)) return false;
  }
  if (!structural_eq(a->naming, b->naming)) return false;
  return structural_eq(a->a, b->a) && structural_eq(a->b, b->b);
}

}  // namespace th
