#include <functional>
#include <sstream>

#include "hillgts/syntax.hpp"

namespace hillgts {

namespace {

using TK = Term::Kind;
using FK = Formula::Kind;
using PK = Pattern::Kind;

// Precedence levels: 0 binders and arrows, 1 tensor, 2 prefix, 3 atoms.
// A construct is wrapped in parentheses when the context demands a tighter
// level than it provides.

void pr_term(std::ostream& os, const TermPtr& t, int lvl);
void pr_formula(std::ostream& os, const FormulaPtr& f, int lvl);
void pr_pattern(std::ostream& os, const PatternPtr& p, int lvl);

void wrap(std::ostream& os, bool need, const std::function<void()>& body) {
  if (need) os << "(";
  body();
  if (need) os << ")";
}

void pr_term(std::ostream& os, const TermPtr& t, int lvl) {
  if (!t) {
    os << "?";
    return;
  }
  switch (t->kind) {
    case TK::Var:
      os << t->var;
      return;
    case TK::Nil:
      os << "nil";
      return;
    case TK::Copy:
      os << "copy(" << t->var << ")";
      return;
    case TK::Bang:
      os << "!";
      pr_term(os, t->a, 3);
      return;
    case TK::Tensor:
      wrap(os, lvl > 1, [&] {
        pr_term(os, t->a, 2);
        os << " * ";
        pr_term(os, t->b, 1);
      });
      return;
    case TK::App:
      wrap(os, lvl > 2, [&] {
        pr_term(os, t->a, 2);
        os << " ";
        pr_term(os, t->b, 3);
      });
      return;
    case TK::LinApp:
      wrap(os, lvl > 2, [&] {
        pr_term(os, t->a, 2);
        os << " ^ ";
        pr_term(os, t->b, 3);
      });
      return;
    case TK::Lam:
    case TK::LinLam:
      wrap(os, lvl > 0, [&] {
        os << (t->kind == TK::Lam ? "lam " : "llam ") << t->var << ". ";
        pr_term(os, t->a, 0);
      });
      return;
    case TK::Eps:
      wrap(os, lvl > 0, [&] {
        os << "eps(";
        pr_term(os, t->a, 0);
        os << "|" << t->loc << "). ";
        pr_term(os, t->b, 0);
      });
      return;
    case TK::Discard:
      wrap(os, lvl > 0, [&] {
        os << "discard";
        for (const auto& v : t->discard_vars) os << " " << v;
        os << " in ";
        pr_term(os, t->a, 0);
      });
      return;
    case TK::Let:
      wrap(os, lvl > 0, [&] {
        os << "let ";
        pr_pattern(os, t->pat, 0);
        os << " = ";
        pr_term(os, t->a, 0);
        os << " in ";
        pr_term(os, t->b, 0);
      });
      return;
  }
}

void pr_pattern(std::ostream& os, const PatternPtr& p, int lvl) {
  if (!p) {
    os << "?";
    return;
  }
  switch (p->kind) {
    case PK::Var:
      os << p->name;
      return;
    case PK::Nil:
      os << "nil";
      return;
    case PK::Copy:
      os << "copy(" << p->name << ")";
      return;
    case PK::Bang:
      os << "!";
      pr_pattern(os, p->a, 3);
      return;
    case PK::Tensor:
      wrap(os, lvl > 1, [&] {
        pr_pattern(os, p->a, 2);
        os << " * ";
        pr_pattern(os, p->b, 1);
      });
      return;
    case PK::Eps:
      wrap(os, lvl > 0, [&] {
        os << "eps(" << p->name << "|" << p->loc << "). ";
        pr_pattern(os, p->a, 0);
      });
      return;
  }
}

void pr_formula(std::ostream& os, const FormulaPtr& f, int lvl) {
  if (!f) {
    os << "?";
    return;
  }
  switch (f->kind) {
    case FK::Atom:
      os << f->name;
      return;
    case FK::One:
      os << "one";
      return;
    case FK::Edge: {
      os << f->name << "(";
      bool first = true;
      for (const auto& arg : f->args) {
        if (!first) os << ", ";
        first = false;
        pr_term(os, arg.term, 3);
        if (arg.annot) {
          os << " : ";
          pr_formula(os, arg.annot, 2);
        }
      }
      os << ")";
      return;
    }
    case FK::Tensor:
      wrap(os, lvl > 1, [&] {
        pr_formula(os, f->a, 2);
        os << " * ";
        pr_formula(os, f->b, 1);
      });
      return;
    case FK::Lolli:
      wrap(os, lvl > 0, [&] {
        pr_formula(os, f->a, 1);
        os << " -o ";
        pr_formula(os, f->b, 0);
      });
      return;
    case FK::Bang:
      wrap(os, lvl > 2, [&] {
        os << "!";
        pr_formula(os, f->a, 2);
      });
      return;
    case FK::Loc:
      wrap(os, lvl > 2, [&] {
        os << "loc ";
        pr_formula(os, f->a, 2);
        os << " @ ";
        pr_term(os, f->naming, 3);
      });
      return;
    case FK::Forall:
    case FK::Ex:
      wrap(os, lvl > 0, [&] {
        bool univ = f->kind == FK::Forall;
        os << (univ ? "all " : "ex ");
        // Collect a run of same-kind binders, grouping adjacent equal domains.
        std::vector<std::pair<std::string, FormulaPtr>> binders;
        FormulaPtr cur = f;
        while (cur && cur->kind == f->kind) {
          binders.emplace_back(cur->name, cur->a);
          cur = cur->b;
        }
        auto dom_str = [](const FormulaPtr& d) {
          std::ostringstream ds;
          pr_formula(ds, d, 2);
          return ds.str();
        };
        for (std::size_t i = 0; i < binders.size();) {
          std::size_t j = i;
          std::string d0 = dom_str(binders[i].second);
          while (j < binders.size() && dom_str(binders[j].second) == d0) ++j;
          if (i > 0) os << ", ";
          for (std::size_t k = i; k < j; ++k) {
            if (k > i) os << " ";
            os << binders[k].first;
          }
          os << ":";
          pr_formula(os, binders[i].second, 2);
          i = j;
        }
        os << ". ";
        pr_formula(os, cur, 0);
      });
      return;
  }
}

}  // namespace

std::string print_term(const TermPtr& t) {
  std::ostringstream os;
  pr_term(os, t, 0);
  return os.str();
}

std::string print_pattern(const PatternPtr& p) {
  std::ostringstream os;
  pr_pattern(os, p, 0);
  return os.str();
}

std::string print_formula(const FormulaPtr& f) {
  std::ostringstream os;
  pr_formula(os, f, 0);
  return os.str();
}

std::string print_context(const Context& c) {
  if (c.empty()) return ".";
  std::ostringstream os;
  bool first = true;
  for (const auto& e : c) {
    if (!first) os << ", ";
    first = false;
    os << e.name << " :: ";
    pr_formula(os, e.type, 0);
  }
  return os.str();
}

std::string print_sequent(const Sequent& s) {
  std::ostringstream os;
  os << "[";
  bool first = true;
  for (const auto& v : s.sigma) {
    if (!first) os << " ";
    first = false;
    os << v;
  }
  os << "] ; " << print_context(s.gamma) << " ; " << print_context(s.delta) << " |- ";
  if (s.subject)
    os << print_term(s.subject);
  else
    os << "?";
  os << " :: " << print_formula(s.goal);
  return os.str();
}

}  // namespace hillgts
