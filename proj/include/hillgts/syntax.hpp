#pragma once

#include <string>

#include "hillgts/ast.hpp"
#include "hillgts/parse_error.hpp"

namespace hillgts {

// Concrete syntax:
//   formulas  one, A, E(x, y : !a1), F * G, F -o G, !F, all x y:T, z:U. F,
//             ex x:T. F, loc F @ D
//   terms     nil, x, M * N, f D, f ^ M, !M, lam x. M, llam u. M,
//             eps(D|n). M, let P = M in N, discard x y in N, copy(x)
//   sequents  [x1 x2] ; x :: !a1, f :: T ; u :: F |- M :: G
//             with `.` for an empty context, `[]` for empty sigma and `?`
//             for an absent subject term.
// Keywords (all, copy, discard, eps, ex, in, lam, let, llam, loc, nil, one)
// are reserved and cannot name variables.

TermPtr parse_term(const std::string& text, const std::string& filename = "<term>");
FormulaPtr parse_formula(const std::string& text, const std::string& filename = "<formula>",
                         int line_offset = 0);
PatternPtr parse_pattern(const std::string& text, const std::string& filename = "<pattern>");
Sequent parse_sequent(const std::string& text, const std::string& filename = "<sequent>",
                      int line_offset = 0);

std::string print_term(const TermPtr& t);
std::string print_pattern(const PatternPtr& p);
std::string print_formula(const FormulaPtr& f);
std::string print_context(const Context& c);
std::string print_sequent(const Sequent& s);

bool reserved_word(const std::string& s);

}  // namespace hillgts
