#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hillgts/kernel.hpp"
#include "hillgts/parse_error.hpp"

namespace hillgts {

// Logic files: one declaration per line.
//
//   formula gamma_g = ex x1:!a1. C(x1)
//   sequent step : [] ; . ; r :: one |- nil :: one
//
// `#` starts a comment running to end of line.
struct HillFile {
  std::vector<std::pair<std::string, FormulaPtr>> formulas;
  std::vector<std::pair<std::string, Sequent>> sequents;
};

HillFile parse_hill(const std::string& text,
                    const std::string& filename = "<hill>");
std::string print_hill(const HillFile& f);

// Derivation files: a parenthesized tree per derivation, each node giving
// the rule, its end statement in braces, and the premise subtrees.
//
//   (TensR {[] ; . ; u :: a, v :: b |- u * v :: a * b}
//     (LId {[] ; . ; u :: a |- u :: a})
//     (LId {[] ; . ; v :: b |- v :: b}))
ProofPtr parse_proof(const std::string& text,
                     const std::string& filename = "<prf>");
std::string print_proof(const ProofTree& tree);

}  // namespace hillgts
