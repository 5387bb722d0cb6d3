#pragma once

#include "hillgts/kernel.hpp"

namespace hillgts {

struct ProverOptions {
  int max_depth = 8;            // branching-rule depth for iterative deepening
  int contraction_limit = 2;    // linear copies per non-linear hypothesis
  std::size_t max_visited = 2000000;
};

struct ProverResult {
  ProofPtr proof;           // null when no derivation was found
  bool exhausted = false;   // the whole search space fits under the bound,
                            // so a null proof refutes the statement
  std::size_t visited = 0;
};

// Backward proof search. Cut-free and weakening-free: the identity leaves
// absorb unused non-linear hypotheses, so neither rule is needed for
// completeness on well-formed goals. The subject of `goal` is ignored;
// throws std::invalid_argument when the statement itself is ill-formed.
ProverResult prove(const Sequent& goal, const ProverOptions& opts = {});

// Searches for a cut-free derivation of the statement `tree` concludes.
ProverResult reprove(const ProofTree& tree, const ProverOptions& opts = {});

// Returns a cut-free derivation with the same conclusion as `tree`, or null
// when none was found within the options. A tree that is already cut-free is
// returned unchanged.
ProofPtr verify_cut_admissibility(const ProofPtr& tree,
                                  const ProverOptions& opts = {});

}  // namespace hillgts
