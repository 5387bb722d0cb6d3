#pragma once

#include <optional>

#include "hillgts/ast.hpp"

namespace hillgts {

// Inference rules. ExR/ExL introduce the resource-bound quantifier; BangCut
// is the non-linear cut.
enum class RuleTag {
  LId,
  UId,
  ExR,
  ExL,
  AllR,
  AllL,
  LolliR,
  LolliL,
  TensR,
  TensL,
  OneR,
  OneL,
  BangR,
  BangL,
  Weak,
  Contr,
  Cut,
  BangCut,
};

const char* rule_name(RuleTag tag);
std::optional<RuleTag> rule_from_name(const std::string& name);

struct ProofTree;
using ProofPtr = std::shared_ptr<const ProofTree>;

// Derivation trees store full premise sequents, so context splits and
// instantiations are read off the premises rather than carried separately.
// ExR premises are ordered (witness, identity, main).
struct ProofTree {
  RuleTag rule;
  Sequent conclusion;
  std::vector<ProofPtr> premises;
};

ProofPtr proof(RuleTag rule, Sequent conclusion, std::vector<ProofPtr> premises = {});

struct CheckFailure {
  std::string path;       // "root", "root.1", ... (1-based premise indices)
  std::string condition;  // short tag, e.g. "separation", "delta-split"
  std::string detail;
};

struct CheckReport {
  std::vector<CheckFailure> failures;
  bool ok() const { return failures.empty(); }
  std::string to_text() const;
};

struct SeparationViolation : std::runtime_error {
  SeparationViolation(std::string loc_a, std::string loc_b, const std::string& var)
      : std::runtime_error("separation condition violated: locations '" + loc_a +
                           "' and '" + loc_b + "' share the free variable '" + var + "'"),
        a(std::move(loc_a)),
        b(std::move(loc_b)) {}
  std::string a, b;
};

// Free variables of the naming terms of delta's location entries. Throws
// when two distinct locations share a free variable.
std::set<std::string> infer_sigma(const Context& delta);

// Well-formedness of a single sequent: distinct names, closed gamma types,
// declared free variables, sigma = infer_sigma(delta), location entries with
// non-linear naming terms, and subject linearity (each delta variable occurs
// free exactly once in the subject).
std::vector<std::string> sequent_violations(const Sequent& s);

// Full validation of a derivation: well-formedness of every sequent plus the
// per-rule shape and side conditions. Never throws.
CheckReport check(const ProofTree& tree);
CheckReport check(const ProofPtr& tree);

// Counts locations of subject type `alpha` on the two sides of the sequent:
// negative occurrences (hypothesis side, and left of an odd number of
// lollipops) versus positive ones, counting both explicit located types and
// binders of the resource-bound quantifier over `alpha`.
std::pair<int, int> location_balance(const Sequent& s, const FormulaPtr& alpha);

bool sequents_equal(const Sequent& a, const Sequent& b);

std::size_t proof_size(const ProofTree& tree);
bool uses_cut(const ProofTree& tree);

bool is_atomic_formula(const FormulaPtr& f);

}  // namespace hillgts
