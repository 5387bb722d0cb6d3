#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hillgts/build.hpp"
#include "hillgts/dpo.hpp"

namespace hillgts {

struct NotNormalForm : std::runtime_error {
  explicit NotNormalForm(const std::string& what) : std::runtime_error(what) {}
};

// Variable layout backing a graph representative: one naming variable and
// one location per node, one linear variable with a closed universal type
// per edge. Orders are canonical (isomorphic graphs get matching layouts).
struct GraphSignature {
  struct NodeEntry {
    std::string node;         // graph node id
    std::string naming_var;   // non-linear variable naming the node
    std::string location_var; // linear location holding the naming variable
    FormulaPtr node_type;     // !A
  };
  struct EdgeEntry {
    std::string edge;        // graph edge id
    std::string linear_var;
    FormulaPtr edge_type;    // all x1:T1, ..., xk:Tk. E(x1, ..., xk)
  };
  std::vector<NodeEntry> nodes;
  std::vector<EdgeEntry> edges;
};

// A graph rendered as a derivable statement. The goal of `sequent` is the
// representative formula; `derivation` proves it and passes `check`.
struct Encoding {
  Hypergraph graph;
  GraphSignature signature;
  Sequent sequent;
  ProofPtr derivation;
};

// Canonical node order: nodes grouped by iteratively refined structural
// color, residual ties broken by the ordering that minimizes the encoded
// shape. Isomorphic graphs order corresponding nodes alike as long as the
// residual symmetry classes stay small; beyond that ties fall back to id
// order. `pinned` assigns fixed colors (interface positions) and those
// nodes are omitted from the result.
std::vector<std::string> canonical_node_order(
    const Hypergraph& g, const std::map<std::string, int>& pinned = {});

// Closed graph -> derivation of its representative. Throws
// std::invalid_argument when the graph fails validation.
Encoding encode_graph(const Hypergraph& g);

// Graph with interface -> representative with the interface nodes
// universally quantified in interface order; internal nodes stay
// resource-bound.
Encoding encode_abstract(const InterfaceGraph& ig);

// Rule -> !all interface. lhs-body -o rhs-body, sharing the interface
// variables between the sides. Throws std::invalid_argument when the rule
// fails validation.
FormulaPtr encode_rule(const Rule& r);

// Closed normal representative -> graph. With a null type graph the node
// and edge types are synthesized from the formula; otherwise the formula
// must fit the given one. Throws NotNormalForm.
Hypergraph decode(const FormulaPtr& f, TypeGraphPtr tg = nullptr);

// Certificate for one rewrite step: a derivation of
//   [] ; . ; r :: all interface. lhs -o rhs  |-  gamma_G -o gamma_H
// that passes `check`, with gamma_G the canonical representative of the
// host and gamma_H alpha-equivalent to the canonical representative of the
// result.
ProofPtr emit_step_derivation(const StepRecord& step);

// Equality of representatives up to binder names and tensor reordering,
// decided by decoding both and comparing the canonical re-encodings.
bool representatives_equivalent(const FormulaPtr& a, const FormulaPtr& b);

// The same equality for rule formulas !all xs. L -o R (the bang and the
// universal prefix are matched structurally, each side as a representative
// over the shared interface).
bool rule_formulas_equivalent(const FormulaPtr& a, const FormulaPtr& b);

// Compares the rewrite engine against the logic on one (graph, rule) pair:
// the isomorphism classes of direct successors must coincide with the
// classes decoded from step certificates that pass `check`. `max_matches`
// caps the matches examined (0 = all).
struct CorrespondenceReport {
  struct Instance {
    std::size_t match_index = 0;  // 1-based find_matches position
    std::string status;           // "certified", "rejected", or a mismatch
    std::string detail;
  };
  std::size_t engine_classes = 0;
  std::size_t certified_classes = 0;
  std::vector<Instance> instances;
  std::vector<std::string> mismatches;
  bool ok() const { return mismatches.empty(); }
  std::string to_text() const;
};

CorrespondenceReport verify_correspondence(const Hypergraph& g, const Rule& rule,
                                           std::size_t max_matches = 0);

}  // namespace hillgts
