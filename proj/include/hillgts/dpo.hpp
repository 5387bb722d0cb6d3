#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hillgts/hypergraph.hpp"

namespace hillgts {

// Rewrite rule: two graphs sharing a discrete interface. Interface nodes are
// identified by spelling in both sides; the embeddings are the identity on
// those identifiers.
struct Rule {
  std::string name;
  std::vector<std::pair<std::string, std::string>> interface;  // id -> type
  Hypergraph lhs, rhs;

  InterfaceGraph lhs_interface() const;
  InterfaceGraph rhs_interface() const;
  bool is_interface(const std::string& node_id) const;
};

struct RuleCheck {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
};

RuleCheck validate_rule(const Rule& r);

// Rewriting system: shared type graph, named rules, start graph.
struct Gts {
  TypeGraphPtr type_graph;
  std::vector<Rule> rules;
  std::optional<Hypergraph> start;

  const Rule* rule(const std::string& name) const;
};

struct Match {
  Rule rule;
  Hypergraph host;
  Morphism m;  // lhs -> host
};

// Total type-preserving morphisms lhs -> host, in deterministic order.
std::vector<Match> find_matches(const Rule& r, const Hypergraph& host);

struct GluingCheck {
  bool ok = true;
  std::string condition;  // "identification" or "dangling" when !ok
  std::string detail;
};

// Deleted-part injectivity: no element scheduled for deletion shares an
// image with any other lhs element.
GluingCheck check_identification(const Match& m);
// No host edge outside the match touches a node scheduled for deletion.
GluingCheck check_dangling(const Match& m);

struct GluingViolation : std::runtime_error {
  GluingViolation(std::string cond, std::string det)
      : std::runtime_error(cond + " condition violated: " + det),
        condition(std::move(cond)),
        detail(std::move(det)) {}
  std::string condition;
  std::string detail;
};

struct ComplementResult {
  Hypergraph context;  // host minus the deleted part
  Morphism g;          // context -> host inclusion
  Morphism d;          // interface -> context
};

// Throws GluingViolation when identification or dangling fails.
ComplementResult pushout_complement(const Match& m);

struct PushoutResult {
  Hypergraph result;
  Morphism h;       // context -> result inclusion
  Morphism m_star;  // rhs -> result
};

// Glues the rule's rhs onto the context along the interface instantiation d.
PushoutResult pushout(const Morphism& d, const Rule& r);

struct StepRecord {
  Rule rule;
  Match match;
  Hypergraph context;
  Hypergraph result;
  Morphism g, d, h, m_star;
};

StepRecord apply(const Match& m);

struct Successor {
  std::string rule_name;
  std::size_t match_index = 0;  // 1-based index into find_matches order
  StepRecord step;
};

// One entry per isomorphism class of results across all rules and
// gluing-valid matches.
std::vector<Successor> successors(const Hypergraph& g, const std::vector<Rule>& rules);

struct Trace {
  std::vector<Successor> steps;
  Hypergraph final_graph;
};

// Breadth-first search over isomorphism classes; returns a derivation trace
// reaching a graph isomorphic to target, if one exists within `depth` steps.
std::optional<Trace> reachable(const Gts& system, const Hypergraph& target, int depth);

}  // namespace hillgts
