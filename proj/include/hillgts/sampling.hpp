#pragma once

#include <random>

#include "hillgts/dpo.hpp"

namespace hillgts {

// Bounds for randomized instances. Rule sides count nodes including the
// interface.
struct SampleOptions {
  int max_nodes = 6;
  int max_edges = 6;
  int rule_side_nodes = 3;
  int rule_side_edges = 3;
};

// Small random type graph: 1-3 node types, 1-4 edge types of arity 0-3.
TypeGraphPtr sample_type_graph(std::mt19937& rng);

// Random valid closed graph over tg within the bounds.
Hypergraph sample_graph(std::mt19937& rng, const TypeGraphPtr& tg,
                        const SampleOptions& opts = {});

// Random valid rule (discrete interface present in both sides). Retries
// until validate_rule reports no errors.
Rule sample_rule(std::mt19937& rng, const TypeGraphPtr& tg,
                 const SampleOptions& opts = {});

// Copy of g with fresh node and edge identifiers (same shape up to iso).
Hypergraph shuffle_ids(std::mt19937& rng, const Hypergraph& g);

}  // namespace hillgts
