#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace hillgts {

// A type graph fixes the node type labels and, for every edge type label,
// the sequence of node types its attachment positions must carry.
struct TypeGraph {
  std::string name;
  std::vector<std::string> node_types;
  std::map<std::string, std::vector<std::string>> edge_types;  // label -> arity

  bool has_node_type(const std::string& t) const;
  const std::vector<std::string>* arity(const std::string& label) const;
  std::vector<std::string> validate() const;
};

using TypeGraphPtr = std::shared_ptr<const TypeGraph>;

bool typegraphs_equal(const TypeGraph& a, const TypeGraph& b);

// Hypergraph typed over a TypeGraph. Edges attach to an ordered node
// sequence; the sequence may repeat nodes. Identifiers are opaque strings;
// structural operations never depend on their spelling, only on ordering
// for deterministic enumeration.
struct Hypergraph {
  std::string name;
  TypeGraphPtr type_graph;

  struct Edge {
    std::string type;
    std::vector<std::string> attach;
  };

  std::map<std::string, std::string> nodes;  // id -> node type label
  std::map<std::string, Edge> edges;         // id -> edge

  bool has_node(const std::string& id) const { return nodes.count(id) != 0; }
  bool has_edge(const std::string& id) const { return edges.count(id) != 0; }
};

// Violations are human-readable, one string per failed condition.
std::vector<std::string> validate(const Hypergraph& g);

// Typed morphism: node and edge maps commuting with attachment and typing.
struct Morphism {
  Hypergraph source, target;
  std::map<std::string, std::string> node_map;
  std::map<std::string, std::string> edge_map;

  bool total() const;
};

std::vector<std::string> morphism_violations(const Morphism& m);
bool check_morphism(const Morphism& m);

// All isomorphisms a -> b, in deterministic order; stops after `limit`
// results when limit > 0.
std::vector<Morphism> find_isomorphisms(const Hypergraph& a, const Hypergraph& b,
                                        std::size_t limit = 0);
bool isomorphic(const Hypergraph& a, const Hypergraph& b);

struct UnionResult {
  Hypergraph graph;
  Morphism inj1, inj2;
};

// Disjoint union; identifier clashes are resolved by deterministic renaming
// and the injections record where every element went.
UnionResult disjoint_union(const Hypergraph& a, const Hypergraph& b);

// A graph with a distinguished discrete interface embedded into it.
struct InterfaceGraph {
  std::vector<std::pair<std::string, std::string>> interface_nodes;  // id -> type
  Hypergraph body;
  std::map<std::string, std::string> embedding;  // interface id -> body node id

  static InterfaceGraph identity_embedding(
      const std::vector<std::pair<std::string, std::string>>& iface,
      const Hypergraph& body);
};

std::vector<std::string> interface_violations(const InterfaceGraph& ig);

}  // namespace hillgts
