#include "hillgts/hypergraph.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace hillgts {

bool TypeGraph::has_node_type(const std::string& t) const {
  return std::find(node_types.begin(), node_types.end(), t) != node_types.end();
}

const std::vector<std::string>* TypeGraph::arity(const std::string& label) const {
  auto it = edge_types.find(label);
  return it == edge_types.end() ? nullptr : &it->second;
}

std::vector<std::string> TypeGraph::validate() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& t : node_types) {
    if (!seen.insert(t).second) out.push_back("duplicate node type '" + t + "'");
  }
  for (const auto& [label, ar] : edge_types) {
    for (const auto& t : ar) {
      if (!has_node_type(t))
        out.push_back("edge type '" + label + "' uses unknown node type '" + t + "'");
    }
  }
  return out;
}

bool typegraphs_equal(const TypeGraph& a, const TypeGraph& b) {
  return a.node_types == b.node_types && a.edge_types == b.edge_types;
}

std::vector<std::string> validate(const Hypergraph& g) {
  std::vector<std::string> out;
  if (!g.type_graph) {
    out.push_back("graph has no type graph");
    return out;
  }
  for (const auto& [id, t] : g.nodes) {
    if (!g.type_graph->has_node_type(t))
      out.push_back("node '" + id + "' has unknown type '" + t + "'");
  }
  for (const auto& [id, e] : g.edges) {
    const auto* ar = g.type_graph->arity(e.type);
    if (!ar) {
      out.push_back("edge '" + id + "' has unknown type '" + e.type + "'");
      continue;
    }
    if (ar->size() != e.attach.size()) {
      std::ostringstream os;
      os << "edge '" << id << "' of type '" << e.type << "' attaches "
         << e.attach.size() << " nodes, expected " << ar->size();
      out.push_back(os.str());
      continue;
    }
    for (std::size_t i = 0; i < e.attach.size(); ++i) {
      auto it = g.nodes.find(e.attach[i]);
      if (it == g.nodes.end()) {
        out.push_back("edge '" + id + "' attaches missing node '" + e.attach[i] + "'");
      } else if (it->second != (*ar)[i]) {
        std::ostringstream os;
        os << "edge '" << id << "' position " << i + 1 << " expects node type '"
           << (*ar)[i] << "' but node '" << e.attach[i] << "' has type '"
           << it->second << "'";
        out.push_back(os.str());
      }
    }
  }
  return out;
}

bool Morphism::total() const {
  for (const auto& [id, t] : source.nodes) {
    (void)t;
    if (!node_map.count(id)) return false;
  }
  for (const auto& [id, e] : source.edges) {
    (void)e;
    if (!edge_map.count(id)) return false;
  }
  return true;
}

std::vector<std::string> morphism_violations(const Morphism& m) {
  std::vector<std::string> out;
  for (const auto& [id, t] : m.source.nodes) {
    auto it = m.node_map.find(id);
    if (it == m.node_map.end()) {
      out.push_back("node '" + id + "' has no image");
      continue;
    }
    auto jt = m.target.nodes.find(it->second);
    if (jt == m.target.nodes.end()) {
      out.push_back("node '" + id + "' maps to missing node '" + it->second + "'");
    } else if (jt->second != t) {
      out.push_back("node '" + id + "' of type '" + t + "' maps to node '" +
                    it->second + "' of type '" + jt->second + "'");
    }
  }
  for (const auto& [id, e] : m.source.edges) {
    auto it = m.edge_map.find(id);
    if (it == m.edge_map.end()) {
      out.push_back("edge '" + id + "' has no image");
      continue;
    }
    auto jt = m.target.edges.find(it->second);
    if (jt == m.target.edges.end()) {
      out.push_back("edge '" + id + "' maps to missing edge '" + it->second + "'");
      continue;
    }
    if (jt->second.type != e.type) {
      out.push_back("edge '" + id + "' of type '" + e.type + "' maps to edge '" +
                    it->second + "' of type '" + jt->second.type + "'");
      continue;
    }
    if (jt->second.attach.size() != e.attach.size()) {
      out.push_back("edge '" + id + "' arity differs from image '" + it->second + "'");
      continue;
    }
    for (std::size_t i = 0; i < e.attach.size(); ++i) {
      auto nt = m.node_map.find(e.attach[i]);
      if (nt == m.node_map.end()) {
        out.push_back("edge '" + id + "' attaches unmapped node '" + e.attach[i] + "'");
      } else if (nt->second != jt->second.attach[i]) {
        std::ostringstream os;
        os << "edge '" << id << "' does not commute with attachment at position "
           << i + 1 << ": node '" << e.attach[i] << "' maps to '" << nt->second
           << "' but image edge attaches '" << jt->second.attach[i] << "'";
        out.push_back(os.str());
      }
    }
  }
  return out;
}

bool check_morphism(const Morphism& m) { return morphism_violations(m).empty(); }

namespace {

// Sort key used to order nodes during isomorphism search: type label first,
// then an incidence descriptor, so structurally constrained nodes are
// assigned early.
std::vector<std::pair<std::string, std::size_t>> incidence(const Hypergraph& g,
                                                           const std::string& node) {
  std::vector<std::pair<std::string, std::size_t>> inc;
  for (const auto& [id, e] : g.edges) {
    (void)id;
    for (std::size_t i = 0; i < e.attach.size(); ++i)
      if (e.attach[i] == node) inc.emplace_back(e.type, i + 1);
  }
  std::sort(inc.begin(), inc.end());
  return inc;
}

struct IsoSearch {
  const Hypergraph& a;
  const Hypergraph& b;
  std::size_t limit;
  std::vector<Morphism>& out;

  std::vector<std::string> a_nodes;
  std::map<std::string, std::string> node_map;
  std::set<std::string> used_b_nodes;

  bool done() const { return limit > 0 && out.size() >= limit; }

  void run() {
    for (const auto& [id, t] : a.nodes) {
      (void)t;
      a_nodes.push_back(id);
    }
    std::stable_sort(a_nodes.begin(), a_nodes.end(),
                     [&](const std::string& x, const std::string& y) {
                       auto kx = std::make_tuple(a.nodes.at(x), incidence(a, x), x);
                       auto ky = std::make_tuple(a.nodes.at(y), incidence(a, y), y);
                       return kx < ky;
                     });
    assign_node(0);
  }

  void assign_node(std::size_t i) {
    if (done()) return;
    if (i == a_nodes.size()) {
      match_edges();
      return;
    }
    const std::string& n = a_nodes[i];
    for (const auto& [cand, t] : b.nodes) {
      if (t != a.nodes.at(n) || used_b_nodes.count(cand)) continue;
      if (incidence(a, n) != incidence(b, cand)) continue;
      node_map[n] = cand;
      used_b_nodes.insert(cand);
      assign_node(i + 1);
      node_map.erase(n);
      used_b_nodes.erase(cand);
      if (done()) return;
    }
  }

  void match_edges() {
    std::vector<std::string> a_edges;
    for (const auto& [id, e] : a.edges) {
      (void)e;
      a_edges.push_back(id);
    }
    std::map<std::string, std::string> edge_map;
    std::set<std::string> used;
    assign_edge(a_edges, 0, edge_map, used);
  }

  void assign_edge(const std::vector<std::string>& a_edges, std::size_t i,
                   std::map<std::string, std::string>& edge_map,
                   std::set<std::string>& used) {
    if (done()) return;
    if (i == a_edges.size()) {
      out.push_back(Morphism{a, b, node_map, edge_map});
      return;
    }
    const auto& e = a.edges.at(a_edges[i]);
    std::vector<std::string> want;
    for (const auto& n : e.attach) want.push_back(node_map.at(n));
    for (const auto& [cand, f] : b.edges) {
      if (used.count(cand) || f.type != e.type || f.attach != want) continue;
      edge_map[a_edges[i]] = cand;
      used.insert(cand);
      assign_edge(a_edges, i + 1, edge_map, used);
      edge_map.erase(a_edges[i]);
      used.erase(cand);
      if (done()) return;
    }
  }
};

}  // namespace

std::vector<Morphism> find_isomorphisms(const Hypergraph& a, const Hypergraph& b,
                                        std::size_t limit) {
  std::vector<Morphism> out;
  if (!a.type_graph || !b.type_graph) return out;
  if (!typegraphs_equal(*a.type_graph, *b.type_graph)) return out;
  if (a.nodes.size() != b.nodes.size() || a.edges.size() != b.edges.size()) return out;

  std::multiset<std::string> ant, bnt;
  for (const auto& [id, t] : a.nodes) {
    (void)id;
    ant.insert(t);
  }
  for (const auto& [id, t] : b.nodes) {
    (void)id;
    bnt.insert(t);
  }
  if (ant != bnt) return out;

  IsoSearch s{a, b, limit, out, {}, {}, {}};
  s.run();
  return out;
}

bool isomorphic(const Hypergraph& a, const Hypergraph& b) {
  return !find_isomorphisms(a, b, 1).empty();
}

namespace {

std::string fresh_id(const std::string& base, const std::set<std::string>& taken) {
  if (!taken.count(base)) return base;
  for (int k = 2;; ++k) {
    std::string c = base + "_" + std::to_string(k);
    if (!taken.count(c)) return c;
  }
}

}  // namespace

UnionResult disjoint_union(const Hypergraph& a, const Hypergraph& b) {
  UnionResult r;
  r.graph.name = a.name + "+" + b.name;
  r.graph.type_graph = a.type_graph;

  std::set<std::string> taken;
  auto place_nodes = [&](const Hypergraph& g, std::map<std::string, std::string>& inj) {
    for (const auto& [id, t] : g.nodes) {
      std::string nid = fresh_id(id, taken);
      taken.insert(nid);
      r.graph.nodes[nid] = t;
      inj[id] = nid;
    }
  };
  std::map<std::string, std::string> n1, n2, e1, e2;
  place_nodes(a, n1);
  place_nodes(b, n2);

  std::set<std::string> etaken;
  auto place_edges = [&](const Hypergraph& g, const std::map<std::string, std::string>& nm,
                         std::map<std::string, std::string>& inj) {
    for (const auto& [id, e] : g.edges) {
      std::string eid = fresh_id(id, etaken);
      etaken.insert(eid);
      Hypergraph::Edge copy = e;
      for (auto& n : copy.attach) n = nm.at(n);
      r.graph.edges[eid] = copy;
      inj[id] = eid;
    }
  };
  place_edges(a, n1, e1);
  place_edges(b, n2, e2);

  r.inj1 = Morphism{a, r.graph, n1, e1};
  r.inj2 = Morphism{b, r.graph, n2, e2};
  return r;
}

InterfaceGraph InterfaceGraph::identity_embedding(
    const std::vector<std::pair<std::string, std::string>>& iface,
    const Hypergraph& body) {
  InterfaceGraph ig;
  ig.interface_nodes = iface;
  ig.body = body;
  for (const auto& [id, t] : iface) {
    (void)t;
    ig.embedding[id] = id;
  }
  return ig;
}

std::vector<std::string> interface_violations(const InterfaceGraph& ig) {
  std::vector<std::string> out;
  std::set<std::string> images;
  for (const auto& [id, t] : ig.interface_nodes) {
    auto it = ig.embedding.find(id);
    if (it == ig.embedding.end()) {
      out.push_back("interface node '" + id + "' has no embedding");
      continue;
    }
    if (!images.insert(it->second).second)
      out.push_back("embedding not injective at '" + it->second + "'");
    auto jt = ig.body.nodes.find(it->second);
    if (jt == ig.body.nodes.end()) {
      out.push_back("interface node '" + id + "' embeds to missing node '" +
                    it->second + "'");
    } else if (jt->second != t) {
      out.push_back("interface node '" + id + "' of type '" + t +
                    "' embeds to node of type '" + jt->second + "'");
    }
  }
  return out;
}

}  // namespace hillgts
