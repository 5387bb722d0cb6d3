#pragma once

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hillgts/dpo.hpp"
#include "hillgts/hypergraph.hpp"

namespace th {

using namespace hillgts;

// Naive quantified reading of the identification condition: no deleted node
// shares an image with any other lhs node, and no two lhs edges collapse.
inline bool oracle_identification(const Match& m) {
  std::set<std::string> deleted;
  for (const auto& [id, t] : m.rule.lhs.nodes) {
    (void)t;
    if (!m.rule.is_interface(id)) deleted.insert(id);
  }
  for (const auto& x : deleted)
    for (const auto& [y, t] : m.rule.lhs.nodes) {
      (void)t;
      if (x != y && m.m.node_map.at(x) == m.m.node_map.at(y)) return false;
    }
  for (const auto& [x, ex] : m.rule.lhs.edges) {
    (void)ex;
    for (const auto& [y, ey] : m.rule.lhs.edges) {
      (void)ey;
      if (x != y && m.m.edge_map.at(x) == m.m.edge_map.at(y)) return false;
    }
  }
  return true;
}

// Naive quantified reading of the dangling condition: every host edge that
// touches the image of a deleted node is itself in the image of the match.
inline bool oracle_dangling(const Match& m) {
  std::set<std::string> deleted_images;
  for (const auto& [id, t] : m.rule.lhs.nodes) {
    (void)t;
    if (!m.rule.is_interface(id)) deleted_images.insert(m.m.node_map.at(id));
  }
  std::set<std::string> image_edges;
  for (const auto& [l, h] : m.m.edge_map) {
    (void)l;
    image_edges.insert(h);
  }
  for (const auto& [eid, e] : m.host.edges)
    for (const auto& n : e.attach)
      if (deleted_images.count(n) && !image_edges.count(eid)) return false;
  return true;
}

inline TypeGraphPtr demo_types() {
  auto tg = std::make_shared<TypeGraph>();
  tg->name = "TG";
  tg->node_types = {"a1", "a2", "a3"};
  tg->edge_types["C"] = {"a1"};
  tg->edge_types["A"] = {"a1", "a2"};
  tg->edge_types["B"] = {"a2"};
  tg->edge_types["D"] = {"a3", "a3"};
  return tg;
}

inline Hypergraph graph(TypeGraphPtr tg,
                        std::vector<std::pair<std::string, std::string>> nodes,
                        std::vector<std::tuple<std::string, std::string,
                                               std::vector<std::string>>> edges,
                        std::string name = "G") {
  Hypergraph g;
  g.name = std::move(name);
  g.type_graph = std::move(tg);
  for (auto& [id, t] : nodes) g.nodes[id] = t;
  for (auto& [id, t, at] : edges) g.edges[id] = Hypergraph::Edge{t, at};
  return g;
}

// Running example: a C-marked a1 node with two A-edges to a2 nodes, one of
// which carries a B-marker.
inline Hypergraph demo_host(const TypeGraphPtr& tg) {
  return graph(tg,
               {{"x1", "a1"}, {"x2", "a2"}, {"x3", "a2"}},
               {{"e_c", "C", {"x1"}},
                {"e_a1", "A", {"x1", "x2"}},
                {"e_a2", "A", {"x1", "x3"}},
                {"e_b", "B", {"x2"}}},
               "G");
}

// Rule: delete a C-marked node's A-neighbour (and the C marker), create a
// fresh D-linked pair, re-create the C marker.
inline Rule demo_rule(const TypeGraphPtr& tg) {
  Rule r;
  r.name = "p";
  r.interface = {{"y1", "a1"}};
  r.lhs = graph(tg, {{"y1", "a1"}, {"y2", "a2"}},
                {{"c1", "C", {"y1"}}, {"a1", "A", {"y1", "y2"}}}, "p.lhs");
  r.rhs = graph(tg, {{"y1", "a1"}, {"y3", "a3"}, {"y4", "a3"}},
                {{"c2", "C", {"y1"}}, {"d1", "D", {"y3", "y4"}}}, "p.rhs");
  return r;
}

inline Hypergraph demo_result(const TypeGraphPtr& tg) {
  return graph(tg,
               {{"x1", "a1"}, {"x2", "a2"}, {"z3", "a3"}, {"z4", "a3"}},
               {{"c", "C", {"x1"}},
                {"a", "A", {"x1", "x2"}},
                {"b", "B", {"x2"}},
                {"d", "D", {"z3", "z4"}}},
               "H");
}

// Independent oracle: enumerate every node bijection and every edge
// bijection, keep the pairs that form a valid typed morphism.
inline std::size_t brute_force_iso_count(const Hypergraph& a, const Hypergraph& b) {
  if (a.nodes.size() != b.nodes.size() || a.edges.size() != b.edges.size()) return 0;
  std::vector<std::string> an, bn, ae, be;
  for (const auto& [id, t] : a.nodes) (void)t, an.push_back(id);
  for (const auto& [id, t] : b.nodes) (void)t, bn.push_back(id);
  for (const auto& [id, e] : a.edges) (void)e, ae.push_back(id);
  for (const auto& [id, e] : b.edges) (void)e, be.push_back(id);

  std::size_t count = 0;
  std::sort(bn.begin(), bn.end());
  do {
    std::vector<std::string> bp = be;
    std::sort(bp.begin(), bp.end());
    do {
      Morphism m{a, b, {}, {}};
      for (std::size_t i = 0; i < an.size(); ++i) m.node_map[an[i]] = bn[i];
      for (std::size_t i = 0; i < ae.size(); ++i) m.edge_map[ae[i]] = bp[i];
      if (check_morphism(m)) ++count;
    } while (std::next_permutation(bp.begin(), bp.end()));
  } while (std::next_permutation(bn.begin(), bn.end()));
  return count;
}

// Independent oracle: enumerate all total node/edge assignments lhs -> host
// and keep valid morphisms (no backtracking shortcuts).
inline std::size_t brute_force_match_count(const Rule& r, const Hypergraph& host) {
  std::vector<std::string> ln, le, hn, he;
  for (const auto& [id, t] : r.lhs.nodes) (void)t, ln.push_back(id);
  for (const auto& [id, e] : r.lhs.edges) (void)e, le.push_back(id);
  for (const auto& [id, t] : host.nodes) (void)t, hn.push_back(id);
  for (const auto& [id, e] : host.edges) (void)e, he.push_back(id);

  std::size_t count = 0;
  std::vector<std::size_t> nsel(ln.size(), 0), esel(le.size(), 0);
  auto advance = [](std::vector<std::size_t>& v, std::size_t base) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (++v[i] < base) return true;
      v[i] = 0;
    }
    return false;
  };
  if ((!ln.empty() && hn.empty()) || (!le.empty() && he.empty())) return 0;
  while (true) {
    Morphism m{r.lhs, host, {}, {}};
    for (std::size_t i = 0; i < ln.size(); ++i) m.node_map[ln[i]] = hn[nsel[i]];
    for (std::size_t i = 0; i < le.size(); ++i) m.edge_map[le[i]] = he[esel[i]];
    if (check_morphism(m)) ++count;
    if (!advance(esel, he.size())) {
      if (!advance(nsel, hn.size())) break;
    }
  }
  return count;
}

}  // namespace th
