#include "hillgts/dpo.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace hillgts {

InterfaceGraph Rule::lhs_interface() const {
  return InterfaceGraph::identity_embedding(interface, lhs);
}

InterfaceGraph Rule::rhs_interface() const {
  return InterfaceGraph::identity_embedding(interface, rhs);
}

bool Rule::is_interface(const std::string& node_id) const {
  for (const auto& [id, t] : interface) {
    (void)t;
    if (id == node_id) return true;
  }
  return false;
}

RuleCheck validate_rule(const Rule& r) {
  RuleCheck rc;
  for (const auto& side : {std::make_pair("lhs", &r.lhs), std::make_pair("rhs", &r.rhs)}) {
    for (const auto& v : validate(*side.second))
      rc.errors.push_back(std::string(side.first) + ": " + v);
  }
  std::set<std::string> seen;
  for (const auto& [id, t] : r.interface) {
    if (!seen.insert(id).second) {
      rc.errors.push_back("interface declares '" + id + "' twice");
      continue;
    }
    for (const auto& side : {std::make_pair("lhs", &r.lhs), std::make_pair("rhs", &r.rhs)}) {
      auto it = side.second->nodes.find(id);
      if (it == side.second->nodes.end()) {
        rc.errors.push_back("interface node '" + id + "' missing from " + side.first);
      } else if (it->second != t) {
        rc.errors.push_back("interface node '" + id + "' has type '" + t +
                            "' but " + side.first + " declares '" + it->second + "'");
      }
    }
  }
  auto touched = [](const Hypergraph& g, const std::string& n) {
    for (const auto& [id, e] : g.edges) {
      (void)id;
      for (const auto& a : e.attach)
        if (a == n) return true;
    }
    return false;
  };
  for (const auto& [id, t] : r.interface) {
    (void)t;
    if (!touched(r.lhs, id) && !touched(r.rhs, id))
      rc.warnings.push_back("interface node '" + id + "' is isolated on both sides");
  }
  return rc;
}

const Rule* Gts::rule(const std::string& name) const {
  for (const auto& r : rules)
    if (r.name == name) return &r;
  return nullptr;
}

namespace {

struct MatchSearch {
  const Rule& rule;
  const Hypergraph& host;
  std::vector<Match>& out;

  std::vector<std::string> lhs_edges;
  std::map<std::string, std::string> node_map, edge_map;

  void run() {
    for (const auto& [id, e] : rule.lhs.edges) {
      (void)e;
      lhs_edges.push_back(id);
    }
    assign_edge(0);
  }

  void assign_edge(std::size_t i) {
    if (i == lhs_edges.size()) {
      fill_nodes();
      return;
    }
    const auto& e = rule.lhs.edges.at(lhs_edges[i]);
    for (const auto& [cand, f] : host.edges) {
      if (f.type != e.type || f.attach.size() != e.attach.size()) continue;
      std::vector<std::string> added;
      bool ok = true;
      for (std::size_t k = 0; k < e.attach.size() && ok; ++k) {
        auto it = node_map.find(e.attach[k]);
        if (it == node_map.end()) {
          node_map[e.attach[k]] = f.attach[k];
          added.push_back(e.attach[k]);
        } else if (it->second != f.attach[k]) {
          ok = false;
        }
      }
      if (ok) {
        edge_map[lhs_edges[i]] = cand;
        assign_edge(i + 1);
        edge_map.erase(lhs_edges[i]);
      }
      for (const auto& n : added) node_map.erase(n);
    }
  }

  void fill_nodes() {
    std::vector<std::string> rest;
    for (const auto& [id, t] : rule.lhs.nodes) {
      (void)t;
      if (!node_map.count(id)) rest.push_back(id);
    }
    assign_node(rest, 0);
  }

  void assign_node(const std::vector<std::string>& rest, std::size_t i) {
    if (i == rest.size()) {
      out.push_back(Match{rule, host, Morphism{rule.lhs, host, node_map, edge_map}});
      return;
    }
    const std::string& n = rest[i];
    for (const auto& [cand, t] : host.nodes) {
      if (t != rule.lhs.nodes.at(n)) continue;
      node_map[n] = cand;
      assign_node(rest, i + 1);
      node_map.erase(n);
    }
  }
};

std::set<std::string> deleted_lhs_nodes(const Rule& r) {
  std::set<std::string> out;
  for (const auto& [id, t] : r.lhs.nodes) {
    (void)t;
    if (!r.is_interface(id)) out.insert(id);
  }
  return out;
}

}  // namespace

std::vector<Match> find_matches(const Rule& r, const Hypergraph& host) {
  std::vector<Match> out;
  MatchSearch s{r, host, out, {}, {}, {}};
  s.run();
  return out;
}

GluingCheck check_identification(const Match& m) {
  // Deleted nodes: lhs nodes outside the interface. All lhs edges are
  // deleted since the interface is discrete.
  auto del = deleted_lhs_nodes(m.rule);
  for (const auto& x : del) {
    for (const auto& [y, t] : m.rule.lhs.nodes) {
      (void)t;
      if (x == y) continue;
      if (m.m.node_map.at(x) == m.m.node_map.at(y)) {
        return GluingCheck{false, "identification",
                           "nodes " + x + ", " + y + " both map to " +
                               m.m.node_map.at(x)};
      }
    }
  }
  for (const auto& [x, ex] : m.rule.lhs.edges) {
    (void)ex;
    for (const auto& [y, ey] : m.rule.lhs.edges) {
      (void)ey;
      if (x >= y) continue;
      if (m.m.edge_map.at(x) == m.m.edge_map.at(y)) {
        return GluingCheck{false, "identification",
                           "edges " + x + ", " + y + " both map to " +
                               m.m.edge_map.at(x)};
      }
    }
  }
  return GluingCheck{};
}

GluingCheck check_dangling(const Match& m) {
  std::set<std::string> deleted_images;
  for (const auto& x : deleted_lhs_nodes(m.rule)) deleted_images.insert(m.m.node_map.at(x));
  std::set<std::string> matched_edges;
  for (const auto& [l, h] : m.m.edge_map) {
    (void)l;
    matched_edges.insert(h);
  }
  for (const auto& [id, e] : m.host.edges) {
    if (matched_edges.count(id)) continue;
    for (const auto& n : e.attach) {
      if (deleted_images.count(n)) {
        return GluingCheck{false, "dangling",
                           "at node " + n + ", edge " + id};
      }
    }
  }
  return GluingCheck{};
}

ComplementResult pushout_complement(const Match& m) {
  auto ic = check_identification(m);
  if (!ic.ok) throw GluingViolation(ic.condition, ic.detail);
  auto dc = check_dangling(m);
  if (!dc.ok) throw GluingViolation(dc.condition, dc.detail);

  std::set<std::string> deleted_nodes;
  for (const auto& x : deleted_lhs_nodes(m.rule)) deleted_nodes.insert(m.m.node_map.at(x));
  std::set<std::string> deleted_edges;
  for (const auto& [l, h] : m.m.edge_map) {
    (void)l;
    deleted_edges.insert(h);
  }

  ComplementResult r;
  r.context.name = m.host.name;
  r.context.type_graph = m.host.type_graph;
  for (const auto& [id, t] : m.host.nodes)
    if (!deleted_nodes.count(id)) r.context.nodes[id] = t;
  for (const auto& [id, e] : m.host.edges)
    if (!deleted_edges.count(id)) r.context.edges[id] = e;

  std::map<std::string, std::string> gn, ge;
  for (const auto& [id, t] : r.context.nodes) {
    (void)t;
    gn[id] = id;
  }
  for (const auto& [id, e] : r.context.edges) {
    (void)e;
    ge[id] = id;
  }
  r.g = Morphism{r.context, m.host, gn, ge};

  Hypergraph iface;
  iface.name = m.rule.name + ".interface";
  iface.type_graph = m.host.type_graph;
  std::map<std::string, std::string> dn;
  for (const auto& [id, t] : m.rule.interface) {
    iface.nodes[id] = t;
    dn[id] = m.m.node_map.at(id);
  }
  r.d = Morphism{iface, r.context, dn, {}};
  return r;
}

PushoutResult pushout(const Morphism& d, const Rule& r) {
  PushoutResult out;
  out.result = d.target;
  out.result.name = d.target.name;

  std::set<std::string> taken;
  for (const auto& [id, t] : out.result.nodes) {
    (void)t;
    taken.insert(id);
  }
  auto fresh = [&taken](const std::string& base) {
    for (int k = 1;; ++k) {
      std::string c = base + "_" + std::to_string(k);
      if (!taken.count(c)) {
        taken.insert(c);
        return c;
      }
    }
  };

  std::map<std::string, std::string> mn;  // rhs node -> result node
  for (const auto& [id, t] : r.rhs.nodes) {
    if (r.is_interface(id)) {
      mn[id] = d.node_map.at(id);
    } else {
      std::string nid = fresh(id);
      out.result.nodes[nid] = t;
      mn[id] = nid;
    }
  }

  std::set<std::string> etaken;
  for (const auto& [id, e] : out.result.edges) {
    (void)e;
    etaken.insert(id);
  }
  auto fresh_edge = [&etaken](const std::string& base) {
    for (int k = 1;; ++k) {
      std::string c = base + "_" + std::to_string(k);
      if (!etaken.count(c)) {
        etaken.insert(c);
        return c;
      }
    }
  };

  std::map<std::string, std::string> me;  // rhs edge -> result edge
  for (const auto& [id, e] : r.rhs.edges) {
    std::string eid = fresh_edge(id);
    Hypergraph::Edge copy = e;
    for (auto& n : copy.attach) n = mn.at(n);
    out.result.edges[eid] = copy;
    me[id] = eid;
  }

  std::map<std::string, std::string> hn, he;
  for (const auto& [id, t] : d.target.nodes) {
    (void)t;
    hn[id] = id;
  }
  for (const auto& [id, e] : d.target.edges) {
    (void)e;
    he[id] = id;
  }
  out.h = Morphism{d.target, out.result, hn, he};
  out.m_star = Morphism{r.rhs, out.result, mn, me};
  return out;
}

StepRecord apply(const Match& m) {
  StepRecord s;
  s.rule = m.rule;
  s.match = m;
  auto comp = pushout_complement(m);
  s.context = comp.context;
  s.g = comp.g;
  s.d = comp.d;
  auto po = pushout(comp.d, m.rule);
  s.result = po.result;
  s.h = po.h;
  s.m_star = po.m_star;
  // Targets recorded against the freshly built result graph.
  s.h.target = s.result;
  s.m_star.target = s.result;
  return s;
}

std::vector<Successor> successors(const Hypergraph& g, const std::vector<Rule>& rules) {
  std::vector<Successor> out;
  for (const auto& r : rules) {
    auto matches = find_matches(r, g);
    for (std::size_t i = 0; i < matches.size(); ++i) {
      if (!check_identification(matches[i]).ok) continue;
      if (!check_dangling(matches[i]).ok) continue;
      StepRecord step = apply(matches[i]);
      bool dup = false;
      for (const auto& kept : out) {
        if (isomorphic(kept.step.result, step.result)) {
          dup = true;
          break;
        }
      }
      if (!dup) out.push_back(Successor{r.name, i + 1, std::move(step)});
    }
  }
  return out;
}

std::optional<Trace> reachable(const Gts& system, const Hypergraph& target, int depth) {
  if (!system.start) return std::nullopt;

  struct Entry {
    Hypergraph graph;
    std::vector<Successor> path;
  };
  std::deque<Entry> frontier;
  std::vector<Hypergraph> seen;

  auto known = [&seen](const Hypergraph& g) {
    for (const auto& s : seen)
      if (isomorphic(s, g)) return true;
    return false;
  };

  if (isomorphic(*system.start, target))
    return Trace{{}, *system.start};
  frontier.push_back(Entry{*system.start, {}});
  seen.push_back(*system.start);

  for (int level = 0; level < depth && !frontier.empty(); ++level) {
    std::deque<Entry> next;
    for (auto& entry : frontier) {
      for (auto& succ : successors(entry.graph, system.rules)) {
        if (known(succ.step.result)) continue;
        Entry e{succ.step.result, entry.path};
        e.path.push_back(succ);
        if (isomorphic(e.graph, target)) return Trace{e.path, e.graph};
        seen.push_back(e.graph);
        next.push_back(std::move(e));
      }
    }
    frontier = std::move(next);
  }
  return std::nullopt;
}

}  // namespace hillgts
