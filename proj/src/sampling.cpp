#include "hillgts/sampling.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace hillgts {

namespace {

int pick(std::mt19937& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

template <typename T>
const T& pick_one(std::mt19937& rng, const std::vector<T>& xs) {
  return xs[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(xs.size()) - 1))];
}

std::vector<std::string> node_ids(const Hypergraph& g) {
  std::vector<std::string> out;
  for (const auto& [id, t] : g.nodes) (void)t, out.push_back(id);
  return out;
}

// Adds `count` random edges whose attachment types can be satisfied by the
// existing nodes; skips edge types that cannot be placed.
void add_random_edges(std::mt19937& rng, Hypergraph& g, int count,
                      const std::string& prefix) {
  std::vector<std::string> labels;
  for (const auto& [label, arity] : g.type_graph->edge_types) {
    bool placeable = true;
    for (const auto& t : arity) {
      bool found = false;
      for (const auto& [id, nt] : g.nodes) (void)id, found |= nt == t;
      placeable &= found;
    }
    if (placeable) labels.push_back(label);
  }
  if (labels.empty()) return;
  std::map<std::string, std::vector<std::string>> by_type;
  for (const auto& [id, t] : g.nodes) by_type[t].push_back(id);
  for (int i = 0; i < count; ++i) {
    const std::string& label = pick_one(rng, labels);
    Hypergraph::Edge e;
    e.type = label;
    for (const auto& t : g.type_graph->edge_types.at(label))
      e.attach.push_back(pick_one(rng, by_type.at(t)));
    g.edges[prefix + std::to_string(i + 1)] = std::move(e);
  }
}

}  // namespace

TypeGraphPtr sample_type_graph(std::mt19937& rng) {
  auto tg = std::make_shared<TypeGraph>();
  tg->name = "TG";
  int nt = pick(rng, 1, 3);
  for (int i = 0; i < nt; ++i) tg->node_types.push_back("t" + std::to_string(i + 1));
  int et = pick(rng, 1, 4);
  for (int i = 0; i < et; ++i) {
    std::vector<std::string> arity;
    int k = pick(rng, 0, 3);
    for (int j = 0; j < k; ++j)
      arity.push_back(tg->node_types[static_cast<std::size_t>(
          pick(rng, 0, nt - 1))]);
    tg->edge_types["E" + std::to_string(i + 1)] = std::move(arity);
  }
  return tg;
}

Hypergraph sample_graph(std::mt19937& rng, const TypeGraphPtr& tg,
                        const SampleOptions& opts) {
  Hypergraph g;
  g.name = "G";
  g.type_graph = tg;
  int n = pick(rng, 0, opts.max_nodes);
  for (int i = 0; i < n; ++i)
    g.nodes["v" + std::to_string(i + 1)] =
        tg->node_types[static_cast<std::size_t>(
            pick(rng, 0, static_cast<int>(tg->node_types.size()) - 1))];
  if (n > 0) add_random_edges(rng, g, pick(rng, 0, opts.max_edges), "e");
  return g;
}

Rule sample_rule(std::mt19937& rng, const TypeGraphPtr& tg,
                 const SampleOptions& opts) {
  for (;;) {
    Rule r;
    r.name = "p";
    int iface = pick(rng, 0, std::min(2, opts.rule_side_nodes));
    for (int i = 0; i < iface; ++i)
      r.interface.emplace_back(
          "k" + std::to_string(i + 1),
          tg->node_types[static_cast<std::size_t>(
              pick(rng, 0, static_cast<int>(tg->node_types.size()) - 1))]);

    auto make_side = [&](const std::string& name, const std::string& node_prefix,
                         const std::string& edge_prefix) {
      Hypergraph side;
      side.name = name;
      side.type_graph = tg;
      for (const auto& [id, t] : r.interface) side.nodes[id] = t;
      int extra = pick(rng, 0, opts.rule_side_nodes - iface);
      for (int i = 0; i < extra; ++i)
        side.nodes[node_prefix + std::to_string(i + 1)] =
            tg->node_types[static_cast<std::size_t>(
                pick(rng, 0, static_cast<int>(tg->node_types.size()) - 1))];
      if (!side.nodes.empty())
        add_random_edges(rng, side, pick(rng, 0, opts.rule_side_edges),
                         edge_prefix);
      return side;
    };
    r.lhs = make_side("p.lhs", "l", "le");
    r.rhs = make_side("p.rhs", "r", "re");
    if (validate_rule(r).ok()) return r;
  }
}

Hypergraph shuffle_ids(std::mt19937& rng, const Hypergraph& g) {
  std::vector<std::string> nids = node_ids(g), eids;
  for (const auto& [id, e] : g.edges) (void)e, eids.push_back(id);
  std::shuffle(nids.begin(), nids.end(), rng);
  std::shuffle(eids.begin(), eids.end(), rng);
  std::map<std::string, std::string> nmap;
  Hypergraph out;
  out.name = g.name;
  out.type_graph = g.type_graph;
  for (std::size_t i = 0; i < nids.size(); ++i) {
    nmap[nids[i]] = "q" + std::to_string(i + 1);
    out.nodes["q" + std::to_string(i + 1)] = g.nodes.at(nids[i]);
  }
  for (std::size_t i = 0; i < eids.size(); ++i) {
    Hypergraph::Edge e = g.edges.at(eids[i]);
    for (auto& a : e.attach) a = nmap.at(a);
    out.edges["f" + std::to_string(i + 1)] = std::move(e);
  }
  return out;
}

}  // namespace hillgts
