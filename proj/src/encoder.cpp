#include "hillgts/encoder.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <tuple>

#include "hillgts/build.hpp"
#include "hillgts/kernel.hpp"

namespace hillgts {

namespace {

std::string pad4(int v) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%04d", v);
  return buf;
}

std::map<std::string, int> compress_colors(
    const std::map<std::string, std::string>& color) {
  std::vector<std::string> keys;
  keys.reserve(color.size());
  for (const auto& [id, c] : color) keys.push_back(c);
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  std::map<std::string, int> rank;
  for (const auto& [id, c] : color) {
    rank[id] = static_cast<int>(
        std::lower_bound(keys.begin(), keys.end(), c) - keys.begin());
  }
  return rank;
}

std::size_t distinct_ranks(const std::map<std::string, int>& rank) {
  std::set<int> seen;
  for (const auto& [id, r] : rank) seen.insert(r);
  return seen.size();
}

}  // namespace

std::vector<std::string> canonical_node_order(
    const Hypergraph& g, const std::map<std::string, int>& pinned) {
  std::vector<std::string> free_ids;
  for (const auto& [id, t] : g.nodes)
    if (!pinned.count(id)) free_ids.push_back(id);
  if (free_ids.empty()) return {};

  struct Inc {
    std::string label;
    int pos;
    std::string edge;
  };
  std::map<std::string, std::vector<Inc>> inc;
  for (const auto& [eid, e] : g.edges)
    for (int i = 0; i < static_cast<int>(e.attach.size()); ++i)
      inc[e.attach[i]].push_back({e.type, i, eid});

  std::map<std::string, int> rank;
  {
    std::map<std::string, std::string> color;
    for (const auto& [id, t] : g.nodes) {
      auto it = pinned.find(id);
      if (it != pinned.end()) {
        color[id] = "#" + pad4(it->second);
        continue;
      }
      std::vector<std::string> desc;
      for (const auto& ic : inc[id])
        desc.push_back(ic.label + ":" + std::to_string(ic.pos));
      std::sort(desc.begin(), desc.end());
      std::string c = "T:" + t + "|";
      for (const auto& d : desc) c += d + ",";
      color[id] = c;
    }
    rank = compress_colors(color);
  }

  std::size_t classes = distinct_ranks(rank);
  for (std::size_t round = 0; round < g.nodes.size(); ++round) {
    std::map<std::string, std::string> color;
    for (const auto& [id, t] : g.nodes) {
      std::vector<std::string> desc;
      for (const auto& ic : inc[id]) {
        std::string s = ic.label + ":" + std::to_string(ic.pos) + ":";
        for (const auto& n2 : g.edges.at(ic.edge).attach)
          s += std::to_string(rank.at(n2)) + ".";
        desc.push_back(s);
      }
      std::sort(desc.begin(), desc.end());
      std::string c = pad4(rank.at(id)) + "|";
      for (const auto& d : desc) c += d + ",";
      color[id] = c;
    }
    auto next = compress_colors(color);
    std::size_t next_classes = distinct_ranks(next);
    rank = std::move(next);
    if (next_classes == classes) break;
    classes = next_classes;
  }

  std::map<int, std::vector<std::string>> by_rank;
  for (const auto& id : free_ids) by_rank[rank.at(id)].push_back(id);
  std::vector<std::vector<std::string>> cls;
  for (auto& [r, v] : by_rank) cls.push_back(std::move(v));

  const unsigned long long kLimit = 40320;
  unsigned long long total = 1;
  bool enumerate = true;
  for (const auto& c : cls) {
    for (unsigned long long k = 2; k <= c.size() && enumerate; ++k) {
      total *= k;
      if (total > kLimit) enumerate = false;
    }
    if (!enumerate) break;
  }

  std::map<std::string, int> fixed_idx;
  {
    std::vector<std::pair<int, std::string>> ps;
    for (const auto& [id, v] : pinned)
      if (g.nodes.count(id)) ps.push_back({v, id});
    std::sort(ps.begin(), ps.end());
    int k = 0;
    for (const auto& [v, id] : ps) fixed_idx[id] = k++;
  }
  const int base = static_cast<int>(fixed_idx.size());

  auto flatten = [&]() {
    std::vector<std::string> order;
    for (const auto& c : cls) order.insert(order.end(), c.begin(), c.end());
    return order;
  };

  if (!enumerate) return flatten();

  auto key_of = [&](const std::vector<std::string>& order) {
    std::map<std::string, int> idx = fixed_idx;
    for (int i = 0; i < static_cast<int>(order.size()); ++i)
      idx[order[i]] = base + i;
    std::string s;
    for (const auto& id : order) s += g.nodes.at(id) + ";";
    std::vector<std::string> ek;
    for (const auto& [eid, e] : g.edges) {
      std::string t = e.type + "(";
      for (const auto& n2 : e.attach) t += pad4(idx.at(n2)) + ",";
      t += ")";
      ek.push_back(std::move(t));
    }
    std::sort(ek.begin(), ek.end());
    for (const auto& t : ek) s += t;
    return s;
  };

  std::vector<std::string> best = flatten();
  std::string best_key = key_of(best);
  for (;;) {
    std::size_t i = 0;
    for (; i < cls.size(); ++i)
      if (std::next_permutation(cls[i].begin(), cls[i].end())) break;
    if (i == cls.size()) break;
    auto cand = flatten();
    auto key = key_of(cand);
    if (key < best_key) {
      best_key = std::move(key);
      best = std::move(cand);
    }
  }
  return best;
}

namespace {

// Canonical orders for one graph: node order from canonical_node_order,
// edge order by (label, attachment indices, id) under the combined index.
struct Layout {
  std::vector<std::string> nodes;
  std::vector<std::string> edges;
};

Layout make_layout(const Hypergraph& g, const std::map<std::string, int>& pinned) {
  Layout lay;
  lay.nodes = canonical_node_order(g, pinned);
  std::map<std::string, int> idx;
  {
    std::vector<std::pair<int, std::string>> ps;
    for (const auto& [id, v] : pinned)
      if (g.nodes.count(id)) ps.push_back({v, id});
    std::sort(ps.begin(), ps.end());
    int k = 0;
    for (const auto& [v, id] : ps) idx[id] = k++;
  }
  for (std::size_t i = 0; i < lay.nodes.size(); ++i)
    idx[lay.nodes[i]] = static_cast<int>(pinned.size() + i);
  std::vector<std::tuple<std::string, std::vector<int>, std::string>> keys;
  for (const auto& [eid, e] : g.edges) {
    std::vector<int> at;
    for (const auto& n : e.attach) at.push_back(idx.at(n));
    keys.emplace_back(e.type, std::move(at), eid);
  }
  std::sort(keys.begin(), keys.end());
  for (const auto& k : keys) lay.edges.push_back(std::get<2>(k));
  return lay;
}

FormulaPtr bang_type(const std::string& node_type) {
  return f_bang(f_atom(node_type));
}

FormulaPtr factor_formula(const Hypergraph& g, const std::string& eid,
                          const std::map<std::string, std::string>& var) {
  const auto& e = g.edges.at(eid);
  std::vector<Formula::EdgeArg> args;
  for (const auto& n : e.attach) args.push_back({t_var(var.at(n)), nullptr});
  return f_edge(e.type, std::move(args));
}

FormulaPtr body_formula(const Hypergraph& g, const std::vector<std::string>& edge_order,
                        const std::map<std::string, std::string>& var) {
  std::vector<FormulaPtr> fs;
  for (const auto& eid : edge_order) fs.push_back(factor_formula(g, eid, var));
  return tensor_of(fs);
}

FormulaPtr edge_universal(const Hypergraph& g, const std::string& eid) {
  const auto& e = g.edges.at(eid);
  std::vector<Formula::EdgeArg> args;
  for (std::size_t i = 0; i < e.attach.size(); ++i)
    args.push_back({t_var("q" + std::to_string(i + 1)), nullptr});
  FormulaPtr f = f_edge(e.type, std::move(args));
  for (std::size_t i = e.attach.size(); i-- > 0;)
    f = f_forall("q" + std::to_string(i + 1),
                 bang_type(g.nodes.at(e.attach[i])), f);
  return f;
}

// Right-nested product of the given subproofs, matching tensor_of.
ProofPtr tensor_proof(const Context& gamma, std::vector<ProofPtr> parts) {
  if (parts.empty()) return one_r(gamma);
  ProofPtr p = std::move(parts.back());
  for (std::size_t i = parts.size() - 1; i-- > 0;)
    p = tens_r(std::move(parts[i]), std::move(p));
  return p;
}

// Consumes entry :: (all q1:T1. ... E(q...)) and proves the atom instantiated
// at the given witness variables.
ProofPtr instantiate_edge(const Context& gamma, const std::string& entry,
                          const FormulaPtr& univ,
                          const std::vector<std::string>& witnesses,
                          NameGen& gen) {
  struct Step {
    FormulaPtr univ;
    std::string in, wit;
  };
  std::vector<Step> steps;
  FormulaPtr cur = univ;
  std::string cur_entry = entry;
  for (const auto& w : witnesses) {
    std::string next = gen.fresh("i");
    steps.push_back({cur, cur_entry, w});
    cur = substitute(cur->b, cur->name, t_var(w));
    cur_entry = next;
    steps.back().in = cur_entry;
  }
  ProofPtr p = lid(gamma, cur_entry, cur);
  std::string below = cur_entry;
  for (std::size_t i = steps.size(); i-- > 0;) {
    std::string outer = (i == 0) ? entry : steps[i - 1].in;
    p = all_l(uid(gamma, steps[i].wit), std::move(p), outer, below,
              steps[i].univ);
    below = outer;
  }
  return p;
}

// eps-introduction for one quantifier: wraps `main` (which proves the body
// with `witness` for the binder) into the package creating location `loc`.
ProofPtr pack(ProofPtr main, const std::string& binder, const FormulaPtr& dom,
              const FormulaPtr& body, const std::string& witness,
              const std::string& loc) {
  Context wit_ctx{{witness, dom}};
  Context id_ctx = ctx_remove(main->conclusion.gamma, witness);
  id_ctx.push_back({binder, dom});
  return ex_r(uid(wit_ctx, witness), id_proof(id_ctx, body), std::move(main),
              binder, loc);
}

// Wraps `main` into the full ex-prefix of `goal`; wit_loc pairs one
// (witness variable, location name) per binder, outermost first.
ProofPtr pack_chain(ProofPtr main, const FormulaPtr& goal,
                    const std::vector<std::pair<std::string, std::string>>& wit_loc) {
  struct Step {
    std::string binder;
    FormulaPtr dom, body;
    std::string witness, loc;
  };
  std::vector<Step> steps;
  FormulaPtr cur = goal;
  for (const auto& [w, l] : wit_loc) {
    steps.push_back({cur->name, cur->a, cur->b, w, l});
    cur = substitute(cur->b, cur->name, t_var(w));
  }
  ProofPtr p = std::move(main);
  for (auto it = steps.rbegin(); it != steps.rend(); ++it)
    p = pack(std::move(p), it->binder, it->dom, it->body, it->witness, it->loc);
  return p;
}

// Folds the listed product entries (in factor order) into one entry of the
// right-nested product type; empty list introduces a unit entry instead.
std::string fold_tensor(ProofPtr& p, const std::vector<std::string>& entries,
                        NameGen& gen) {
  if (entries.empty()) {
    std::string u = gen.fresh("t");
    p = one_l(std::move(p), u);
    return u;
  }
  std::string cur = entries.back();
  for (std::size_t i = entries.size() - 1; i-- > 0;) {
    std::string w = gen.fresh("t");
    p = tens_l(std::move(p), entries[i], cur, w);
    cur = w;
  }
  return cur;
}

// Folds binder variables and their locations back into quantified entries;
// var_loc is in prefix order (outermost first).
std::string fold_ex(ProofPtr& p, std::string body_entry,
                    const std::vector<std::pair<std::string, std::string>>& var_loc,
                    NameGen& gen) {
  std::string cur = std::move(body_entry);
  for (auto it = var_loc.rbegin(); it != var_loc.rend(); ++it) {
    std::string u = gen.fresh("s");
    p = ex_l(std::move(p), u, it->first, it->second, cur);
    cur = u;
  }
  return cur;
}

// One rule side rendered as a body formula: internal nodes packaged under
// their own quantifier prefix, interface nodes referenced through the shared
// variables in `iface_var`.
struct SideEnc {
  Layout lay;
  std::vector<std::string> binders;            // one per lay.nodes entry
  std::map<std::string, std::string> var;      // node id -> variable in factors
  FormulaPtr body;
};

SideEnc encode_side(const Hypergraph& side,
                    const std::vector<std::pair<std::string, std::string>>& iface,
                    const std::map<std::string, std::string>& iface_var,
                    NameGen& gen, const std::string& binder_hint) {
  std::map<std::string, int> pinned;
  for (std::size_t i = 0; i < iface.size(); ++i)
    pinned[iface[i].first] = static_cast<int>(i);
  SideEnc enc;
  enc.lay = make_layout(side, pinned);
  enc.var = iface_var;
  for (std::size_t i = 0; i < enc.lay.nodes.size(); ++i) {
    std::string b = gen.fresh(binder_hint + std::to_string(i + 1));
    enc.binders.push_back(b);
    enc.var[enc.lay.nodes[i]] = b;
  }
  enc.body = body_formula(side, enc.lay.edges, enc.var);
  for (std::size_t i = enc.lay.nodes.size(); i-- > 0;)
    enc.body = f_ex(enc.binders[i], bang_type(side.nodes.at(enc.lay.nodes[i])),
                    enc.body);
  return enc;
}

}  // namespace

Encoding encode_graph(const Hypergraph& g) {
  if (auto errs = validate(g); !errs.empty())
    throw std::invalid_argument("invalid graph: " + errs.front());

  NameGen gen;
  Layout lay = make_layout(g, {});

  Encoding enc;
  enc.graph = g;

  std::map<std::string, std::string> var, binder, loc;
  Context gamma;
  for (std::size_t i = 0; i < lay.nodes.size(); ++i) {
    const std::string& n = lay.nodes[i];
    var[n] = gen.fresh("x" + std::to_string(i + 1));
    loc[n] = gen.fresh("n" + std::to_string(i + 1));
    gamma.push_back({var[n], bang_type(g.nodes.at(n))});
  }
  for (std::size_t i = 0; i < lay.nodes.size(); ++i)
    binder[lay.nodes[i]] = gen.fresh("z" + std::to_string(i + 1));
  for (const auto& n : lay.nodes)
    enc.signature.nodes.push_back(
        {n, var[n], loc[n], bang_type(g.nodes.at(n))});

  std::vector<ProofPtr> comps;
  for (std::size_t j = 0; j < lay.edges.size(); ++j) {
    const std::string& eid = lay.edges[j];
    std::string entry = gen.fresh("u" + std::to_string(j + 1));
    FormulaPtr univ = edge_universal(g, eid);
    enc.signature.edges.push_back({eid, entry, univ});
    std::vector<std::string> wits;
    for (const auto& n : g.edges.at(eid).attach) wits.push_back(var.at(n));
    comps.push_back(instantiate_edge(gamma, entry, univ, wits, gen));
  }

  FormulaPtr goal = body_formula(g, lay.edges, binder);
  for (std::size_t i = lay.nodes.size(); i-- > 0;)
    goal = f_ex(binder.at(lay.nodes[i]), bang_type(g.nodes.at(lay.nodes[i])),
                goal);

  ProofPtr p = tensor_proof(gamma, std::move(comps));
  std::vector<std::pair<std::string, std::string>> wl;
  for (const auto& n : lay.nodes) wl.push_back({var.at(n), loc.at(n)});
  p = pack_chain(std::move(p), goal, wl);

  enc.sequent = p->conclusion;
  enc.derivation = std::move(p);
  return enc;
}

Encoding encode_abstract(const InterfaceGraph& ig) {
  if (auto errs = interface_violations(ig); !errs.empty())
    throw std::invalid_argument("invalid interface graph: " + errs.front());
  if (auto errs = validate(ig.body); !errs.empty())
    throw std::invalid_argument("invalid graph: " + errs.front());

  const Hypergraph& g = ig.body;
  NameGen gen;

  std::map<std::string, int> pinned;
  std::vector<std::string> iface_body;  // body node per interface position
  std::map<std::string, std::string> var;
  for (std::size_t i = 0; i < ig.interface_nodes.size(); ++i) {
    const std::string& b = ig.embedding.at(ig.interface_nodes[i].first);
    pinned[b] = static_cast<int>(i);
    iface_body.push_back(b);
  }

  Encoding enc;
  enc.graph = g;

  Context gamma;
  std::vector<std::string> iface_vars;
  for (std::size_t i = 0; i < iface_body.size(); ++i) {
    const std::string& b = iface_body[i];
    var[b] = gen.fresh(ig.interface_nodes[i].first);
    iface_vars.push_back(var[b]);
    gamma.push_back({var[b], bang_type(g.nodes.at(b))});
    enc.signature.nodes.push_back({b, var[b], "", bang_type(g.nodes.at(b))});
  }

  Layout lay = make_layout(g, pinned);
  std::map<std::string, std::string> binder, loc;
  for (std::size_t i = 0; i < lay.nodes.size(); ++i) {
    const std::string& n = lay.nodes[i];
    var[n] = gen.fresh("x" + std::to_string(i + 1));
    loc[n] = gen.fresh("n" + std::to_string(i + 1));
    binder[n] = gen.fresh("z" + std::to_string(i + 1));
    gamma.push_back({var[n], bang_type(g.nodes.at(n))});
    enc.signature.nodes.push_back(
        {n, var[n], loc[n], bang_type(g.nodes.at(n))});
  }

  std::vector<ProofPtr> comps;
  for (std::size_t j = 0; j < lay.edges.size(); ++j) {
    const std::string& eid = lay.edges[j];
    std::string entry = gen.fresh("u" + std::to_string(j + 1));
    FormulaPtr univ = edge_universal(g, eid);
    enc.signature.edges.push_back({eid, entry, univ});
    std::vector<std::string> wits;
    for (const auto& n : g.edges.at(eid).attach) wits.push_back(var.at(n));
    comps.push_back(instantiate_edge(gamma, entry, univ, wits, gen));
  }

  std::map<std::string, std::string> goal_var = var;
  for (const auto& n : lay.nodes) goal_var[n] = binder.at(n);
  FormulaPtr goal = body_formula(g, lay.edges, goal_var);
  for (std::size_t i = lay.nodes.size(); i-- > 0;)
    goal = f_ex(binder.at(lay.nodes[i]), bang_type(g.nodes.at(lay.nodes[i])),
                goal);

  ProofPtr p = tensor_proof(gamma, std::move(comps));
  std::vector<std::pair<std::string, std::string>> wl;
  for (const auto& n : lay.nodes) wl.push_back({var.at(n), loc.at(n)});
  p = pack_chain(std::move(p), goal, wl);
  for (std::size_t i = iface_vars.size(); i-- > 0;)
    p = all_r(std::move(p), iface_vars[i]);

  enc.sequent = p->conclusion;
  enc.derivation = std::move(p);
  return enc;
}

FormulaPtr encode_rule(const Rule& r) {
  if (auto chk = validate_rule(r); !chk.ok())
    throw std::invalid_argument("invalid rule: " + chk.errors.front());

  NameGen gen;
  std::map<std::string, std::string> iface_var;
  for (const auto& [id, t] : r.interface) iface_var[id] = gen.fresh(id);

  SideEnc lhs = encode_side(r.lhs, r.interface, iface_var, gen, "y");
  SideEnc rhs = encode_side(r.rhs, r.interface, iface_var, gen, "w");

  FormulaPtr f = f_lolli(lhs.body, rhs.body);
  for (std::size_t i = r.interface.size(); i-- > 0;)
    f = f_forall(iface_var.at(r.interface[i].first),
                 bang_type(r.interface[i].second), f);
  return f_bang(f);
}

namespace {

// Shared decoding core: walks an ex-prefixed product of edge atoms, adding
// nodes and edges to `g`. `env` maps in-scope variables to node ids and may
// be preseeded with interface variables. Type information is checked against
// `given` when present, accumulated into `sigs`/`ntypes` otherwise.
struct TypeAccum {
  TypeGraphPtr given;
  std::set<std::string> ntypes;
  std::map<std::string, std::vector<std::string>> sigs;

  void node(const std::string& t) {
    if (given) {
      if (!given->has_node_type(t))
        throw NotNormalForm("unknown node type: " + t);
    } else {
      ntypes.insert(t);
    }
  }
  void edge(const std::string& label, const std::vector<std::string>& args) {
    if (given) {
      const auto* ar = given->arity(label);
      if (!ar) throw NotNormalForm("unknown edge label: " + label);
      if (*ar != args)
        throw NotNormalForm("edge label used at the wrong type: " + label);
      return;
    }
    auto it = sigs.find(label);
    if (it == sigs.end()) {
      sigs[label] = args;
    } else if (it->second != args) {
      throw NotNormalForm("conflicting uses of edge label: " + label);
    }
  }
  TypeGraphPtr build() const {
    if (given) return given;
    auto tg = std::make_shared<TypeGraph>();
    tg->name = "decoded";
    tg->node_types.assign(ntypes.begin(), ntypes.end());
    tg->edge_types = sigs;
    return tg;
  }
};

void decode_into(const FormulaPtr& f, std::map<std::string, std::string> env,
                 Hypergraph& g, TypeAccum& acc, NameGen& gen) {
  FormulaPtr cur = f;
  while (cur && cur->kind == Formula::Kind::Ex) {
    if (!is_node_type(cur->a))
      throw NotNormalForm("quantifier domain is not a node type");
    const std::string& t = cur->a->a->name;
    acc.node(t);
    std::string id = gen.fresh(cur->name);
    env[cur->name] = id;
    g.nodes[id] = t;
    cur = cur->b;
  }
  if (!cur) throw NotNormalForm("missing body");
  if (cur->kind == Formula::Kind::One) return;
  int edge_no = 0;
  std::function<void(const FormulaPtr&)> walk = [&](const FormulaPtr& b) {
    if (b->kind == Formula::Kind::Tensor) {
      walk(b->a);
      walk(b->b);
      return;
    }
    if (b->kind == Formula::Kind::Edge) {
      std::vector<std::string> attach, arg_types;
      for (const auto& arg : b->args) {
        if (!arg.term || arg.term->kind != Term::Kind::Var)
          throw NotNormalForm("edge argument is not a variable");
        auto it = env.find(arg.term->var);
        if (it == env.end())
          throw NotNormalForm("unbound edge argument: " + arg.term->var);
        attach.push_back(it->second);
        arg_types.push_back(g.nodes.at(it->second));
      }
      acc.edge(b->name, arg_types);
      g.edges[gen.fresh("e" + std::to_string(++edge_no))] = {b->name, attach};
      return;
    }
    throw NotNormalForm("body is not a product of edge atoms");
  };
  walk(cur);
}

Rule decode_rule_formula(const FormulaPtr& f) {
  if (!f || f->kind != Formula::Kind::Bang)
    throw NotNormalForm("rule formula must be banged");
  FormulaPtr cur = f->a;
  std::vector<std::pair<std::string, std::string>> binders;  // binder -> type
  while (cur && cur->kind == Formula::Kind::Forall) {
    if (!is_node_type(cur->a))
      throw NotNormalForm("quantifier domain is not a node type");
    for (const auto& [b, t] : binders)
      if (b == cur->name)
        throw NotNormalForm("duplicate interface binder: " + cur->name);
    binders.emplace_back(cur->name, cur->a->a->name);
    cur = cur->b;
  }
  if (!cur || cur->kind != Formula::Kind::Lolli)
    throw NotNormalForm("rule core is not an implication");

  Rule r;
  r.name = "decoded";
  TypeAccum acc;
  std::map<std::string, std::string> env;
  for (std::size_t i = 0; i < binders.size(); ++i) {
    std::string id = "i" + std::to_string(i + 1);
    acc.node(binders[i].second);
    r.interface.emplace_back(id, binders[i].second);
    env[binders[i].first] = id;
    r.lhs.nodes[id] = binders[i].second;
    r.rhs.nodes[id] = binders[i].second;
  }
  {
    NameGen gen;
    for (const auto& [id, t] : r.interface) gen.reserve(id);
    decode_into(cur->a, env, r.lhs, acc, gen);
  }
  {
    NameGen gen;
    for (const auto& [id, t] : r.interface) gen.reserve(id);
    decode_into(cur->b, env, r.rhs, acc, gen);
  }
  TypeGraphPtr tg = acc.build();
  r.lhs.type_graph = tg;
  r.rhs.type_graph = tg;
  r.lhs.name = "lhs";
  r.rhs.name = "rhs";
  if (auto errs = validate(r.lhs); !errs.empty())
    throw NotNormalForm("decoded side invalid: " + errs.front());
  if (auto errs = validate(r.rhs); !errs.empty())
    throw NotNormalForm("decoded side invalid: " + errs.front());
  return r;
}

}  // namespace

Hypergraph decode(const FormulaPtr& f, TypeGraphPtr tg) {
  if (!f) throw NotNormalForm("null formula");
  if (!free_vars(f).empty()) throw NotNormalForm("formula is not closed");
  Hypergraph g;
  g.name = "decoded";
  TypeAccum acc;
  acc.given = std::move(tg);
  NameGen gen;
  decode_into(f, {}, g, acc, gen);
  g.type_graph = acc.build();
  if (auto errs = validate(g); !errs.empty())
    throw NotNormalForm("decoded graph invalid: " + errs.front());
  return g;
}

ProofPtr emit_step_derivation(const StepRecord& step) {
  const Rule& rule = step.rule;
  const Hypergraph& G = step.match.host;
  const Hypergraph& H = step.result;
  const Morphism& m = step.match.m;

  NameGen gen;

  // Host side: canonical naming variables, locations, and edge entries.
  Layout lg = make_layout(G, {});
  std::map<std::string, std::string> gvar, gloc, gedge_entry;
  Context gamma_g;
  for (std::size_t i = 0; i < lg.nodes.size(); ++i) {
    const std::string& n = lg.nodes[i];
    gvar[n] = gen.fresh("x" + std::to_string(i + 1));
    gloc[n] = gen.fresh("n" + std::to_string(i + 1));
    gamma_g.push_back({gvar[n], bang_type(G.nodes.at(n))});
  }
  for (std::size_t j = 0; j < lg.edges.size(); ++j)
    gedge_entry[lg.edges[j]] = gen.fresh("g" + std::to_string(j + 1));

  // Rule formula with binders fresh against every host name.
  std::map<std::string, std::string> iface_var;
  for (const auto& [id, t] : rule.interface) iface_var[id] = gen.fresh(id);
  SideEnc L = encode_side(rule.lhs, rule.interface, iface_var, gen, "y");
  SideEnc R = encode_side(rule.rhs, rule.interface, iface_var, gen, "w");
  FormulaPtr delta = f_lolli(L.body, R.body);
  for (std::size_t i = rule.interface.size(); i-- > 0;)
    delta = f_forall(iface_var.at(rule.interface[i].first),
                     bang_type(rule.interface[i].second), delta);

  // Interface instantiation: matched host variables.
  std::map<std::string, std::string> wit;
  for (const auto& [id, t] : rule.interface)
    wit[id] = gvar.at(m.node_map.at(id));

  struct AStep {
    FormulaPtr univ;
    std::string wvar;
  };
  std::vector<AStep> asteps;
  FormulaPtr curf = delta;
  for (const auto& [id, t] : rule.interface) {
    asteps.push_back({curf, wit.at(id)});
    curf = substitute(curf->b, curf->name, t_var(wit.at(id)));
  }
  FormulaPtr lhs_inst = curf->a;
  FormulaPtr rho = curf->b;

  // Argument premise: the matched part of the host proves the lhs instance.
  ProofPtr arg;
  {
    std::vector<ProofPtr> leaves;
    for (const auto& eid : L.lay.edges) {
      const std::string& img = m.edge_map.at(eid);
      leaves.push_back(
          lid(gamma_g, gedge_entry.at(img), factor_formula(G, img, gvar)));
    }
    arg = tensor_proof(gamma_g, std::move(leaves));
    std::vector<std::pair<std::string, std::string>> wl;
    for (const auto& n : L.lay.nodes) {
      const std::string& img = m.node_map.at(n);
      wl.push_back({gvar.at(img), gloc.at(img)});
    }
    arg = pack_chain(std::move(arg), lhs_inst, wl);
  }

  // Result side: preserved items keep their host names, created nodes take
  // the rhs binder variables, created edges get fresh entries.
  std::map<std::string, std::string> hvar, hloc, hedge_entry;
  for (const auto& [c, gnode] : step.g.node_map) {
    const std::string& hn = step.h.node_map.at(c);
    hvar[hn] = gvar.at(gnode);
    hloc[hn] = gloc.at(gnode);
  }
  Context gamma_full = gamma_g;
  std::vector<std::pair<std::string, std::string>> created_wl;
  for (std::size_t j = 0; j < R.lay.nodes.size(); ++j) {
    const std::string& rn = R.lay.nodes[j];
    const std::string& hn = step.m_star.node_map.at(rn);
    hvar[hn] = R.binders[j];
    hloc[hn] = gen.fresh("m" + std::to_string(j + 1));
    gamma_full.push_back({R.binders[j], bang_type(H.nodes.at(hn))});
    created_wl.push_back({R.binders[j], hloc[hn]});
  }
  for (const auto& [c, ge] : step.g.edge_map)
    hedge_entry[step.h.edge_map.at(c)] = gedge_entry.at(ge);
  std::vector<std::string> created_entries;
  for (std::size_t j = 0; j < R.lay.edges.size(); ++j) {
    std::string entry = gen.fresh("f" + std::to_string(j + 1));
    hedge_entry[step.m_star.edge_map.at(R.lay.edges[j])] = entry;
    created_entries.push_back(std::move(entry));
  }

  // Rebuild the result's representative from preserved and created parts.
  Layout lh = make_layout(H, {});
  std::map<std::string, std::string> hbinder;
  for (std::size_t i = 0; i < lh.nodes.size(); ++i)
    hbinder[lh.nodes[i]] = gen.fresh("z" + std::to_string(i + 1));
  FormulaPtr goal_h = body_formula(H, lh.edges, hbinder);
  for (std::size_t i = lh.nodes.size(); i-- > 0;)
    goal_h = f_ex(hbinder.at(lh.nodes[i]),
                  bang_type(H.nodes.at(lh.nodes[i])), goal_h);

  ProofPtr rest;
  {
    std::vector<ProofPtr> leaves;
    for (const auto& he : lh.edges)
      leaves.push_back(
          lid(gamma_full, hedge_entry.at(he), factor_formula(H, he, hvar)));
    rest = tensor_proof(gamma_full, std::move(leaves));
    std::vector<std::pair<std::string, std::string>> wl;
    for (const auto& n : lh.nodes) wl.push_back({hvar.at(n), hloc.at(n)});
    rest = pack_chain(std::move(rest), goal_h, wl);
  }

  // Fold the created material back into one entry of the rhs instance type.
  std::string rho_entry;
  {
    std::vector<std::string> entries;
    for (const auto& eid : R.lay.edges)
      entries.push_back(hedge_entry.at(step.m_star.edge_map.at(eid)));
    rho_entry = fold_tensor(rest, entries, gen);
    rho_entry = fold_ex(rest, rho_entry, created_wl, gen);
  }

  // Eliminate the rule entry: implication first, then the quantifier chain.
  std::string rentry = gen.fresh("r");
  std::string cur_entry = asteps.empty() ? rentry : gen.fresh("v");
  ProofPtr p = lolli_l(std::move(arg), std::move(rest), rho_entry, cur_entry);
  for (std::size_t k = asteps.size(); k-- > 0;) {
    std::string outer = (k == 0) ? rentry : gen.fresh("v");
    p = all_l(uid(gamma_g, asteps[k].wvar), std::move(p), outer, cur_entry,
              asteps[k].univ);
    cur_entry = outer;
  }

  // Fold the host's representative and discharge it.
  std::vector<std::string> gentries;
  for (const auto& eid : lg.edges) gentries.push_back(gedge_entry.at(eid));
  std::string gv = fold_tensor(p, gentries, gen);
  std::vector<std::pair<std::string, std::string>> gwl;
  for (const auto& n : lg.nodes) gwl.push_back({gvar.at(n), gloc.at(n)});
  gv = fold_ex(p, gv, gwl, gen);
  return lolli_r(std::move(p), gv);
}

bool representatives_equivalent(const FormulaPtr& a, const FormulaPtr& b) {
  try {
    Hypergraph ga = decode(a);
    Hypergraph gb = decode(b);
    return alpha_eq(encode_graph(ga).sequent.goal,
                    encode_graph(gb).sequent.goal);
  } catch (const NotNormalForm&) {
    return alpha_eq(a, b);
  }
}

bool rule_formulas_equivalent(const FormulaPtr& a, const FormulaPtr& b) {
  try {
    Rule ra = decode_rule_formula(a);
    Rule rb = decode_rule_formula(b);
    return alpha_eq(encode_rule(ra), encode_rule(rb));
  } catch (const NotNormalForm&) {
    return alpha_eq(a, b);
  }
}

CorrespondenceReport verify_correspondence(const Hypergraph& g,
                                           const Rule& rule,
                                           std::size_t max_matches) {
  CorrespondenceReport rep;

  std::vector<Hypergraph> engine;
  for (const auto& s : successors(g, {rule}))
    engine.push_back(s.step.result);
  rep.engine_classes = engine.size();

  auto ms = find_matches(rule, g);
  bool truncated = max_matches != 0 && ms.size() > max_matches;
  std::vector<Hypergraph> certified;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (max_matches != 0 && i >= max_matches) break;
    CorrespondenceReport::Instance inst;
    inst.match_index = i;
    try {
      StepRecord step = apply(ms[i]);
      ProofPtr cert = emit_step_derivation(step);
      CheckReport cr = check(cert);
      if (!cr.ok()) {
        inst.status = "error";
        inst.detail = "certificate rejected: " + cr.failures.front().detail;
        rep.mismatches.push_back("match " + std::to_string(i) + ": " +
                                 inst.detail);
      } else {
        Hypergraph decoded = decode(cert->conclusion.goal->b, g.type_graph);
        if (!isomorphic(decoded, step.result)) {
          inst.status = "error";
          inst.detail = "decoded certificate differs from the engine result";
          rep.mismatches.push_back("match " + std::to_string(i) + ": " +
                                   inst.detail);
        } else {
          inst.status = "certified";
          bool seen = false;
          for (const auto& c : certified)
            if (isomorphic(c, decoded)) {
              seen = true;
              break;
            }
          if (!seen) certified.push_back(std::move(decoded));
        }
      }
    } catch (const GluingViolation& v) {
      inst.status = "excluded";
      inst.detail = v.what();
    } catch (const std::exception& e) {
      inst.status = "error";
      inst.detail = e.what();
      rep.mismatches.push_back("match " + std::to_string(i) + ": " + e.what());
    }
    rep.instances.push_back(std::move(inst));
  }
  rep.certified_classes = certified.size();

  if (!truncated) {
    for (const auto& e : engine) {
      bool found = false;
      for (const auto& c : certified)
        if (isomorphic(e, c)) {
          found = true;
          break;
        }
      if (!found)
        rep.mismatches.push_back("engine result class lacks a certificate");
    }
    for (const auto& c : certified) {
      bool found = false;
      for (const auto& e : engine)
        if (isomorphic(e, c)) {
          found = true;
          break;
        }
      if (!found)
        rep.mismatches.push_back("certified class unknown to the engine");
    }
  }
  return rep;
}

std::string CorrespondenceReport::to_text() const {
  std::ostringstream os;
  os << "engine classes: " << engine_classes << "\n";
  os << "certified classes: " << certified_classes << "\n";
  for (const auto& inst : instances) {
    os << "match " << inst.match_index << ": " << inst.status;
    if (!inst.detail.empty()) os << " (" << inst.detail << ")";
    os << "\n";
  }
  for (const auto& m : mismatches) os << "mismatch: " << m << "\n";
  os << (mismatches.empty() ? "correspondence holds" : "correspondence failed")
     << "\n";
  return os.str();
}

}  // namespace hillgts
