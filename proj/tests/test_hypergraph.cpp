#include "doctest.h"
#include "helpers.hpp"
#include "hillgts/graph_io.hpp"
#include "hillgts/hypergraph.hpp"

using namespace hillgts;
using th::graph;

TEST_CASE("validate accepts the running example") {
  auto tg = th::demo_types();
  CHECK(tg->validate().empty());
  CHECK(validate(th::demo_host(tg)).empty());
}

TEST_CASE("validate reports typing violations") {
  auto tg = th::demo_types();

  auto bad_type = graph(tg, {{"v", "nope"}}, {});
  REQUIRE(validate(bad_type).size() == 1);
  CHECK(validate(bad_type)[0].find("unknown type") != std::string::npos);

  auto bad_arity = graph(tg, {{"v", "a1"}}, {{"e", "A", {"v"}}});
  REQUIRE(validate(bad_arity).size() == 1);
  CHECK(validate(bad_arity)[0].find("attaches 1 nodes, expected 2") != std::string::npos);

  auto bad_position = graph(tg, {{"v", "a1"}, {"w", "a1"}}, {{"e", "A", {"v", "w"}}});
  REQUIRE(validate(bad_position).size() == 1);
  CHECK(validate(bad_position)[0].find("position 2") != std::string::npos);

  auto missing = graph(tg, {{"v", "a1"}}, {{"e", "A", {"v", "ghost"}}});
  CHECK(validate(missing).size() == 1);
}

TEST_CASE("attachment sequences may repeat a node") {
  auto tg = std::make_shared<TypeGraph>();
  tg->name = "T";
  tg->node_types = {"a"};
  tg->edge_types["L"] = {"a", "a"};
  auto loop = graph(tg, {{"v", "a"}}, {{"e", "L", {"v", "v"}}});
  CHECK(validate(loop).empty());
}

TEST_CASE("check_morphism on identity and broken maps") {
  auto tg = th::demo_types();
  auto g = th::demo_host(tg);

  Morphism id{g, g, {}, {}};
  for (const auto& [n, t] : g.nodes) (void)t, id.node_map[n] = n;
  for (const auto& [e, d] : g.edges) (void)d, id.edge_map[e] = e;
  CHECK(check_morphism(id));
  CHECK(id.total());

  Morphism partial = id;
  partial.node_map.erase("x1");
  CHECK_FALSE(partial.total());
  auto v = morphism_violations(partial);
  REQUIRE_FALSE(v.empty());
  CHECK(v[0].find("no image") != std::string::npos);

  Morphism swapped = id;
  swapped.node_map["x2"] = "x3";
  swapped.node_map["x3"] = "x2";
  // x2/x3 have equal types but e_a1/e_b no longer commute with attachment.
  CHECK_FALSE(check_morphism(swapped));
}

TEST_CASE("isomorphism search agrees with brute-force bijection oracle") {
  auto tg = th::demo_types();

  auto host = th::demo_host(tg);
  CHECK(find_isomorphisms(host, host).size() == th::brute_force_iso_count(host, host));

  // Parallel edges of equal type multiply the automorphism count.
  auto par = graph(tg, {{"u", "a1"}, {"v", "a2"}},
                   {{"e1", "A", {"u", "v"}}, {"e2", "A", {"u", "v"}}});
  std::size_t oracle = th::brute_force_iso_count(par, par);
  CHECK(oracle == 2);
  CHECK(find_isomorphisms(par, par).size() == oracle);

  // Two interchangeable isolated nodes plus a marked one.
  auto iso3 = graph(tg, {{"p", "a2"}, {"q", "a2"}, {"r", "a2"}}, {{"m", "B", {"r"}}});
  CHECK(find_isomorphisms(iso3, iso3).size() == th::brute_force_iso_count(iso3, iso3));
}

TEST_CASE("isomorphism is identifier independent") {
  auto tg = th::demo_types();
  auto g = th::demo_host(tg);
  auto relabeled = graph(tg,
                         {{"n_one", "a1"}, {"n_two", "a2"}, {"n_three", "a2"}},
                         {{"k1", "C", {"n_one"}},
                          {"k2", "A", {"n_one", "n_two"}},
                          {"k3", "A", {"n_one", "n_three"}},
                          {"k4", "B", {"n_two"}}});
  auto isos = find_isomorphisms(g, relabeled);
  REQUIRE(isos.size() == 1);
  CHECK(check_morphism(isos[0]));
  CHECK(isos[0].node_map.at("x2") == "n_two");  // B-marker pins the a2 nodes apart

  auto skewed = relabeled;
  skewed.edges["k4"].attach = {"n_three"};
  // Still isomorphic: the marker moved to the other interchangeable node.
  CHECK(isomorphic(g, skewed));

  auto broken = relabeled;
  broken.edges.erase("k4");
  CHECK_FALSE(isomorphic(g, broken));
  CHECK(find_isomorphisms(g, broken).empty());
}

TEST_CASE("isomorphism respects the limit argument") {
  auto tg = th::demo_types();
  auto par = graph(tg, {{"u", "a1"}, {"v", "a2"}},
                   {{"e1", "A", {"u", "v"}}, {"e2", "A", {"u", "v"}}});
  CHECK(find_isomorphisms(par, par, 1).size() == 1);
}

TEST_CASE("disjoint union tags clashing identifiers and keeps injections valid") {
  auto tg = th::demo_types();
  auto g = th::demo_host(tg);
  auto u = disjoint_union(g, g);

  CHECK(u.graph.nodes.size() == 2 * g.nodes.size());
  CHECK(u.graph.edges.size() == 2 * g.edges.size());
  CHECK(validate(u.graph).empty());
  CHECK(check_morphism(u.inj1));
  CHECK(check_morphism(u.inj2));
  CHECK(u.inj1.total());
  CHECK(u.inj2.total());

  // Images are disjoint.
  for (const auto& [a, x] : u.inj1.node_map)
    for (const auto& [b, y] : u.inj2.node_map) {
      (void)a;
      (void)b;
      CHECK(x != y);
    }

  auto h = graph(tg, {{"w", "a2"}}, {{"m", "B", {"w"}}});
  CHECK(isomorphic(disjoint_union(g, h).graph, disjoint_union(h, g).graph));
}

TEST_CASE("interface graphs validate their embedding") {
  auto tg = th::demo_types();
  auto body = th::demo_host(tg);
  auto ig = InterfaceGraph::identity_embedding({{"x1", "a1"}}, body);
  CHECK(interface_violations(ig).empty());

  ig.interface_nodes = {{"x1", "a2"}};
  auto v = interface_violations(ig);
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("type") != std::string::npos);

  auto two = InterfaceGraph::identity_embedding({{"x1", "a1"}, {"x2", "a2"}}, body);
  two.embedding["x2"] = "x1";  // not injective and wrongly typed
  CHECK_FALSE(interface_violations(two).empty());
}

TEST_CASE("graph files round-trip") {
  auto tg = th::demo_types();
  HgFile f;
  f.type_graph = tg;
  f.graphs.push_back(th::demo_host(tg));
  std::string text = print_hg(f);
  HgFile back = parse_hg(text, "t.hg");
  CHECK(typegraphs_equal(*back.type_graph, *tg));
  REQUIRE(back.graphs.size() == 1);
  CHECK(back.graphs[0].nodes == f.graphs[0].nodes);
  REQUIRE(back.graphs[0].edges.size() == f.graphs[0].edges.size());
  for (const auto& [id, e] : f.graphs[0].edges) {
    CHECK(back.graphs[0].edges.at(id).type == e.type);
    CHECK(back.graphs[0].edges.at(id).attach == e.attach);
  }
}

TEST_CASE("graph file errors carry positions") {
  CHECK_THROWS_AS(parse_hg("typegraph T\nnodetype a\ngraph G over T\nnode v : b\n", "x.hg"),
                  ParseError);
  CHECK_THROWS_WITH(parse_hg("typegraph T\n", "x.hg"),
                    doctest::Contains("declares no graph"));
  CHECK_THROWS_WITH(
      parse_hg("typegraph T\nnodetype a\ngraph G over U\nnode v : a\n", "x.hg"),
      doctest::Contains("type graph"));
}
