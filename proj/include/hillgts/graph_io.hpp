#pragma once

#include <string>
#include <vector>

#include "hillgts/dpo.hpp"
#include "hillgts/parse_error.hpp"

namespace hillgts {

// Graph files: one `typegraph` block followed by one or more `graph` blocks.
//
//   typegraph TG
//   nodetype a1
//   edgetype A : a1 a2
//   graph G over TG
//   node x1 : a1
//   edge e1 : A ( x1 x2 )
//
// `#` starts a comment running to end of line.
struct HgFile {
  TypeGraphPtr type_graph;
  std::vector<Hypergraph> graphs;
};

HgFile parse_hg(const std::string& text, const std::string& filename = "<hg>");
std::string print_hg(const HgFile& f);
std::string print_hg_graph(const Hypergraph& g);  // graph block only

// System files: a typegraph, named rules and an optional start graph.
//
//   rule p interface ( y1 : a1 )
//   lhs { node y2 : a2  edge c : C ( y1 ) }
//   rhs { ... }
//   start { node x1 : a1 ... }
Gts parse_gts(const std::string& text, const std::string& filename = "<gts>");
std::string print_gts(const Gts& system);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace hillgts
