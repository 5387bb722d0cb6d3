#include "hillgts/graph_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace hillgts {

namespace {

struct Token {
  std::string text;
  int line, col;
};

struct Scanner {
  std::string file;
  std::vector<Token> toks;
  std::size_t pos = 0;

  Scanner(const std::string& text, const std::string& filename) : file(filename) {
    int line = 1, col = 1;
    std::size_t i = 0;
    auto bump = [&](char c) {
      if (c == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    };
    while (i < text.size()) {
      char c = text[i];
      if (c == '#') {
        while (i < text.size() && text[i] != '\n') bump(text[i++]);
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        bump(c);
        ++i;
        continue;
      }
      int tl = line, tc = col;
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'') {
        std::string word;
        while (i < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_' ||
                text[i] == '\'')) {
          word += text[i];
          bump(text[i++]);
        }
        toks.push_back(Token{word, tl, tc});
      } else {
        toks.push_back(Token{std::string(1, c), tl, tc});
        bump(c);
        ++i;
      }
    }
  }

  bool at_end() const { return pos >= toks.size(); }
  const Token& peek() const {
    if (at_end()) {
      static Token eof{"", 0, 0};
      return eof;
    }
    return toks[pos];
  }
  bool looking_at(const std::string& s) const { return !at_end() && toks[pos].text == s; }
  Token next() {
    if (at_end()) fail("unexpected end of input");
    return toks[pos++];
  }
  void expect(const std::string& s) {
    Token t = next();
    if (t.text != s) fail("expected '" + s + "', found '" + t.text + "'", t);
  }
  std::string ident() {
    Token t = next();
    if (t.text.empty() ||
        !(std::isalpha(static_cast<unsigned char>(t.text[0])) || t.text[0] == '_'))
      fail("expected identifier, found '" + t.text + "'", t);
    return t.text;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = at_end() ? (toks.empty() ? Token{"", 1, 1} : toks.back()) : toks[pos];
    throw ParseError(file, t.line, t.col, msg);
  }
  [[noreturn]] void fail(const std::string& msg, const Token& t) const {
    throw ParseError(file, t.line, t.col, msg);
  }
};

TypeGraphPtr parse_typegraph(Scanner& s) {
  auto tg = std::make_shared<TypeGraph>();
  s.expect("typegraph");
  tg->name = s.ident();
  while (s.looking_at("nodetype") || s.looking_at("edgetype")) {
    if (s.looking_at("nodetype")) {
      s.next();
      tg->node_types.push_back(s.ident());
    } else {
      s.next();
      std::string label = s.ident();
      s.expect(":");
      std::vector<std::string> ar;
      while (!s.at_end() && !s.looking_at("nodetype") && !s.looking_at("edgetype") &&
             !s.looking_at("graph") && !s.looking_at("rule") && !s.looking_at("start"))
        ar.push_back(s.ident());
      if (tg->edge_types.count(label))
        s.fail("edge type '" + label + "' declared twice");
      tg->edge_types[label] = ar;
    }
  }
  auto errs = tg->validate();
  if (!errs.empty()) s.fail("invalid type graph: " + errs.front());
  return tg;
}

void parse_body_item(Scanner& s, Hypergraph& g) {
  if (s.looking_at("node")) {
    s.next();
    std::string id = s.ident();
    s.expect(":");
    std::string t = s.ident();
    if (g.nodes.count(id)) s.fail("node '" + id + "' declared twice");
    g.nodes[id] = t;
  } else {
    s.expect("edge");
    std::string id = s.ident();
    s.expect(":");
    std::string t = s.ident();
    s.expect("(");
    Hypergraph::Edge e;
    e.type = t;
    while (!s.looking_at(")")) e.attach.push_back(s.ident());
    s.expect(")");
    if (g.edges.count(id)) s.fail("edge '" + id + "' declared twice");
    g.edges[id] = e;
  }
}

Hypergraph parse_graph_block(Scanner& s, const TypeGraphPtr& tg) {
  s.expect("graph");
  Hypergraph g;
  g.name = s.ident();
  g.type_graph = tg;
  s.expect("over");
  std::string ref = s.ident();
  if (tg && ref != tg->name)
    s.fail("graph references type graph '" + ref + "', file declares '" + tg->name + "'");
  while (s.looking_at("node") || s.looking_at("edge")) parse_body_item(s, g);
  auto errs = validate(g);
  if (!errs.empty()) s.fail("invalid graph '" + g.name + "': " + errs.front());
  return g;
}

Hypergraph parse_braced_body(Scanner& s, const TypeGraphPtr& tg, const std::string& name) {
  Hypergraph g;
  g.name = name;
  g.type_graph = tg;
  s.expect("{");
  while (!s.looking_at("}")) parse_body_item(s, g);
  s.expect("}");
  return g;
}

void print_body(std::ostream& os, const Hypergraph& g, const std::string& indent) {
  for (const auto& [id, t] : g.nodes) os << indent << "node " << id << " : " << t << "\n";
  for (const auto& [id, e] : g.edges) {
    os << indent << "edge " << id << " : " << e.type << " (";
    for (const auto& n : e.attach) os << " " << n;
    os << " )\n";
  }
}

void print_typegraph(std::ostream& os, const TypeGraph& tg) {
  os << "typegraph " << tg.name << "\n";
  for (const auto& t : tg.node_types) os << "nodetype " << t << "\n";
  for (const auto& [label, ar] : tg.edge_types) {
    os << "edgetype " << label << " :";
    for (const auto& t : ar) os << " " << t;
    os << "\n";
  }
}

}  // namespace

HgFile parse_hg(const std::string& text, const std::string& filename) {
  Scanner s(text, filename);
  HgFile f;
  f.type_graph = parse_typegraph(s);
  while (s.looking_at("graph")) f.graphs.push_back(parse_graph_block(s, f.type_graph));
  if (!s.at_end()) s.fail("unexpected token '" + s.peek().text + "'");
  if (f.graphs.empty()) s.fail("file declares no graph");
  return f;
}

std::string print_hg(const HgFile& f) {
  std::ostringstream os;
  print_typegraph(os, *f.type_graph);
  for (const auto& g : f.graphs) {
    os << "\n" << "graph " << (g.name.empty() ? "G" : g.name) << " over "
       << f.type_graph->name << "\n";
    print_body(os, g, "");
  }
  return os.str();
}

std::string print_hg_graph(const Hypergraph& g) {
  HgFile f;
  f.type_graph = g.type_graph;
  f.graphs.push_back(g);
  return print_hg(f);
}

Gts parse_gts(const std::string& text, const std::string& filename) {
  Scanner s(text, filename);
  Gts sys;
  sys.type_graph = parse_typegraph(s);
  while (!s.at_end()) {
    if (s.looking_at("rule")) {
      s.next();
      Rule r;
      r.name = s.ident();
      s.expect("interface");
      s.expect("(");
      while (!s.looking_at(")")) {
        std::string id = s.ident();
        s.expect(":");
        r.interface.emplace_back(id, s.ident());
      }
      s.expect(")");
      s.expect("lhs");
      r.lhs = parse_braced_body(s, sys.type_graph, r.name + ".lhs");
      s.expect("rhs");
      r.rhs = parse_braced_body(s, sys.type_graph, r.name + ".rhs");
      for (const auto& [id, t] : r.interface) {
        r.lhs.nodes.emplace(id, t);
        r.rhs.nodes.emplace(id, t);
      }
      auto rc = validate_rule(r);
      if (!rc.ok()) s.fail("invalid rule '" + r.name + "': " + rc.errors.front());
      sys.rules.push_back(std::move(r));
    } else if (s.looking_at("start")) {
      s.next();
      if (sys.start) s.fail("start graph declared twice");
      sys.start = parse_braced_body(s, sys.type_graph, "start");
      auto errs = validate(*sys.start);
      if (!errs.empty()) s.fail("invalid start graph: " + errs.front());
    } else {
      s.fail("expected 'rule' or 'start', found '" + s.peek().text + "'");
    }
  }
  return sys;
}

std::string print_gts(const Gts& system) {
  std::ostringstream os;
  print_typegraph(os, *system.type_graph);
  for (const auto& r : system.rules) {
    os << "\nrule " << r.name << " interface (";
    for (const auto& [id, t] : r.interface) os << " " << id << " : " << t;
    os << " )\n";
    for (const auto& side : {std::make_pair("lhs", &r.lhs), std::make_pair("rhs", &r.rhs)}) {
      Hypergraph body = *side.second;
      for (const auto& [id, t] : r.interface) {
        (void)t;
        body.nodes.erase(id);
      }
      os << side.first << " {\n";
      print_body(os, body, "  ");
      os << "}\n";
    }
  }
  if (system.start) {
    os << "\nstart {\n";
    print_body(os, *system.start, "  ");
    os << "}\n";
  }
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

}  // namespace hillgts
