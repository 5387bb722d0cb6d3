#include "hillgts/logic_io.hpp"

#include <cctype>
#include <sstream>

#include "hillgts/syntax.hpp"

namespace hillgts {

namespace {

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

bool blank(const std::string& s) {
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  return true;
}

std::string word_at(const std::string& s, std::size_t& i) {
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  std::size_t start = i;
  while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) ||
                          s[i] == '_' || s[i] == '\''))
    ++i;
  return s.substr(start, i - start);
}

}  // namespace

HillFile parse_hill(const std::string& text, const std::string& filename) {
  HillFile out;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = strip_comment(raw);
    if (blank(line)) continue;
    std::size_t i = 0;
    std::string kind = word_at(line, i);
    std::string name = word_at(line, i);
    if (name.empty())
      throw ParseError(filename, lineno, static_cast<int>(i) + 1,
                       "expected a declaration name");
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    if (kind == "formula") {
      if (i >= line.size() || line[i] != '=')
        throw ParseError(filename, lineno, static_cast<int>(i) + 1,
                         "expected '=' after the formula name");
      out.formulas.emplace_back(
          name, parse_formula(line.substr(i + 1), filename, lineno - 1));
    } else if (kind == "sequent") {
      if (i >= line.size() || line[i] != ':')
        throw ParseError(filename, lineno, static_cast<int>(i) + 1,
                         "expected ':' after the sequent name");
      out.sequents.emplace_back(
          name, parse_sequent(line.substr(i + 1), filename, lineno - 1));
    } else {
      throw ParseError(filename, lineno, 1,
                       "expected 'formula' or 'sequent', got '" + kind + "'");
    }
  }
  return out;
}

std::string print_hill(const HillFile& f) {
  std::ostringstream out;
  for (const auto& [name, formula] : f.formulas)
    out << "formula " << name << " = " << print_formula(formula) << "\n";
  for (const auto& [name, seq] : f.sequents)
    out << "sequent " << name << " : " << print_sequent(seq) << "\n";
  return out.str();
}

namespace {

struct PrfParser {
  const std::string& text;
  const std::string& file;
  std::size_t i = 0;
  int line = 1, col = 1;

  void bump() {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  }

  void skip_space() {
    while (i < text.size()) {
      if (text[i] == '#') {
        while (i < text.size() && text[i] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(text[i]))) {
        bump();
      } else {
        return;
      }
    }
  }

  [[noreturn]] void fail(const std::string& what) {
    throw ParseError(file, line, col, what);
  }

  void expect(char c) {
    skip_space();
    if (i >= text.size() || text[i] != c)
      fail(std::string("expected '") + c + "'");
    bump();
  }

  ProofPtr node() {
    expect('(');
    skip_space();
    std::string name;
    while (i < text.size() &&
           std::isalnum(static_cast<unsigned char>(text[i]))) {
      name += text[i];
      bump();
    }
    auto tag = rule_from_name(name);
    if (!tag) fail("unknown rule '" + name + "'");
    skip_space();
    if (i >= text.size() || text[i] != '{') fail("expected '{'");
    int seq_line = line;
    bump();
    std::string body;
    while (i < text.size() && text[i] != '}') {
      body += text[i];
      bump();
    }
    if (i >= text.size()) fail("unterminated statement");
    bump();
    Sequent conclusion = parse_sequent(body, file, seq_line - 1);
    std::vector<ProofPtr> premises;
    skip_space();
    while (i < text.size() && text[i] == '(') premises.push_back(node());
    expect(')');
    skip_space();
    return proof(*tag, std::move(conclusion), std::move(premises));
  }
};

void print_node(const ProofTree& t, int indent, std::ostringstream& out) {
  out << std::string(indent, ' ') << "(" << rule_name(t.rule) << " {"
      << print_sequent(t.conclusion) << "}";
  for (const auto& p : t.premises) {
    out << "\n";
    print_node(*p, indent + 2, out);
  }
  out << ")";
}

}  // namespace

ProofPtr parse_proof(const std::string& text, const std::string& filename) {
  PrfParser p{text, filename};
  ProofPtr root = p.node();
  p.skip_space();
  if (p.i < text.size()) p.fail("trailing input after the derivation");
  return root;
}

std::string print_proof(const ProofTree& tree) {
  std::ostringstream out;
  print_node(tree, 0, out);
  out << "\n";
  return out.str();
}

}  // namespace hillgts
