#pragma once

#include <string>
#include <vector>

#include "hillgts/parse_error.hpp"

namespace hillgts::lex {

struct Tok {
  enum class K { Ident, Sym, End };
  K k = K::End;
  std::string s;
  int line = 0, col = 0;
};

inline bool ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '_' || c == '\'';
}

struct Lexer {
  std::string file;
  std::vector<Tok> toks;
  std::size_t pos = 0;

  Lexer(const std::string& text, std::string filename, int line_offset = 0)
      : file(std::move(filename)) {
    int line = 1 + line_offset, col = 1;
    std::size_t i = 0;
    auto push = [&](Tok::K k, std::string s, int c) {
      toks.push_back({k, std::move(s), line, c});
    };
    while (i < text.size()) {
      char c = text[i];
      if (c == '\n') {
        ++line;
        col = 1;
        ++i;
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r') {
        ++col;
        ++i;
        continue;
      }
      if (c == '#') {
        while (i < text.size() && text[i] != '\n') ++i;
        continue;
      }
      int start_col = col;
      if (ident_char(c)) {
        std::size_t j = i;
        while (j < text.size() && ident_char(text[j])) ++j;
        push(Tok::K::Ident, text.substr(i, j - i), start_col);
        col += static_cast<int>(j - i);
        i = j;
        continue;
      }
      auto two = [&](char a, char b) {
        return c == a && i + 1 < text.size() && text[i + 1] == b;
      };
      if (two(':', ':') || two('|', '-') || two('-', 'o')) {
        push(Tok::K::Sym, text.substr(i, 2), start_col);
        i += 2;
        col += 2;
        continue;
      }
      if (std::string("()[]{}.,;:*!^|@=?").find(c) != std::string::npos) {
        push(Tok::K::Sym, std::string(1, c), start_col);
        ++i;
        ++col;
        continue;
      }
      throw ParseError(file, line, start_col,
                       std::string("unexpected character '") + c + "'");
    }
    toks.push_back({Tok::K::End, "", line, col});
  }

  const Tok& peek() const { return toks[pos]; }
  const Tok& peek2() const { return toks[pos + 1 < toks.size() ? pos + 1 : toks.size() - 1]; }

  Tok next() {
    Tok t = toks[pos];
    if (pos + 1 < toks.size()) ++pos;
    return t;
  }

  bool at(const std::string& s) const {
    return peek().k != Tok::K::End && peek().s == s;
  }

  bool at_end() const { return peek().k == Tok::K::End; }

  bool eat(const std::string& s) {
    if (at(s)) {
      next();
      return true;
    }
    return false;
  }

  void expect(const std::string& s) {
    if (!eat(s)) fail("expected '" + s + "'");
  }

  std::string expect_ident(const std::string& what) {
    if (peek().k != Tok::K::Ident) fail("expected " + what);
    return next().s;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    const Tok& t = peek();
    std::string got = t.k == Tok::K::End ? "end of input" : "'" + t.s + "'";
    throw ParseError(file, t.line, t.col, msg + ", got " + got);
  }
};

}  // namespace hillgts::lex
