#pragma once

#include <stdexcept>
#include <string>

namespace hillgts {

struct ParseError : std::runtime_error {
  ParseError(const std::string& file, int line, int col, const std::string& what)
      : std::runtime_error(file + ":" + std::to_string(line) + ":" +
                           std::to_string(col) + ": " + what),
        line(line),
        col(col) {}
  int line, col;
};

}  // namespace hillgts
