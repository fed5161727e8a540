#pragma once

#include <stdexcept>
#include <string>

#include "refineguard/ast.hpp"

namespace refineguard::lang {

// Syntax error with a 1-based source position.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, int line, int column)
      : std::runtime_error(message + " at line " + std::to_string(line) + ", column " +
                           std::to_string(column)),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Parses one condition expression; throws ParseError on malformed input.
ExprPtr parse_condition(const std::string& source);

}  // namespace refineguard::lang
