// Recursive-descent parser for the formula language.
//
// Grammar (whitespace insignificant, "#" comments to end of line):
//   phi   := iff
//   iff   := imp ("<->" imp)*
//   imp   := or ("->" imp)?                    right-associative
//   or    := and ("|" and)*
//   and   := unary ("&" unary)*
//   unary := "~" unary | "K" "[" agent "]" unary | "Ki" "[" agent "]" unary
//          | "[" phi "]" unary | "<" phi ">" unary | atom
//   atom  := "true" | "false" | ident
//          | "E" "[" agent "," int "]" | "P" "[" agent "," int "]" | "(" phi ")"

#ifndef DBEL_PARSER_HPP
#define DBEL_PARSER_HPP

#include <stdexcept>
#include <string>

#include "dbel/formula.hpp"

namespace dbel {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& message)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

Formula parse(const std::string& source);

}  // namespace dbel

#endif  // DBEL_PARSER_HPP
