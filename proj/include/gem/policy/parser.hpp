#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gem/policy/term.hpp"

namespace gem {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class OwnershipError : public ParseError {
 public:
  using ParseError::ParseError;
};

// first_line lets callers embedding policy text in a larger file keep
// line numbers meaningful.
std::vector<Clause> parse_clauses(std::string_view text, std::size_t first_line = 1);
Policy parse_policy(std::string_view text, std::string_view owner, std::size_t first_line = 1);
Clause parse_clause(std::string_view text);
Atom parse_atom(std::string_view text);

}  // namespace gem
