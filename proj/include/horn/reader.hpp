#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "horn/term.hpp"

namespace horn {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string origin, int line, int column, const std::string& message);

  const std::string& origin() const { return origin_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string origin_;
  int line_;
  int column_;
};

struct ParsedTerm {
  Term term;
  /// Named variables in order of first occurrence; `_` is never listed.
  std::vector<std::pair<std::string, Term>> variables;
};

struct SourceClause {
  Term head;
  Term body;  ///< `true` for facts
  std::string origin;
  int line = 0;
};

/// Parses one term. A trailing end `.` is optional.
ParsedTerm parse_term(std::string_view text, VarSerials& serials);
ParsedTerm parse_term(std::string_view text);

/// Parses `.`-terminated clauses. The first error aborts the whole parse.
std::vector<SourceClause> parse_program(std::string_view text, std::string_view origin, VarSerials& serials);
std::vector<SourceClause> parse_program(std::string_view text, std::string_view origin = "user");

/// True once `text` holds at least one end token; used to gather multi-line
/// REPL input.
bool has_complete_clause(std::string_view text);

}  // namespace horn
