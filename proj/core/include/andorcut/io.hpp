#pragma once

/// @file io.hpp
/// Text formats.
///
/// WCNF (classic weighted partial MaxSAT dialect):
///
///     c andorcut wcnf
///     c var 1 = node a
///     c var 6 = aux
///     p wcnf <nvars> <nclauses> <top>
///     <top> -1 -2 0          hard clauses first
///     2 1 0                  then soft clauses
///
/// Graph documents (.aog), one record per line; lines starting with `#`
/// are comments:
///
///     aog 1
///     node a atomic 2
///     node c1 atomic inf
///     node g1 and
///     # g1 depends on a
///     edge a g1
///     target c1

#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "andorcut/encoder.hpp"
#include "andorcut/graph.hpp"

namespace andorcut {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

std::string emit_wcnf(const WcnfInstance& instance);

struct WcnfParseResult {
  WcnfInstance instance;
  /// Non-fatal problems, e.g. a header clause count that disagrees with
  /// the body.
  std::vector<std::string> warnings;
};

/// Throws ParseError for malformed input.
WcnfParseResult parse_wcnf(std::string_view text);

std::string emit_graph(const AndOrGraph& graph);

/// Throws ParseError for syntax errors and ValidationError when the
/// document describes an invalid graph.
AndOrGraph parse_graph(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace andorcut
