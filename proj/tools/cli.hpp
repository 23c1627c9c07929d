#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "andorcut/encoder.hpp"

namespace andorcut::cli {

enum ExitCode : int {
  kOk = 0,
  kNotDisrupted = 1,
  kInputError = 2,
  kInfeasible = 3,
  kTimeout = 4,
};

/// One row of the bench table, also used for `solve --report`.
struct CaseReport {
  std::string id;
  std::size_t g_nodes = 0;
  std::size_t g_atomic = 0;
  std::size_t g_and = 0;
  std::size_t g_or = 0;
  std::size_t ts_vars = 0;
  std::size_t ts_clauses = 0;
  std::optional<Weight> cost;
  double encode_ms = 0;
  double solve_ms = 0;
  std::vector<CriticalNode> solution;
  std::string status;  // optimal | infeasible | timeout | error
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::optional<bool> verified;
  std::optional<Weight> oracle_cost;
  std::string error;

  double time_ms() const { return encode_ms + solve_ms; }
  std::string to_json() const;
};

/// Entry point shared by the executable and the tests. Never throws;
/// returns one of ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace andorcut::cli
