#pragma once

/// @file maxsat.hpp
/// Exact Weighted Partial MaxSAT by branch and bound over the soft
/// literals, with a SAT core deciding feasibility of every partial choice.

#include <optional>
#include <variant>
#include <vector>

#include "andorcut/encoder.hpp"

namespace andorcut {

struct SolverBudget {
  std::optional<double> wall_seconds;
  std::optional<std::uint64_t> max_decisions;
};

struct Solution {
  std::vector<bool> assignment;  // slot 0 unused, covers 1..nvars
  Weight cost = 0;
};

struct Optimal {
  Solution solution;
};
struct HardUnsat {};
struct Timeout {
  std::optional<Solution> best;
};

struct SolveResult {
  std::variant<Optimal, HardUnsat, Timeout> outcome;
  SolverStats stats;

  bool is_optimal() const { return std::holds_alternative<Optimal>(outcome); }
  bool is_hard_unsat() const { return std::holds_alternative<HardUnsat>(outcome); }
  bool is_timeout() const { return std::holds_alternative<Timeout>(outcome); }
  /// Optimal or best-so-far solution, if any.
  const Solution* solution() const;
};

/// Minimizes the total weight of falsified soft clauses subject to every
/// hard clause. Deterministic for identical instances when no wall-clock
/// limit is hit.
SolveResult solve(const WcnfInstance& instance, const SolverBudget& budget = {});

}  // namespace andorcut
