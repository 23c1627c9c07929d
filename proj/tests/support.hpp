#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "andorcut/formula.hpp"
#include "andorcut/graph.hpp"

namespace andorcut::testing {

/// Five components a, b, c, d, c1. c1 needs d, d needs either (a and b)
/// or (b and c). Costs a=2 b=5 c=2 d=10, c1 cannot be compromised.
AndOrGraph example_graph();

/// Clauses rendered as sets of signed names ("-a", "c1") through `cnf`'s
/// variable map, for order-insensitive comparison.
std::set<std::set<std::string>> named_clauses(const CnfFormula& cnf);

/// Random formula over variables x0..x{nvars-1}; some subformulas are
/// reused so the result is a DAG.
Formula random_formula(std::mt19937_64& rng, unsigned nvars, unsigned max_depth);

/// Random valid graph with at most `max_atomic` finite-cost atomic nodes and
/// gates shared between several parents. The target "t" has infinite cost.
AndOrGraph random_graph(std::mt19937_64& rng, unsigned max_atomic, unsigned max_gates);

/// Larger, OR-heavy DAG with `leaves` finite-cost leaves reachable from the
/// target; `share` is the probability of reusing an existing node as an
/// input. Harder for the solver than generator output of the same size.
AndOrGraph random_shared_dag(std::mt19937_64& rng, unsigned leaves, double share);

/// Assignment over `vars` with bit i of `mask` giving vars[i].
std::map<NodeId, bool> assignment_from_mask(const std::vector<NodeId>& vars, std::uint64_t mask);

// Property checks shared by the unit and acceptance suites. Each returns an
// empty string on success, otherwise a description of the first failure.

/// For every assignment to the original variables of `f`: `f` holds iff the
/// Tseitin clauses are satisfiable with that assignment fixed, and any model
/// found agrees with it. Small instances are also checked by enumerating
/// the auxiliary variables directly.
std::string check_tseitin_projection(const Formula& f);

/// naive_cnf(f) agrees with f on every assignment.
std::string check_naive_cnf(const Formula& f);

/// Graph semantics and formula evaluation agree for every atomic node under
/// every set of compromised nodes (at most 12 compromisable nodes).
std::string check_formula_agreement(const AndOrGraph& graph);

/// Adding nodes to a disrupting set keeps it disrupting, exhaustively.
std::string check_compromise_monotonic(const AndOrGraph& graph);

/// Raising the cost of one node by `delta` never lowers the optimum and
/// raises it by at most `delta`.
std::string check_cost_monotonic(const AndOrGraph& graph, std::mt19937_64& rng, std::uint64_t delta);

/// Solver optimum equals the brute-force optimum and both witnesses verify
/// as disrupting and irredundant.
std::string check_against_oracle(const AndOrGraph& graph);

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace andorcut::testing
