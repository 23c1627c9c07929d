#pragma once

/// @file oracle.hpp
/// Reference answers computed from graph semantics alone: exhaustive
/// minimum-cost cut search and independent checking of claimed solutions.

#include <optional>
#include <string>
#include <vector>

#include "andorcut/encoder.hpp"
#include "andorcut/graph.hpp"

namespace andorcut {

inline constexpr std::size_t kDefaultOracleCap = 20;

class OracleCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Minimum-cost disrupting set by subset enumeration over the finite-cost
/// atomic nodes backward-reachable from `target`; nullopt when no subset
/// disrupts it. Subsets are visited in nondecreasing cardinality and the
/// search stops once the `k` cheapest nodes already cost as much as the
/// best cut found. Throws OracleCapExceeded above `cap` candidate nodes.
std::optional<CriticalSet> brute_force_min_cut(const AndOrGraph& graph, const NodeId& target,
                                               std::size_t cap = kDefaultOracleCap);
std::optional<CriticalSet> brute_force_min_cut(const IndexedGraph& graph,
                                               IndexedGraph::Index target,
                                               std::size_t cap = kDefaultOracleCap);

/// Finite-cost atomic nodes backward-reachable from `target`.
std::vector<IndexedGraph::Index> compromisable_ancestors(const IndexedGraph& graph,
                                                         IndexedGraph::Index target);

struct VerificationReport {
  bool disrupts = false;
  bool claimed_cost_matches = false;
  bool irredundant = false;
  Weight recomputed_cost = 0;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

/// Throws std::invalid_argument when the solution names an unknown or
/// non-compromisable node.
VerificationReport verify(const IndexedGraph& graph, IndexedGraph::Index target,
                          const CriticalSet& solution);
VerificationReport verify(const AndOrGraph& graph, const NodeId& target,
                          const CriticalSet& solution);

}  // namespace andorcut
