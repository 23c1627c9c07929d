#pragma once

/// @file encoder.hpp
/// Weighted Partial MaxSAT encoding of the minimum-cost disruption problem
/// and decoding of solver assignments into critical node sets.
///
/// Hard clauses are the Tseitin encoding of the negated operating formula
/// of the target, plus a unit clause for every reachable atomic node of
/// infinite cost. Each reachable finite, non-zero cost atomic node `n`
/// contributes a soft unit clause `{n}` weighted by its cost; falsifying it
/// means the attacker compromises `n`.

#include <cstdint>
#include <vector>

#include "andorcut/formula.hpp"
#include "andorcut/graph.hpp"

namespace andorcut {

using Weight = std::uint64_t;

inline constexpr Weight kDefaultTop = 1'000'000;

struct SoftClause {
  Weight weight = 1;
  Clause clause;

  friend bool operator==(const SoftClause&, const SoftClause&) = default;
};

struct WcnfInstance {
  VarIndex nvars = 0;
  Weight top = kDefaultTop;
  std::vector<Clause> hard;
  std::vector<SoftClause> soft;
  VarMap varmap;
  std::vector<VarIndex> aux;

  std::size_t clause_count() const { return hard.size() + soft.size(); }
  Weight soft_weight_sum() const;
  /// Total weight of soft clauses falsified by `assignment`.
  Weight falsified_weight(const std::vector<bool>& assignment) const;

  friend bool operator==(const WcnfInstance& a, const WcnfInstance& b) {
    return a.nvars == b.nvars && a.top == b.top && a.hard == b.hard &&
           a.soft == b.soft && a.varmap == b.varmap && a.aux == b.aux;
  }
};

struct SolverStats {
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t branch_nodes = 0;
  double elapsed_ms = 0.0;
};

struct CriticalNode {
  NodeId id;
  Weight cost = 0;

  friend bool operator==(const CriticalNode&, const CriticalNode&) = default;
};

struct CriticalSet {
  std::vector<CriticalNode> nodes;  // sorted by id
  Weight total_cost = 0;
  std::vector<bool> assignment;  // empty when not produced by a solver
  SolverStats stats;

  CompromiseSet ids() const;
};

/// Throws ValidationError for invalid graphs and std::invalid_argument if
/// `target` is unknown or not atomic.
WcnfInstance encode(const AndOrGraph& graph, const NodeId& target);
WcnfInstance encode(const IndexedGraph& graph, IndexedGraph::Index target);

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Compromised nodes are the finite-cost atomic graph variables assigned
/// false. Throws DecodeError if the assignment violates a hard clause.
CriticalSet decode(const WcnfInstance& instance, const IndexedGraph& graph,
                   const std::vector<bool>& assignment);
CriticalSet decode(const WcnfInstance& instance, const AndOrGraph& graph,
                   const std::vector<bool>& assignment);

}  // namespace andorcut
