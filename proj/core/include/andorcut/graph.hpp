#pragma once

/// @file graph.hpp
/// AND/OR dependency graphs: representation, validation and the
/// operational semantics used to decide whether a set of compromised
/// components disables the target.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace andorcut {

using NodeId = std::string;

enum class NodeKind { kAtomic, kAnd, kOr };

std::string_view to_string(NodeKind kind);

/// Attack effort of an atomic component. Infinite marks components that
/// can never be compromised.
class Cost {
 public:
  static constexpr Cost finite(std::uint64_t value) { return Cost(value, false); }
  static constexpr Cost infinite() { return Cost(0, true); }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr bool is_finite() const { return !infinite_; }
  /// Only meaningful for finite costs.
  constexpr std::uint64_t value() const { return value_; }

  friend constexpr bool operator==(const Cost&, const Cost&) = default;

 private:
  constexpr Cost(std::uint64_t value, bool infinite)
      : value_(value), infinite_(infinite) {}

  std::uint64_t value_;
  bool infinite_;
};

std::string to_string(const Cost& cost);

struct Node {
  NodeId id;
  NodeKind kind = NodeKind::kAtomic;
  std::optional<Cost> cost;  // present iff kind == kAtomic

  friend bool operator==(const Node&, const Node&) = default;
};

/// `to` depends on `from`.
struct Edge {
  NodeId from;
  NodeId to;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Plain value type; may hold an invalid graph so that validate() can
/// report on it. Node and edge order is preserved and is significant for
/// formula construction and serialization.
struct AndOrGraph {
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  NodeId target;

  void add_atomic(NodeId id, Cost cost);
  void add_gate(NodeId id, NodeKind kind);
  void add_edge(NodeId from, NodeId to);

  friend bool operator==(const AndOrGraph&, const AndOrGraph&) = default;
};

enum class ViolationKind {
  kBadId,
  kDuplicateNode,
  kCostMismatch,
  kDanglingEdge,
  kDuplicateEdge,
  kCycle,
  kMissingTarget,
  kTargetNotAtomic,
  kGateWithoutInput,
  kCostOverflow,
};

struct Violation {
  ViolationKind kind;
  std::vector<NodeId> nodes;  // offending node ids (edge endpoints for edges)
  std::string message;
};

/// Every violated invariant; empty iff the graph is valid.
std::vector<Violation> validate(const AndOrGraph& graph);

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// Index-based view of a valid graph. Construction validates and throws
/// ValidationError on failure; afterwards the view is immutable.
class IndexedGraph {
 public:
  using Index = std::uint32_t;

  explicit IndexedGraph(const AndOrGraph& graph);

  std::size_t size() const { return ids_.size(); }
  const NodeId& id(Index i) const { return ids_[i]; }
  NodeKind kind(Index i) const { return kinds_[i]; }
  /// Atomic nodes only.
  Cost cost(Index i) const { return costs_[i]; }
  bool is_compromisable(Index i) const {
    return kinds_[i] == NodeKind::kAtomic && costs_[i].is_finite();
  }
  std::span<const Index> predecessors(Index i) const { return preds_[i]; }
  std::span<const Index> topological_order() const { return topo_; }
  Index target() const { return target_; }
  std::optional<Index> find(std::string_view id) const;
  Index index_of(std::string_view id) const;  // throws std::out_of_range

  /// Nodes from which `from` is reachable along dependency edges,
  /// including `from` itself, in ascending index order.
  std::vector<Index> backward_reachable(Index from) const;

  /// Operational value of every node. `compromised` is indexed by node and
  /// must only flag compromisable nodes.
  std::vector<std::uint8_t> evaluate(std::span<const std::uint8_t> compromised) const;

 private:
  std::vector<NodeId> ids_;
  std::vector<NodeKind> kinds_;
  std::vector<Cost> costs_;
  std::vector<std::vector<Index>> preds_;
  std::vector<Index> topo_;
  std::map<NodeId, Index, std::less<>> by_id_;
  Index target_ = 0;
};

using CompromiseSet = std::set<NodeId>;

/// Operational value of every node when `compromised` is under attacker
/// control. Throws ValidationError for invalid graphs and
/// std::invalid_argument if the set names an unknown or non-compromisable
/// node.
std::map<NodeId, bool> evaluate(const AndOrGraph& graph, const CompromiseSet& compromised);

bool is_disrupted(const AndOrGraph& graph, const CompromiseSet& compromised);
bool is_disrupted(const IndexedGraph& graph, const CompromiseSet& compromised);

struct Composition {
  std::size_t atomic = 0;
  std::size_t and_gates = 0;
  std::size_t or_gates = 0;
};

Composition composition(const AndOrGraph& graph);

}  // namespace andorcut
