#pragma once

/// @file formula.hpp
/// Propositional formulas built from AND/OR graphs, and their conversion
/// to CNF. Two conversions are provided: a naive distribution-based one
/// (exponential, used as a reference) and the Tseitin encoding used for
/// real instances.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "andorcut/graph.hpp"

namespace andorcut {

enum class FormulaKind { kVar, kNot, kAnd, kOr };

class FormulaNode;

/// Formulas are immutable and shared: a graph node reached along several
/// paths yields one subformula object referenced from every parent.
using Formula = std::shared_ptr<const FormulaNode>;

class FormulaNode {
 public:
  FormulaKind kind() const { return kind_; }
  /// kVar only.
  const NodeId& var() const { return var_; }
  /// One child for kNot, at least one for kAnd/kOr.
  const std::vector<Formula>& children() const { return children_; }

  static Formula make_var(NodeId id);
  static Formula make_not(Formula f);
  static Formula make_and(std::vector<Formula> children);
  static Formula make_or(std::vector<Formula> children);

 private:
  FormulaNode(FormulaKind kind, NodeId var, std::vector<Formula> children)
      : kind_(kind), var_(std::move(var)), children_(std::move(children)) {}

  FormulaKind kind_;
  NodeId var_;
  std::vector<Formula> children_;
};

/// Conditions under which `target` operates: an atomic node contributes
/// its own variable conjoined with its dependencies, AND/OR gates map to
/// conjunction/disjunction over their inputs.
Formula build_formula(const AndOrGraph& graph, const NodeId& target);
Formula build_formula(const IndexedGraph& graph, IndexedGraph::Index target);

Formula negate(Formula f);

/// Throws std::out_of_range if a variable is missing from the assignment.
bool evaluate_formula(const Formula& f, const std::map<NodeId, bool>& assignment);

/// Infix rendering with `&`, `|`, `!`, e.g. "c1 & (d & ((a & b) | (b & c)))".
std::string to_string(const Formula& f);

/// Distinct variable names occurring in `f`, sorted.
std::vector<NodeId> variables(const Formula& f);

/// Number of distinct subformula objects (shared nodes counted once).
std::size_t distinct_subformulas(const Formula& f);

using VarIndex = std::uint32_t;

struct Literal {
  VarIndex var = 0;
  bool positive = true;

  Literal operator~() const { return Literal{var, !positive}; }
  std::int64_t dimacs() const {
    return positive ? static_cast<std::int64_t>(var) : -static_cast<std::int64_t>(var);
  }
  static Literal from_dimacs(std::int64_t value) {
    return value > 0 ? Literal{static_cast<VarIndex>(value), true}
                     : Literal{static_cast<VarIndex>(-value), false};
  }

  friend bool operator==(const Literal&, const Literal&) = default;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

using Clause = std::vector<Literal>;

/// Bidirectional map between graph node ids and variable indices.
class VarMap {
 public:
  void bind(VarIndex var, NodeId id);
  std::optional<VarIndex> var_of(const NodeId& id) const;
  /// nullptr if `var` is not bound to a node.
  const NodeId* node_of(VarIndex var) const;
  std::size_t size() const { return by_var_.size(); }
  bool empty() const { return by_var_.empty(); }
  /// Bindings ordered by variable index.
  const std::map<VarIndex, NodeId>& bindings() const { return by_var_; }

  friend bool operator==(const VarMap& a, const VarMap& b) { return a.by_var_ == b.by_var_; }

 private:
  std::map<VarIndex, NodeId> by_var_;
  std::map<NodeId, VarIndex> by_node_;
};

struct CnfFormula {
  VarIndex nvars = 0;
  std::vector<Clause> clauses;
  VarMap varmap;
  std::vector<VarIndex> aux;  // ascending
};

/// Evaluates every clause under `assignment` (indexed by variable, slot 0
/// unused).
bool satisfies(const std::vector<Clause>& clauses, const std::vector<bool>& assignment);

class FormulaTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kNaiveCnfMaxVars = 24;

/// Logically equivalent CNF over the original variables, via negation
/// normal form and distribution. Clauses are canonical: literals sorted and
/// unique, tautologies removed, clause list sorted and unique. Throws
/// FormulaTooLarge above kNaiveCnfMaxVars variables.
CnfFormula naive_cnf(const Formula& f);

/// Tseitin encoding. Negations are pushed to the leaves first; every
/// distinct gate of the resulting DAG receives one auxiliary variable
/// constrained by a full biconditional, and a final unit clause asserts the
/// root. Graph variables are numbered 1..k in sorted id order, auxiliaries
/// follow in first-visit (pre-order) order.
CnfFormula tseitin(const Formula& f);

}  // namespace andorcut
