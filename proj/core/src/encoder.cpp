#include "andorcut/encoder.hpp"

#include <algorithm>
#include <limits>

namespace andorcut {

Weight WcnfInstance::soft_weight_sum() const {
  Weight sum = 0;
  for (const auto& s : soft) sum += s.weight;
  return sum;
}

Weight WcnfInstance::falsified_weight(const std::vector<bool>& assignment) const {
  Weight sum = 0;
  for (const auto& s : soft) {
    if (!satisfies({s.clause}, assignment)) sum += s.weight;
  }
  return sum;
}

CompromiseSet CriticalSet::ids() const {
  CompromiseSet out;
  for (const auto& n : nodes) out.insert(n.id);
  return out;
}

WcnfInstance encode(const IndexedGraph& graph, IndexedGraph::Index target) {
  if (graph.kind(target) != NodeKind::kAtomic) {
    throw std::invalid_argument("target '" + graph.id(target) + "' is not atomic");
  }
  CnfFormula cnf = tseitin(negate(build_formula(graph, target)));

  WcnfInstance instance;
  instance.nvars = cnf.nvars;
  instance.hard = std::move(cnf.clauses);
  instance.aux = std::move(cnf.aux);

  // Graph variables are numbered in sorted id order; walking the bindings
  // keeps the soft clause order aligned with variable numbering.
  Weight sum = 0;
  for (const auto& [var, id] : cnf.varmap.bindings()) {
    const Cost cost = graph.cost(graph.index_of(id));
    if (cost.is_infinite()) {
      instance.hard.push_back({Literal{var, true}});
    } else if (cost.value() > 0) {
      if (sum > std::numeric_limits<Weight>::max() - cost.value() - 1) {
        throw std::overflow_error("soft weight sum overflows");
      }
      sum += cost.value();
      instance.soft.push_back(SoftClause{cost.value(), {Literal{var, true}}});
    }
  }
  instance.top = std::max(kDefaultTop, sum + 1);
  instance.varmap = std::move(cnf.varmap);
  return instance;
}

WcnfInstance encode(const AndOrGraph& graph, const NodeId& target) {
  IndexedGraph indexed(graph);
  auto index = indexed.find(target);
  if (!index) throw std::invalid_argument("unknown target '" + target + "'");
  return encode(indexed, *index);
}

CriticalSet decode(const WcnfInstance& instance, const IndexedGraph& graph,
                   const std::vector<bool>& assignment) {
  if (assignment.size() <= instance.nvars) {
    throw DecodeError("assignment covers " +
                      std::to_string(assignment.empty() ? 0 : assignment.size() - 1) +
                      " of " + std::to_string(instance.nvars) + " variables");
  }
  for (std::size_t i = 0; i < instance.hard.size(); ++i) {
    if (!satisfies({instance.hard[i]}, assignment)) {
      throw DecodeError("assignment violates hard clause #" + std::to_string(i + 1));
    }
  }
  CriticalSet result;
  for (const auto& [var, id] : instance.varmap.bindings()) {
    if (assignment[var]) continue;
    auto index = graph.find(id);
    if (!index) throw DecodeError("variable " + std::to_string(var) +
                                  " maps to unknown node '" + id + "'");
    if (!graph.is_compromisable(*index)) continue;
    const Weight cost = graph.cost(*index).value();
    result.nodes.push_back(CriticalNode{id, cost});
    result.total_cost += cost;
  }
  std::sort(result.nodes.begin(), result.nodes.end(),
            [](const CriticalNode& a, const CriticalNode& b) { return a.id < b.id; });
  result.assignment = assignment;
  return result;
}

CriticalSet decode(const WcnfInstance& instance, const AndOrGraph& graph,
                   const std::vector<bool>& assignment) {
  return decode(instance, IndexedGraph(graph), assignment);
}

}  // namespace andorcut
