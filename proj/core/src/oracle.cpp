#include "andorcut/oracle.hpp"

#include <algorithm>
#include <numeric>

namespace andorcut {

std::vector<IndexedGraph::Index> compromisable_ancestors(const IndexedGraph& graph,
                                                         IndexedGraph::Index target) {
  std::vector<IndexedGraph::Index> out;
  for (auto i : graph.backward_reachable(target)) {
    if (graph.is_compromisable(i)) out.push_back(i);
  }
  return out;
}

namespace {

bool disrupted(const IndexedGraph& graph, IndexedGraph::Index target,
               const std::vector<std::uint8_t>& mask) {
  return !graph.evaluate(mask)[target];
}

}  // namespace

std::optional<CriticalSet> brute_force_min_cut(const IndexedGraph& graph,
                                               IndexedGraph::Index target,
                                               std::size_t cap) {
  const auto candidates = compromisable_ancestors(graph, target);
  const std::size_t m = candidates.size();
  if (m > cap) {
    throw OracleCapExceeded("oracle limited to " + std::to_string(cap) +
                            " candidate nodes, graph has " + std::to_string(m));
  }
  std::vector<Weight> cost(m);
  for (std::size_t i = 0; i < m; ++i) cost[i] = graph.cost(candidates[i]).value();
  std::vector<Weight> sorted_costs = cost;
  std::sort(sorted_costs.begin(), sorted_costs.end());

  std::optional<Weight> best;
  std::vector<std::size_t> best_members;
  std::vector<std::uint8_t> mask(graph.size(), 0);
  std::vector<std::size_t> pick;
  Weight cheapest_k = 0;  // sum of the k cheapest candidate costs

  for (std::size_t k = 0; k <= m; ++k) {
    if (k > 0) cheapest_k += sorted_costs[k - 1];
    if (best && cheapest_k >= *best) break;
    // lexicographic k-combinations of 0..m-1
    pick.resize(k);
    std::iota(pick.begin(), pick.end(), 0);
    for (;;) {
      Weight total = 0;
      for (std::size_t i : pick) total += cost[i];
      if (!best || total < *best) {
        for (std::size_t i : pick) mask[candidates[i]] = 1;
        if (disrupted(graph, target, mask)) {
          best = total;
          best_members = pick;
        }
        for (std::size_t i : pick) mask[candidates[i]] = 0;
      }
      std::size_t pos = k;
      while (pos > 0 && pick[pos - 1] == m - k + pos - 1) --pos;
      if (pos == 0) break;
      ++pick[pos - 1];
      for (std::size_t j = pos; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  if (!best) return std::nullopt;

  CriticalSet result;
  for (std::size_t i : best_members) {
    result.nodes.push_back(CriticalNode{graph.id(candidates[i]), cost[i]});
  }
  std::sort(result.nodes.begin(), result.nodes.end(),
            [](const CriticalNode& a, const CriticalNode& b) { return a.id < b.id; });
  result.total_cost = *best;
  return result;
}

std::optional<CriticalSet> brute_force_min_cut(const AndOrGraph& graph, const NodeId& target,
                                               std::size_t cap) {
  IndexedGraph indexed(graph);
  return brute_force_min_cut(indexed, indexed.index_of(target), cap);
}

VerificationReport verify(const IndexedGraph& graph, IndexedGraph::Index target,
                          const CriticalSet& solution) {
  std::vector<IndexedGraph::Index> members;
  for (const auto& node : solution.nodes) {
    auto i = graph.find(node.id);
    if (!i) throw std::invalid_argument("unknown node '" + node.id + "'");
    if (!graph.is_compromisable(*i)) {
      throw std::invalid_argument("node '" + node.id + "' cannot be compromised");
    }
    members.push_back(*i);
  }
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());

  VerificationReport report;
  std::vector<std::uint8_t> mask(graph.size(), 0);
  for (auto i : members) {
    mask[i] = 1;
    report.recomputed_cost += graph.cost(i).value();
  }
  report.disrupts = disrupted(graph, target, mask);
  if (!report.disrupts) {
    report.violations.push_back("target '" + graph.id(target) + "' remains operational");
  }
  report.claimed_cost_matches = report.recomputed_cost == solution.total_cost;
  if (!report.claimed_cost_matches) {
    report.violations.push_back("claimed cost " + std::to_string(solution.total_cost) +
                                " but members cost " + std::to_string(report.recomputed_cost));
  }
  report.irredundant = true;
  for (auto i : members) {
    mask[i] = 0;
    if (disrupted(graph, target, mask)) {
      report.irredundant = false;
      report.violations.push_back("'" + graph.id(i) + "' is not needed to disrupt the target");
    }
    mask[i] = 1;
  }
  return report;
}

VerificationReport verify(const AndOrGraph& graph, const NodeId& target,
                          const CriticalSet& solution) {
  IndexedGraph indexed(graph);
  return verify(indexed, indexed.index_of(target), solution);
}

}  // namespace andorcut
