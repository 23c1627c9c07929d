#include "andorcut/graph.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <sstream>

namespace andorcut {

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::kAtomic:
      return "atomic";
    case NodeKind::kAnd:
      return "and";
    case NodeKind::kOr:
      return "or";
  }
  return "?";
}

std::string to_string(const Cost& cost) {
  return cost.is_infinite() ? std::string("inf") : std::to_string(cost.value());
}

void AndOrGraph::add_atomic(NodeId id, Cost cost) {
  nodes.push_back(Node{std::move(id), NodeKind::kAtomic, cost});
}

void AndOrGraph::add_gate(NodeId id, NodeKind kind) {
  nodes.push_back(Node{std::move(id), kind, std::nullopt});
}

void AndOrGraph::add_edge(NodeId from, NodeId to) {
  edges.push_back(Edge{std::move(from), std::move(to)});
}

namespace {

bool is_valid_id(const NodeId& id) {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](unsigned char c) {
    return c > 0x20 && c != 0x7f;
  });
}

std::string join(const std::vector<NodeId>& ids) {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += ", ";
    out += id;
  }
  return out;
}

// Tarjan's SCC over the well-formed part of the graph; returns every
// strongly connected component that contains a cycle.
std::vector<std::vector<std::size_t>> cyclic_components(
    const std::vector<std::vector<std::size_t>>& succ) {
  const std::size_t n = succ.size();
  constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> result;
  std::size_t counter = 0;

  // Iterative to survive long dependency chains.
  struct Frame {
    std::size_t node;
    std::size_t next_child;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.next_child < succ[f.node].size()) {
        std::size_t w = succ[f.node][f.next_child++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.node] = std::min(low[f.node], index[w]);
        }
        continue;
      }
      const std::size_t v = f.node;
      frames.pop_back();
      if (!frames.empty()) {
        low[frames.back().node] = std::min(low[frames.back().node], low[v]);
      }
      if (low[v] != index[v]) continue;
      std::vector<std::size_t> component;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        component.push_back(w);
      } while (w != v);
      bool self_loop =
          std::find(succ[v].begin(), succ[v].end(), v) != succ[v].end();
      if (component.size() > 1 || self_loop) {
        std::sort(component.begin(), component.end());
        result.push_back(std::move(component));
      }
    }
  }
  return result;
}

}  // namespace

std::vector<Violation> validate(const AndOrGraph& graph) {
  std::vector<Violation> out;
  auto report = [&](ViolationKind kind, std::vector<NodeId> nodes,
                    std::string message) {
    out.push_back(Violation{kind, std::move(nodes), std::move(message)});
  };

  std::map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    const Node& node = graph.nodes[i];
    if (!is_valid_id(node.id)) {
      report(ViolationKind::kBadId, {node.id},
             "node id '" + node.id + "' is empty or contains whitespace");
    }
    if (!index.emplace(node.id, i).second) {
      report(ViolationKind::kDuplicateNode, {node.id},
             "duplicate node '" + node.id + "'");
    }
    const bool atomic = node.kind == NodeKind::kAtomic;
    if (atomic && !node.cost) {
      report(ViolationKind::kCostMismatch, {node.id},
             "atomic node '" + node.id + "' has no cost");
    } else if (!atomic && node.cost) {
      report(ViolationKind::kCostMismatch, {node.id},
             std::string(to_string(node.kind)) + " node '" + node.id +
                 "' carries a cost");
    }
  }

  std::uint64_t total = 0;
  bool overflow = false;
  for (const Node& node : graph.nodes) {
    if (!node.cost || node.cost->is_infinite()) continue;
    if (total > std::numeric_limits<std::uint64_t>::max() - node.cost->value()) {
      overflow = true;
      break;
    }
    total += node.cost->value();
  }
  if (overflow) {
    report(ViolationKind::kCostOverflow, {},
           "sum of finite costs overflows 64-bit arithmetic");
  }

  std::vector<std::vector<std::size_t>> succ(graph.nodes.size());
  std::vector<std::size_t> in_degree(graph.nodes.size(), 0);
  std::set<std::pair<std::string_view, std::string_view>> seen;
  for (const Edge& edge : graph.edges) {
    auto from = index.find(edge.from);
    auto to = index.find(edge.to);
    if (from == index.end() || to == index.end()) {
      std::vector<NodeId> missing;
      if (from == index.end()) missing.push_back(edge.from);
      if (to == index.end()) missing.push_back(edge.to);
      report(ViolationKind::kDanglingEdge, {edge.from, edge.to},
             "edge " + edge.from + " -> " + edge.to + " names unknown node(s) " +
                 join(missing));
      continue;
    }
    if (!seen.emplace(edge.from, edge.to).second) {
      report(ViolationKind::kDuplicateEdge, {edge.from, edge.to},
             "duplicate edge " + edge.from + " -> " + edge.to);
      continue;
    }
    succ[from->second].push_back(to->second);
    ++in_degree[to->second];
  }

  for (const auto& component : cyclic_components(succ)) {
    std::vector<NodeId> ids;
    for (std::size_t i : component) ids.push_back(graph.nodes[i].id);
    report(ViolationKind::kCycle, ids, "cycle through " + join(ids));
  }

  auto target = index.find(graph.target);
  if (target == index.end()) {
    report(ViolationKind::kMissingTarget, {graph.target},
           "target '" + graph.target + "' does not exist");
  } else if (graph.nodes[target->second].kind != NodeKind::kAtomic) {
    report(ViolationKind::kTargetNotAtomic, {graph.target},
           "target '" + graph.target + "' is not atomic");
  }

  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    const Node& node = graph.nodes[i];
    if (node.kind != NodeKind::kAtomic && in_degree[i] == 0 &&
        index.at(node.id) == i) {
      report(ViolationKind::kGateWithoutInput, {node.id},
             std::string(to_string(node.kind)) + " gate '" + node.id +
                 "' has no input");
    }
  }
  return out;
}

namespace {

std::string summarize(const std::vector<Violation>& violations) {
  std::ostringstream os;
  os << "invalid graph (" << violations.size() << " violation"
     << (violations.size() == 1 ? "" : "s") << ")";
  for (const auto& v : violations) os << "\n  " << v.message;
  return os.str();
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : std::runtime_error(summarize(violations)),
      violations_(std::move(violations)) {}

IndexedGraph::IndexedGraph(const AndOrGraph& graph) {
  if (auto violations = validate(graph); !violations.empty()) {
    throw ValidationError(std::move(violations));
  }
  const std::size_t n = graph.nodes.size();
  ids_.reserve(n);
  kinds_.reserve(n);
  costs_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Node& node = graph.nodes[i];
    ids_.push_back(node.id);
    kinds_.push_back(node.kind);
    costs_.push_back(node.cost.value_or(Cost::finite(0)));
    by_id_.emplace(node.id, static_cast<Index>(i));
  }
  preds_.resize(n);
  std::vector<std::vector<Index>> succ(n);
  std::vector<std::size_t> in_degree(n, 0);
  for (const Edge& edge : graph.edges) {
    Index from = by_id_.at(edge.from);
    Index to = by_id_.at(edge.to);
    preds_[to].push_back(from);
    succ[from].push_back(to);
    ++in_degree[to];
  }
  // Kahn's algorithm; ties resolved by node order so the result is stable.
  topo_.reserve(n);
  std::vector<Index> ready;
  for (Index i = 0; i < n; ++i) {
    if (in_degree[i] == 0) ready.push_back(i);
  }
  std::reverse(ready.begin(), ready.end());
  while (!ready.empty()) {
    Index v = ready.back();
    ready.pop_back();
    topo_.push_back(v);
    for (Index w : succ[v]) {
      if (--in_degree[w] == 0) ready.push_back(w);
    }
  }
  target_ = by_id_.at(graph.target);
}

std::optional<IndexedGraph::Index> IndexedGraph::find(std::string_view id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

IndexedGraph::Index IndexedGraph::index_of(std::string_view id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) {
    throw std::out_of_range("unknown node '" + std::string(id) + "'");
  }
  return it->second;
}

std::vector<IndexedGraph::Index> IndexedGraph::backward_reachable(Index from) const {
  std::vector<std::uint8_t> seen(size(), 0);
  std::vector<Index> stack{from};
  seen[from] = 1;
  while (!stack.empty()) {
    Index v = stack.back();
    stack.pop_back();
    for (Index p : preds_[v]) {
      if (!seen[p]) {
        seen[p] = 1;
        stack.push_back(p);
      }
    }
  }
  std::vector<Index> out;
  for (Index i = 0; i < size(); ++i) {
    if (seen[i]) out.push_back(i);
  }
  return out;
}

std::vector<std::uint8_t> IndexedGraph::evaluate(
    std::span<const std::uint8_t> compromised) const {
  std::vector<std::uint8_t> value(size(), 0);
  for (Index v : topo_) {
    const auto& preds = preds_[v];
    switch (kinds_[v]) {
      case NodeKind::kAtomic: {
        bool up = !compromised[v];
        for (auto it = preds.begin(); up && it != preds.end(); ++it) up = value[*it];
        value[v] = up;
        break;
      }
      case NodeKind::kAnd:
        value[v] = std::all_of(preds.begin(), preds.end(),
                               [&](Index p) { return value[p] != 0; });
        break;
      case NodeKind::kOr:
        value[v] = std::any_of(preds.begin(), preds.end(),
                               [&](Index p) { return value[p] != 0; });
        break;
    }
  }
  return value;
}

namespace {

std::vector<std::uint8_t> compromise_mask(const IndexedGraph& graph,
                                          const CompromiseSet& compromised) {
  std::vector<std::uint8_t> mask(graph.size(), 0);
  for (const NodeId& id : compromised) {
    auto i = graph.find(id);
    if (!i) throw std::invalid_argument("unknown node '" + id + "'");
    if (!graph.is_compromisable(*i)) {
      throw std::invalid_argument("node '" + id + "' cannot be compromised");
    }
    mask[*i] = 1;
  }
  return mask;
}

}  // namespace

std::map<NodeId, bool> evaluate(const AndOrGraph& graph,
                                const CompromiseSet& compromised) {
  IndexedGraph indexed(graph);
  auto value = indexed.evaluate(compromise_mask(indexed, compromised));
  std::map<NodeId, bool> out;
  for (IndexedGraph::Index i = 0; i < indexed.size(); ++i) {
    out.emplace(indexed.id(i), value[i] != 0);
  }
  return out;
}

bool is_disrupted(const IndexedGraph& graph, const CompromiseSet& compromised) {
  return !graph.evaluate(compromise_mask(graph, compromised))[graph.target()];
}

bool is_disrupted(const AndOrGraph& graph, const CompromiseSet& compromised) {
  return is_disrupted(IndexedGraph(graph), compromised);
}

Composition composition(const AndOrGraph& graph) {
  Composition c;
  for (const Node& node : graph.nodes) {
    switch (node.kind) {
      case NodeKind::kAtomic:
        ++c.atomic;
        break;
      case NodeKind::kAnd:
        ++c.and_gates;
        break;
      case NodeKind::kOr:
        ++c.or_gates;
        break;
    }
  }
  return c;
}

}  // namespace andorcut
