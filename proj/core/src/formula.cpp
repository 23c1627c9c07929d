#include "andorcut/formula.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace andorcut {

Formula FormulaNode::make_var(NodeId id) {
  return Formula(new FormulaNode(FormulaKind::kVar, std::move(id), {}));
}

Formula FormulaNode::make_not(Formula f) {
  return Formula(new FormulaNode(FormulaKind::kNot, {}, {std::move(f)}));
}

Formula FormulaNode::make_and(std::vector<Formula> children) {
  if (children.empty()) throw std::invalid_argument("empty conjunction");
  return Formula(new FormulaNode(FormulaKind::kAnd, {}, std::move(children)));
}

Formula FormulaNode::make_or(std::vector<Formula> children) {
  if (children.empty()) throw std::invalid_argument("empty disjunction");
  return Formula(new FormulaNode(FormulaKind::kOr, {}, std::move(children)));
}

Formula build_formula(const IndexedGraph& graph, IndexedGraph::Index target) {
  // Visiting in topological order guarantees predecessors are built first;
  // only nodes that feed the target are materialized.
  std::vector<std::uint8_t> needed(graph.size(), 0);
  for (auto i : graph.backward_reachable(target)) needed[i] = 1;

  std::vector<Formula> form(graph.size());
  for (auto v : graph.topological_order()) {
    if (!needed[v]) continue;
    std::vector<Formula> inputs;
    const auto preds = graph.predecessors(v);
    switch (graph.kind(v)) {
      case NodeKind::kAtomic:
        if (preds.empty()) {
          form[v] = FormulaNode::make_var(graph.id(v));
          break;
        }
        inputs.reserve(preds.size() + 1);
        inputs.push_back(FormulaNode::make_var(graph.id(v)));
        for (auto p : preds) inputs.push_back(form[p]);
        form[v] = FormulaNode::make_and(std::move(inputs));
        break;
      case NodeKind::kAnd:
      case NodeKind::kOr:
        inputs.reserve(preds.size());
        for (auto p : preds) inputs.push_back(form[p]);
        form[v] = graph.kind(v) == NodeKind::kAnd
                      ? FormulaNode::make_and(std::move(inputs))
                      : FormulaNode::make_or(std::move(inputs));
        break;
    }
  }
  return form[target];
}

Formula build_formula(const AndOrGraph& graph, const NodeId& target) {
  IndexedGraph indexed(graph);
  auto index = indexed.find(target);
  if (!index) throw std::invalid_argument("unknown target node '" + target + "'");
  return build_formula(indexed, *index);
}

Formula negate(Formula f) { return FormulaNode::make_not(std::move(f)); }

bool evaluate_formula(const Formula& f, const std::map<NodeId, bool>& assignment) {
  std::unordered_map<const FormulaNode*, bool> memo;
  struct Frame {
    const FormulaNode* node;
    std::size_t next;
  };
  std::vector<Frame> stack{{f.get(), 0}};
  while (!stack.empty()) {
    Frame& frame = stack.back();
    const FormulaNode* node = frame.node;
    if (node->kind() == FormulaKind::kVar) {
      auto it = assignment.find(node->var());
      if (it == assignment.end()) {
        throw std::out_of_range("no value for variable '" + node->var() + "'");
      }
      memo.emplace(node, it->second);
      stack.pop_back();
      continue;
    }
    const auto& children = node->children();
    if (frame.next < children.size()) {
      const FormulaNode* child = children[frame.next++].get();
      if (!memo.count(child)) stack.push_back({child, 0});
      continue;
    }
    bool value = false;
    switch (node->kind()) {
      case FormulaKind::kNot:
        value = !memo.at(children.front().get());
        break;
      case FormulaKind::kAnd:
        value = std::all_of(children.begin(), children.end(),
                            [&](const Formula& c) { return memo.at(c.get()); });
        break;
      case FormulaKind::kOr:
        value = std::any_of(children.begin(), children.end(),
                            [&](const Formula& c) { return memo.at(c.get()); });
        break;
      case FormulaKind::kVar:
        break;
    }
    memo.emplace(node, value);
    stack.pop_back();
  }
  return memo.at(f.get());
}

namespace {

void render(const FormulaNode& node, bool nested, std::string& out) {
  switch (node.kind()) {
    case FormulaKind::kVar:
      out += node.var();
      return;
    case FormulaKind::kNot:
      out += '!';
      render(*node.children().front(), true, out);
      return;
    case FormulaKind::kAnd:
    case FormulaKind::kOr: {
      const auto& children = node.children();
      const bool parens = nested && children.size() > 1;
      if (parens) out += '(';
      for (std::size_t i = 0; i < children.size(); ++i) {
        if (i) out += node.kind() == FormulaKind::kAnd ? " & " : " | ";
        render(*children[i], true, out);
      }
      if (parens) out += ')';
      return;
    }
  }
}

template <typename Visit>
void for_each_distinct(const Formula& f, Visit&& visit) {
  std::unordered_set<const FormulaNode*> seen{f.get()};
  std::vector<const FormulaNode*> stack{f.get()};
  while (!stack.empty()) {
    const FormulaNode* node = stack.back();
    stack.pop_back();
    visit(*node);
    for (const auto& child : node->children()) {
      if (seen.insert(child.get()).second) stack.push_back(child.get());
    }
  }
}

}  // namespace

std::string to_string(const Formula& f) {
  std::string out;
  render(*f, false, out);
  return out;
}

std::vector<NodeId> variables(const Formula& f) {
  std::set<NodeId> names;
  for_each_distinct(f, [&](const FormulaNode& node) {
    if (node.kind() == FormulaKind::kVar) names.insert(node.var());
  });
  return {names.begin(), names.end()};
}

std::size_t distinct_subformulas(const Formula& f) {
  std::size_t count = 0;
  for_each_distinct(f, [&](const FormulaNode&) { ++count; });
  return count;
}

void VarMap::bind(VarIndex var, NodeId id) {
  if (by_var_.count(var) || by_node_.count(id)) {
    throw std::invalid_argument("variable or node bound twice: " +
                                std::to_string(var) + " / " + id);
  }
  by_node_.emplace(id, var);
  by_var_.emplace(var, std::move(id));
}

std::optional<VarIndex> VarMap::var_of(const NodeId& id) const {
  auto it = by_node_.find(id);
  if (it == by_node_.end()) return std::nullopt;
  return it->second;
}

const NodeId* VarMap::node_of(VarIndex var) const {
  auto it = by_var_.find(var);
  return it == by_var_.end() ? nullptr : &it->second;
}

bool satisfies(const std::vector<Clause>& clauses, const std::vector<bool>& assignment) {
  return std::all_of(clauses.begin(), clauses.end(), [&](const Clause& clause) {
    return std::any_of(clause.begin(), clause.end(), [&](Literal l) {
      return l.var < assignment.size() && assignment[l.var] == l.positive;
    });
  });
}

namespace {

VarMap number_variables(const std::vector<NodeId>& names) {
  VarMap map;
  VarIndex next = 1;
  for (const auto& name : names) map.bind(next++, name);
  return map;
}

using ClauseSet = std::vector<Clause>;

// Sorts and deduplicates literals; false when the clause is a tautology.
bool canonicalize(Clause& clause) {
  std::sort(clause.begin(), clause.end());
  clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
  for (std::size_t i = 1; i < clause.size(); ++i) {
    if (clause[i].var == clause[i - 1].var) return false;
  }
  return true;
}

void canonicalize(ClauseSet& clauses) {
  std::sort(clauses.begin(), clauses.end());
  clauses.erase(std::unique(clauses.begin(), clauses.end()), clauses.end());
}

constexpr std::size_t kNaiveClauseLimit = 1u << 20;

class NaiveConverter {
 public:
  explicit NaiveConverter(const VarMap& map) : map_(map) {}

  const ClauseSet& convert(const FormulaNode& node, bool positive) {
    auto key = std::make_pair(&node, positive);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    ClauseSet result;
    switch (node.kind()) {
      case FormulaKind::kVar:
        result.push_back({Literal{*map_.var_of(node.var()), positive}});
        break;
      case FormulaKind::kNot:
        result = convert(*node.children().front(), !positive);
        break;
      case FormulaKind::kAnd:
      case FormulaKind::kOr: {
        const bool conjunction = (node.kind() == FormulaKind::kAnd) == positive;
        if (conjunction) {
          for (const auto& child : node.children()) {
            const auto& part = convert(*child, positive);
            result.insert(result.end(), part.begin(), part.end());
          }
        } else {
          result.push_back({});
          for (const auto& child : node.children()) {
            const auto& part = convert(*child, positive);
            if (result.size() * part.size() > kNaiveClauseLimit) {
              throw FormulaTooLarge("naive CNF exceeds clause limit");
            }
            ClauseSet product;
            for (const auto& left : result) {
              for (const auto& right : part) {
                Clause merged = left;
                merged.insert(merged.end(), right.begin(), right.end());
                if (canonicalize(merged)) product.push_back(std::move(merged));
              }
            }
            result = std::move(product);
            canonicalize(result);
          }
        }
        break;
      }
    }
    canonicalize(result);
    return memo_.emplace(key, std::move(result)).first->second;
  }

 private:
  struct KeyHash {
    std::size_t operator()(const std::pair<const FormulaNode*, bool>& k) const {
      return std::hash<const void*>()(k.first) * 2 + k.second;
    }
  };

  const VarMap& map_;
  std::unordered_map<std::pair<const FormulaNode*, bool>, ClauseSet, KeyHash> memo_;
};

}  // namespace

CnfFormula naive_cnf(const Formula& f) {
  auto names = variables(f);
  if (names.size() > kNaiveCnfMaxVars) {
    throw FormulaTooLarge("naive CNF limited to " + std::to_string(kNaiveCnfMaxVars) +
                          " variables, formula has " + std::to_string(names.size()));
  }
  CnfFormula cnf;
  cnf.varmap = number_variables(names);
  cnf.nvars = static_cast<VarIndex>(names.size());
  NaiveConverter converter(cnf.varmap);
  cnf.clauses = converter.convert(*f, true);
  return cnf;
}

CnfFormula tseitin(const Formula& f) {
  CnfFormula cnf;
  const auto names = variables(f);
  cnf.varmap = number_variables(names);
  VarIndex next_var = static_cast<VarIndex>(names.size()) + 1;

  struct KeyHash {
    std::size_t operator()(const std::pair<const FormulaNode*, bool>& k) const {
      return std::hash<const void*>()(k.first) * 2 + k.second;
    }
  };
  std::unordered_map<std::pair<const FormulaNode*, bool>, Literal, KeyHash> gate_lit;

  // Strips negations; a leaf resolves straight to its literal.
  auto settle = [&](const FormulaNode* node, bool positive) {
    while (node->kind() == FormulaKind::kNot) {
      node = node->children().front().get();
      positive = !positive;
    }
    return std::make_pair(node, positive);
  };
  auto leaf_literal = [&](const FormulaNode* node, bool positive) {
    return Literal{*cnf.varmap.var_of(node->var()), positive};
  };

  struct Frame {
    const FormulaNode* node;
    bool positive;
    Literal gate;
    std::size_t next = 0;
    std::vector<Literal> inputs;
  };
  std::vector<Frame> stack;
  auto open = [&](const FormulaNode* node, bool positive) {
    Literal gate{next_var++, true};
    cnf.aux.push_back(gate.var);
    gate_lit.emplace(std::make_pair(node, positive), gate);
    stack.push_back(Frame{node, positive, gate, 0, {}});
    stack.back().inputs.reserve(node->children().size());
  };

  Literal root;
  auto [root_node, root_positive] = settle(f.get(), true);
  if (root_node->kind() == FormulaKind::kVar) {
    root = leaf_literal(root_node, root_positive);
  } else {
    open(root_node, root_positive);
    root = stack.back().gate;
  }

  while (!stack.empty()) {
    Frame& frame = stack.back();
    const auto& children = frame.node->children();
    if (frame.next < children.size()) {
      auto [child, positive] = settle(children[frame.next].get(), frame.positive);
      if (child->kind() == FormulaKind::kVar) {
        frame.inputs.push_back(leaf_literal(child, positive));
        ++frame.next;
      } else if (auto it = gate_lit.find({child, positive}); it != gate_lit.end()) {
        frame.inputs.push_back(it->second);
        ++frame.next;
      } else {
        open(child, positive);  // revisits this frame once the child is done
      }
      continue;
    }
    const Literal g = frame.gate;
    const bool conjunction = (frame.node->kind() == FormulaKind::kAnd) == frame.positive;
    if (conjunction) {
      // g <-> l1 & ... & lk
      for (Literal l : frame.inputs) cnf.clauses.push_back({~g, l});
      Clause back{g};
      for (Literal l : frame.inputs) back.push_back(~l);
      cnf.clauses.push_back(std::move(back));
    } else {
      // g <-> l1 | ... | lk
      Clause forward{~g};
      forward.insert(forward.end(), frame.inputs.begin(), frame.inputs.end());
      cnf.clauses.push_back(std::move(forward));
      for (Literal l : frame.inputs) cnf.clauses.push_back({g, ~l});
    }
    stack.pop_back();
  }
  cnf.clauses.push_back({root});
  cnf.nvars = next_var - 1;
  return cnf;
}

}  // namespace andorcut
