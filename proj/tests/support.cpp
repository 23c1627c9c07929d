#include "support.hpp"

#include <deque>
#include <functional>
#include <sstream>

#include "andorcut/encoder.hpp"
#include "andorcut/maxsat.hpp"
#include "andorcut/oracle.hpp"
#include "andorcut/sat.hpp"
#include "cli.hpp"

namespace andorcut::testing {

namespace {

std::uint64_t pick(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
  return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

}  // namespace

AndOrGraph example_graph() {
  AndOrGraph g;
  g.add_atomic("a", Cost::finite(2));
  g.add_atomic("b", Cost::finite(5));
  g.add_atomic("c", Cost::finite(2));
  g.add_atomic("d", Cost::finite(10));
  g.add_atomic("c1", Cost::infinite());
  g.add_gate("g1", NodeKind::kAnd);
  g.add_gate("g2", NodeKind::kAnd);
  g.add_gate("o1", NodeKind::kOr);
  g.add_edge("a", "g1");
  g.add_edge("b", "g1");
  g.add_edge("b", "g2");
  g.add_edge("c", "g2");
  g.add_edge("g1", "o1");
  g.add_edge("g2", "o1");
  g.add_edge("o1", "d");
  g.add_edge("d", "c1");
  g.target = "c1";
  return g;
}

std::set<std::set<std::string>> named_clauses(const CnfFormula& cnf) {
  std::set<std::set<std::string>> out;
  for (const auto& clause : cnf.clauses) {
    std::set<std::string> named;
    for (const auto& lit : clause) {
      const NodeId* id = cnf.varmap.node_of(lit.var);
      const std::string name = id ? *id : "#" + std::to_string(lit.var);
      named.insert(lit.positive ? name : "-" + name);
    }
    out.insert(std::move(named));
  }
  return out;
}

Formula random_formula(std::mt19937_64& rng, unsigned nvars, unsigned max_depth) {
  std::vector<Formula> built;
  std::function<Formula(unsigned)> grow = [&](unsigned depth) -> Formula {
    if (!built.empty() && pick(rng, 0, 9) == 0) return built[pick(rng, 0, built.size() - 1)];
    if (depth == 0 || pick(rng, 0, 5) == 0) {
      return FormulaNode::make_var("x" + std::to_string(pick(rng, 0, nvars - 1)));
    }
    Formula f;
    const auto choice = pick(rng, 0, 9);
    if (choice == 0) {
      f = FormulaNode::make_not(grow(depth - 1));
    } else {
      std::vector<Formula> kids;
      const auto arity = pick(rng, 1, 3);
      for (std::uint64_t k = 0; k < arity; ++k) kids.push_back(grow(depth - 1));
      f = choice < 5 ? FormulaNode::make_and(std::move(kids)) : FormulaNode::make_or(std::move(kids));
    }
    built.push_back(f);
    return f;
  };
  return grow(max_depth);
}

AndOrGraph random_graph(std::mt19937_64& rng, unsigned max_atomic, unsigned max_gates) {
  AndOrGraph g;
  std::vector<NodeId> pool;
  const unsigned atomic = 1 + static_cast<unsigned>(pick(rng, 0, max_atomic - 1));
  const unsigned leaves = 1 + static_cast<unsigned>(pick(rng, 0, atomic - 1));
  const unsigned gates = static_cast<unsigned>(pick(rng, 0, max_gates));
  for (unsigned i = 0; i < leaves; ++i) {
    const NodeId id = "a" + std::to_string(i);
    g.add_atomic(id, Cost::finite(pick(rng, 1, 20)));
    pool.push_back(id);
  }
  auto add_inputs = [&](const NodeId& id) {
    std::set<NodeId> chosen;
    const auto fanin = pick(rng, 1, 3);
    for (std::uint64_t k = 0; k < fanin; ++k) chosen.insert(pool[pick(rng, 0, pool.size() - 1)]);
    for (const auto& from : chosen) g.add_edge(from, id);
  };
  unsigned inner_atomic = atomic - leaves;
  unsigned made_gates = 0;
  while (inner_atomic > 0 || made_gates < gates) {
    const bool gate = inner_atomic == 0 || (made_gates < gates && pick(rng, 0, 1) == 0);
    NodeId id;
    if (gate) {
      id = "g" + std::to_string(made_gates++);
      g.add_gate(id, pick(rng, 0, 1) == 0 ? NodeKind::kAnd : NodeKind::kOr);
    } else {
      id = "a" + std::to_string(atomic - inner_atomic);
      --inner_atomic;
      // Occasionally an uncompromisable intermediate component.
      g.add_atomic(id, pick(rng, 0, 9) == 0 ? Cost::infinite() : Cost::finite(pick(rng, 1, 20)));
    }
    add_inputs(id);
    pool.push_back(id);
  }
  g.add_atomic("t", Cost::infinite());
  add_inputs("t");
  g.target = "t";
  return g;
}

AndOrGraph random_shared_dag(std::mt19937_64& rng, unsigned leaves, double share) {
  AndOrGraph g;
  std::vector<NodeKind> kinds;
  unsigned made_leaves = 0;
  auto make = [&](NodeKind kind) {
    const NodeId id = "n" + std::to_string(g.nodes.size());
    if (kind == NodeKind::kAtomic) {
      g.add_atomic(id, Cost::finite(pick(rng, 1, 100)));
      ++made_leaves;
    } else {
      g.add_gate(id, kind);
    }
    kinds.push_back(kind);
    return g.nodes.size() - 1;
  };
  g.add_atomic("n0", Cost::infinite());
  kinds.push_back(NodeKind::kAtomic);
  g.target = "n0";
  const std::size_t root = make(NodeKind::kOr);
  g.add_edge(g.nodes[root].id, "n0");
  std::deque<std::size_t> queue{root};
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    const auto fanin = pick(rng, 2, 3);
    std::set<std::size_t> inputs;
    for (std::uint64_t k = 0; k < fanin; ++k) {
      // Only nodes created after u can be its inputs, which keeps the
      // graph acyclic.
      const bool can_share = g.nodes.size() > u + 1;
      if (can_share && (made_leaves >= leaves || std::bernoulli_distribution(share)(rng))) {
        inputs.insert(u + 1 + pick(rng, 0, g.nodes.size() - u - 2));
        continue;
      }
      NodeKind kind = NodeKind::kAtomic;
      if (made_leaves < leaves) {
        const auto r = pick(rng, 0, 8);
        kind = r < 3 ? NodeKind::kAtomic : r < 5 ? NodeKind::kAnd : NodeKind::kOr;
      }
      const std::size_t v = make(kind);
      if (kind != NodeKind::kAtomic) queue.push_back(v);
      inputs.insert(v);
    }
    for (std::size_t v : inputs) g.add_edge(g.nodes[v].id, g.nodes[u].id);
  }
  return g;
}

std::map<NodeId, bool> assignment_from_mask(const std::vector<NodeId>& vars, std::uint64_t mask) {
  std::map<NodeId, bool> out;
  for (std::size_t i = 0; i < vars.size(); ++i) out[vars[i]] = ((mask >> i) & 1u) != 0;
  return out;
}

namespace {

std::string describe(const std::map<NodeId, bool>& sigma) {
  std::string out;
  for (const auto& [id, value] : sigma) out += (value ? " " : " !") + id;
  return out;
}

std::string describe(const CompromiseSet& set) {
  std::string out = "{";
  for (const auto& id : set) out += (out.size() > 1 ? "," : "") + id;
  return out + "}";
}

std::vector<IndexedGraph::Index> all_compromisable(const IndexedGraph& ig) {
  std::vector<IndexedGraph::Index> out;
  for (IndexedGraph::Index i = 0; i < ig.size(); ++i)
    if (ig.is_compromisable(i)) out.push_back(i);
  return out;
}

bool some_extension_satisfies(const CnfFormula& cnf, std::vector<bool> assignment) {
  const std::size_t n = cnf.aux.size();
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    for (std::size_t k = 0; k < n; ++k) assignment[cnf.aux[k]] = (m >> k) & 1u;
    if (satisfies(cnf.clauses, assignment)) return true;
  }
  return false;
}

}  // namespace

std::string check_tseitin_projection(const Formula& f) {
  const auto vars = variables(f);
  if (vars.size() > 20) return "too many variables";
  const CnfFormula cnf = tseitin(f);
  if (cnf.varmap.size() != vars.size()) return "variable map does not cover the formula";
  const bool enumerate_aux = vars.size() + cnf.aux.size() <= 18;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << vars.size()); ++mask) {
    const auto sigma = assignment_from_mask(vars, mask);
    const bool expected = evaluate_formula(f, sigma);
    std::vector<Literal> assumptions;
    std::vector<bool> partial(cnf.nvars + 1, false);
    for (const auto& [id, value] : sigma) {
      const VarIndex v = *cnf.varmap.var_of(id);
      assumptions.push_back(Literal{v, value});
      partial[v] = value;
    }
    const SatResult r = sat_solve(cnf.clauses, assumptions, cnf.nvars);
    const bool sat = r.status == SatStatus::kSat;
    if (sat != expected) {
      return to_string(f) + ": formula " + (expected ? "true" : "false") + " but clauses " +
             (sat ? "satisfiable" : "unsatisfiable") + " under" + describe(sigma);
    }
    if (sat) {
      if (!satisfies(cnf.clauses, r.assignment)) return "model violates a clause";
      for (const auto& l : assumptions)
        if (r.assignment[l.var] != l.positive) return "model disagrees with the fixed assignment";
    }
    if (enumerate_aux && some_extension_satisfies(cnf, partial) != expected) {
      return to_string(f) + ": auxiliary enumeration disagrees under" + describe(sigma);
    }
  }
  return {};
}

std::string check_naive_cnf(const Formula& f) {
  const auto vars = variables(f);
  const CnfFormula cnf = naive_cnf(f);
  if (!cnf.aux.empty()) return "naive CNF introduced auxiliaries";
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << vars.size()); ++mask) {
    const auto sigma = assignment_from_mask(vars, mask);
    std::vector<bool> a(cnf.nvars + 1, false);
    for (const auto& [id, value] : sigma) {
      if (auto v = cnf.varmap.var_of(id)) a[*v] = value;
    }
    if (satisfies(cnf.clauses, a) != evaluate_formula(f, sigma)) {
      return to_string(f) + ": naive CNF disagrees under" + describe(sigma);
    }
  }
  return {};
}

std::string check_formula_agreement(const AndOrGraph& graph) {
  const IndexedGraph ig(graph);
  const auto cand = all_compromisable(ig);
  if (cand.size() > 12) return "too many compromisable nodes";
  std::vector<Formula> forms(ig.size());
  for (IndexedGraph::Index i = 0; i < ig.size(); ++i) forms[i] = build_formula(ig, i);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cand.size()); ++mask) {
    std::vector<std::uint8_t> flags(ig.size(), 0);
    std::map<NodeId, bool> sigma;
    for (IndexedGraph::Index i = 0; i < ig.size(); ++i)
      if (ig.kind(i) == NodeKind::kAtomic) sigma[ig.id(i)] = true;
    for (std::size_t k = 0; k < cand.size(); ++k) {
      if ((mask >> k) & 1u) {
        flags[cand[k]] = 1;
        sigma[ig.id(cand[k])] = false;
      }
    }
    const auto values = ig.evaluate(flags);
    for (IndexedGraph::Index i = 0; i < ig.size(); ++i) {
      if (static_cast<bool>(values[i]) != evaluate_formula(forms[i], sigma)) {
        return "node " + ig.id(i) + ": graph and formula disagree under" + describe(sigma);
      }
    }
  }
  return {};
}

std::string check_compromise_monotonic(const AndOrGraph& graph) {
  const IndexedGraph ig(graph);
  const auto cand = all_compromisable(ig);
  if (cand.size() > 16) return "too many compromisable nodes";
  const std::uint64_t subsets = std::uint64_t{1} << cand.size();
  std::vector<std::uint8_t> disrupted(subsets);
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    std::vector<std::uint8_t> flags(ig.size(), 0);
    for (std::size_t k = 0; k < cand.size(); ++k) flags[cand[k]] = (mask >> k) & 1u;
    disrupted[mask] = !ig.evaluate(flags)[ig.target()];
  }
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    if (!disrupted[mask]) continue;
    for (std::size_t k = 0; k < cand.size(); ++k) {
      if (!disrupted[mask | (std::uint64_t{1} << k)]) {
        return "adding " + ig.id(cand[k]) + " to a disrupting set restores the target";
      }
    }
  }
  return {};
}

std::string check_cost_monotonic(const AndOrGraph& graph, std::mt19937_64& rng, std::uint64_t delta) {
  auto optimum = [](const AndOrGraph& g) -> std::optional<Weight> {
    const auto r = solve(encode(g, g.target));
    if (r.is_hard_unsat()) return std::nullopt;
    if (!r.is_optimal()) throw std::runtime_error("solver did not finish");
    return r.solution()->cost;
  };
  std::vector<std::size_t> finite;
  for (std::size_t i = 0; i < graph.nodes.size(); ++i)
    if (graph.nodes[i].cost && graph.nodes[i].cost->is_finite()) finite.push_back(i);
  if (finite.empty()) return {};
  const auto before = optimum(graph);
  AndOrGraph raised = graph;
  auto& node = raised.nodes[finite[rng() % finite.size()]];
  node.cost = Cost::finite(node.cost->value() + delta);
  const auto after = optimum(raised);
  if (before.has_value() != after.has_value()) return "feasibility changed after raising " + node.id;
  if (!before) return {};
  if (*after < *before) {
    return "raising " + node.id + " lowered the optimum from " + std::to_string(*before) + " to " +
           std::to_string(*after);
  }
  if (*after > *before + delta) return "raising " + node.id + " by " + std::to_string(delta) + " raised the optimum by more";
  return {};
}

std::string check_against_oracle(const AndOrGraph& graph) {
  const IndexedGraph ig(graph);
  const auto inst = encode(ig, ig.target());
  const auto r = solve(inst);
  const auto oracle = brute_force_min_cut(ig, ig.target(), 20);
  if (r.is_timeout()) return "solver timed out";
  if (r.is_hard_unsat() || !oracle) {
    if (r.is_hard_unsat() && !oracle) return {};
    return r.is_hard_unsat() ? "solver says infeasible, oracle found a cut" : "oracle says infeasible";
  }
  const CriticalSet mine = decode(inst, ig, r.solution()->assignment);
  if (mine.total_cost != oracle->total_cost) {
    return "solver cost " + std::to_string(mine.total_cost) + " " + describe(mine.ids()) + " vs oracle " +
           std::to_string(oracle->total_cost) + " " + describe(oracle->ids());
  }
  for (const CriticalSet* cs : {&mine, &*oracle}) {
    const auto report = verify(ig, ig.target(), *cs);
    if (!report.disrupts || !report.irredundant || !report.claimed_cost_matches) {
      return "witness " + describe(cs->ids()) + " failed verification";
    }
  }
  return {};
}

CliResult run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"andorcut"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliResult result;
  result.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  result.out = out.str();
  result.err = err.str();
  return result;
}

TempDir::TempDir() {
  static std::mt19937_64 rng{std::random_device{}()};
  const auto base = std::filesystem::temp_directory_path();
  do {
    path_ = base / ("andorcut-test-" + std::to_string(rng()));
  } while (!std::filesystem::create_directory(path_));
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace andorcut::testing
