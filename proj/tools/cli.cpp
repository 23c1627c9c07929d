#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "andorcut/encoder.hpp"
#include "andorcut/generator.hpp"
#include "andorcut/io.hpp"
#include "andorcut/maxsat.hpp"
#include "andorcut/oracle.hpp"

namespace andorcut::cli {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Oracle comparisons are only attempted on instances this small.
constexpr std::size_t kOracleLimit = 18;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("ANDORCUT_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw InputError(std::string("ANDORCUT_SEED is not an integer: ") + env);
    }
  }
  return 0;
}

GeneratorConfig parse_composition(const std::string& text) {
  GeneratorConfig config;
  std::vector<unsigned> parts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      const unsigned long value = std::stoul(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      parts.push_back(static_cast<unsigned>(value));
    } catch (const std::exception&) {
      throw InputError("bad composition '" + text + "': expected A,B,C");
    }
  }
  if (parts.size() != 3) throw InputError("bad composition '" + text + "': expected A,B,C");
  config.atomic_percent = parts[0];
  config.and_percent = parts[1];
  config.or_percent = parts[2];
  if (auto problem = check_config(config); !problem.empty()) {
    throw InputError("bad composition '" + text + "': " + problem);
  }
  return config;
}

AndOrGraph load_graph(const std::string& path) {
  try {
    return parse_graph(read_file(path));
  } catch (const ParseError& e) {
    throw InputError(path + ":" + e.what());
  } catch (const ValidationError& e) {
    throw InputError(path + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw InputError(e.what());
  }
}

std::string format_solution(const std::vector<CriticalNode>& nodes) {
  std::string out;
  for (const auto& n : nodes) {
    if (!out.empty()) out += ", ";
    out += n.id + ":" + std::to_string(n.cost);
  }
  return out.empty() ? "-" : out;
}

void fill_shape(CaseReport& report, const AndOrGraph& graph) {
  const auto c = composition(graph);
  report.g_nodes = graph.nodes.size();
  report.g_atomic = c.atomic;
  report.g_and = c.and_gates;
  report.g_or = c.or_gates;
}

void fill_outcome(CaseReport& report, const SolveResult& result) {
  report.solve_ms = result.stats.elapsed_ms;
  report.decisions = result.stats.decisions;
  report.propagations = result.stats.propagations;
  if (result.is_optimal()) {
    report.status = "optimal";
  } else if (result.is_hard_unsat()) {
    report.status = "infeasible";
  } else {
    report.status = "timeout";
  }
}

// Encodes, solves, decodes and verifies one graph.
CaseReport analyse_graph(const AndOrGraph& graph, const SolverBudget& budget, bool run_oracle) {
  CaseReport report;
  fill_shape(report, graph);
  const IndexedGraph indexed(graph);
  const auto encode_start = Clock::now();
  const WcnfInstance instance = encode(indexed, indexed.target());
  report.encode_ms = ms_since(encode_start);
  report.ts_vars = instance.nvars;
  report.ts_clauses = instance.clause_count();

  const SolveResult result = solve(instance, budget);
  fill_outcome(report, result);
  if (const Solution* solution = result.solution()) {
    const CriticalSet critical = decode(instance, indexed, solution->assignment);
    report.solution = critical.nodes;
    report.cost = critical.total_cost;
    const auto check = verify(indexed, indexed.target(), critical);
    report.verified = check.disrupts && check.claimed_cost_matches;
    report.cost = check.recomputed_cost;
  }
  if (run_oracle && compromisable_ancestors(indexed, indexed.target()).size() <= kOracleLimit) {
    auto oracle = brute_force_min_cut(indexed, indexed.target(), kOracleLimit);
    if (oracle) report.oracle_cost = oracle->total_cost;
  }
  return report;
}

// Decodes a bare WCNF solution: falsified soft clauses, named through the
// variable map when it is available.
CaseReport analyse_wcnf(const WcnfInstance& instance, const SolverBudget& budget) {
  CaseReport report;
  report.ts_vars = instance.nvars;
  report.ts_clauses = instance.clause_count();
  const SolveResult result = solve(instance, budget);
  fill_outcome(report, result);
  if (const Solution* solution = result.solution()) {
    report.cost = solution->cost;
    for (std::size_t i = 0; i < instance.soft.size(); ++i) {
      const auto& soft = instance.soft[i];
      if (satisfies({soft.clause}, solution->assignment)) continue;
      std::string name = "soft#" + std::to_string(i + 1);
      if (soft.clause.size() == 1) {
        const Literal l = soft.clause.front();
        const NodeId* id = instance.varmap.node_of(l.var);
        name = (l.positive ? "" : "!") + (id ? *id : "v" + std::to_string(l.var));
      }
      report.solution.push_back(CriticalNode{name, soft.weight});
    }
    std::sort(report.solution.begin(), report.solution.end(),
              [](const CriticalNode& a, const CriticalNode& b) { return a.id < b.id; });
  }
  return report;
}

int exit_code_for(const CaseReport& report) {
  if (report.status == "optimal") return kOk;
  if (report.status == "infeasible") return kInfeasible;
  return kTimeout;
}

void print_report(std::ostream& out, const CaseReport& r) {
  out << "status     " << r.status << "\n";
  out << "cost       " << (r.cost ? std::to_string(*r.cost) : "-") << "\n";
  out << std::fixed << std::setprecision(3);
  out << "time_ms    " << r.time_ms() << " (encode " << r.encode_ms << ", solve " << r.solve_ms
      << ")\n";
  out.unsetf(std::ios::floatfield);
  out << "tsVars     " << r.ts_vars << "\n";
  out << "tsClauses  " << r.ts_clauses << "\n";
  out << "solution   " << format_solution(r.solution) << "\n";
  if (r.verified) out << "verified   " << (*r.verified ? "yes" : "NO") << "\n";
}

SolverBudget budget_from(std::optional<double> seconds) {
  SolverBudget budget;
  if (seconds) {
    if (!(*seconds > 0)) throw InputError("time limit must be positive");
    budget.wall_seconds = *seconds;
  }
  return budget;
}

int cmd_generate(std::size_t size, const std::string& config_text, std::optional<std::uint64_t> seed,
                 const std::string& out_path, std::ostream& out) {
  GeneratorConfig config = parse_composition(config_text);
  config.size_target = size;
  config.seed = seed ? *seed : default_seed();
  if (auto problem = check_config(config); !problem.empty()) throw InputError(problem);
  const AndOrGraph graph = generate(config);
  write_file(out_path, emit_graph(graph));
  const auto c = composition(graph);
  out << "nodes   " << graph.nodes.size() << "\n"
      << "atomic  " << c.atomic << "\n"
      << "and     " << c.and_gates << "\n"
      << "or      " << c.or_gates << "\n"
      << "wrote   " << out_path << "\n";
  return kOk;
}

int cmd_encode(const std::string& graph_path, const std::string& out_path, std::ostream& out) {
  const AndOrGraph graph = load_graph(graph_path);
  const WcnfInstance instance = encode(graph, graph.target);
  write_file(out_path, emit_wcnf(instance));
  out << "tsVars     " << instance.nvars << "\n"
      << "tsClauses  " << instance.clause_count() << "\n"
      << "hard       " << instance.hard.size() << "\n"
      << "soft       " << instance.soft.size() << "\n"
      << "top        " << instance.top << "\n"
      << "wrote      " << out_path << "\n";
  return kOk;
}

int cmd_solve(const std::string& wcnf_path, const std::string& graph_path,
              std::optional<double> timeout, const std::string& report_path, std::ostream& out,
              std::ostream& err) {
  if (wcnf_path.empty() == graph_path.empty()) {
    throw InputError("solve needs exactly one of --wcnf or --graph");
  }
  const SolverBudget budget = budget_from(timeout);
  CaseReport report;
  if (!graph_path.empty()) {
    report = analyse_graph(load_graph(graph_path), budget, false);
    report.id = graph_path;
  } else {
    WcnfParseResult parsed;
    try {
      parsed = parse_wcnf(read_file(wcnf_path));
    } catch (const ParseError& e) {
      throw InputError(wcnf_path + ":" + e.what());
    } catch (const std::runtime_error& e) {
      throw InputError(e.what());
    }
    for (const auto& w : parsed.warnings) err << "warning: " << wcnf_path << ": " << w << "\n";
    report = analyse_wcnf(parsed.instance, budget);
    report.id = wcnf_path;
  }
  print_report(out, report);
  if (!report_path.empty()) write_file(report_path, report.to_json() + "\n");
  return exit_code_for(report);
}

std::vector<std::string> split_ids(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    out.push_back(item.substr(first, item.find_last_not_of(" \t") - first + 1));
  }
  return out;
}

int cmd_verify(const std::string& graph_path, const std::string& solution_text,
               std::ostream& out) {
  const AndOrGraph graph = load_graph(graph_path);
  const IndexedGraph indexed(graph);
  // Entries are "id" or "id:cost"; a claimed cost is checked only when
  // every entry carries one. Ids that themselves contain ':' win.
  CriticalSet claimed;
  bool all_priced = true;
  for (const auto& entry : split_ids(solution_text)) {
    CriticalNode node{entry, 0};
    bool priced = false;
    const auto colon = entry.rfind(':');
    if (!indexed.find(entry) && colon != std::string::npos) {
      const std::string digits = entry.substr(colon + 1);
      if (!digits.empty() && std::all_of(digits.begin(), digits.end(), ::isdigit)) {
        try {
          node.cost = std::stoull(digits);
        } catch (const std::exception&) {
          throw InputError("bad cost in solution entry '" + entry + "'");
        }
        node.id = entry.substr(0, colon);
        priced = true;
      }
    }
    all_priced = all_priced && priced;
    auto index = indexed.find(node.id);
    if (!index) throw InputError("unknown node '" + node.id + "'");
    if (!indexed.is_compromisable(*index)) {
      throw InputError("node '" + node.id + "' cannot be compromised");
    }
    if (!priced) node.cost = indexed.cost(*index).value();
    claimed.total_cost += node.cost;
    claimed.nodes.push_back(node);
  }
  VerificationReport report = verify(indexed, indexed.target(), claimed);
  out << "disrupts      " << (report.disrupts ? "yes" : "no") << "\n"
      << "cost          " << report.recomputed_cost << "\n"
      << "cost_matches  " << (report.claimed_cost_matches ? "yes" : "no")
      << (all_priced ? "" : " (not claimed)") << "\n"
      << "irredundant   " << (report.irredundant ? "yes" : "no") << "\n";
  for (const auto& v : report.violations) out << "violation     " << v << "\n";
  return report.disrupts ? kOk : kNotDisrupted;
}

struct BenchOptions {
  std::vector<std::size_t> sizes;
  std::vector<std::string> configs;
  std::size_t count = 1;
  std::optional<std::uint64_t> seed;
  std::optional<double> budget;
  std::string out_dir = "bench";
  unsigned jobs = 1;
};

int cmd_bench(const BenchOptions& options, std::ostream& out, std::ostream& err) {
  struct Case {
    std::size_t id;
    GeneratorConfig config;
  };
  const std::uint64_t seed = options.seed ? *options.seed : default_seed();
  const SolverBudget budget = budget_from(options.budget);
  std::vector<Case> cases;
  for (std::size_t size : options.sizes) {
    for (const auto& text : options.configs) {
      GeneratorConfig config = parse_composition(text);
      config.size_target = size;
      if (auto problem = check_config(config); !problem.empty()) throw InputError(problem);
      for (std::size_t k = 0; k < options.count; ++k) {
        const std::size_t id = cases.size() + 1;
        config.seed = seed + id;
        cases.push_back(Case{id, config});
      }
    }
  }
  if (!cases.empty()) std::filesystem::create_directories(options.out_dir);

  std::vector<CaseReport> reports(cases.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) {
      const Case& c = cases[i];
      CaseReport& report = reports[i];
      try {
        const AndOrGraph graph = generate(c.config);
        const std::string stem = (std::filesystem::path(options.out_dir) /
                                  ("case-" + std::to_string(c.id) + "-n" +
                                   std::to_string(graph.nodes.size())))
                                     .string();
        write_file(stem + ".aog", emit_graph(graph));
        write_file(stem + ".wcnf", emit_wcnf(encode(graph, graph.target)));
        report = analyse_graph(graph, budget, true);
      } catch (const std::exception& e) {
        report.status = "error";
        report.error = e.what();
        std::lock_guard lock(log_mutex);
        err << "case " << c.id << ": " << e.what() << "\n";
      }
      report.id = std::to_string(c.id);
    }
  };
  const unsigned jobs = std::max(1u, options.jobs);
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  out << std::left << std::setw(5) << "id" << std::setw(8) << "gNodes" << std::setw(7) << "gAT"
      << std::setw(6) << "gAND" << std::setw(6) << "gOR" << std::setw(8) << "tsVars"
      << std::setw(10) << "tsClauses" << std::setw(8) << "cost" << std::setw(11) << "time"
      << std::setw(11) << "status" << "solution\n";
  std::string jsonl;
  for (const auto& r : reports) {
    std::ostringstream time;
    time << std::fixed << std::setprecision(1) << r.time_ms();
    out << std::setw(5) << r.id << std::setw(8) << r.g_nodes << std::setw(7) << r.g_atomic
        << std::setw(6) << r.g_and << std::setw(6) << r.g_or << std::setw(8) << r.ts_vars
        << std::setw(10) << r.ts_clauses << std::setw(8)
        << (r.cost ? std::to_string(*r.cost) : "-") << std::setw(11) << time.str()
        << std::setw(11) << r.status << format_solution(r.solution) << "\n";
    jsonl += r.to_json() + "\n";
  }
  if (!cases.empty()) {
    write_file((std::filesystem::path(options.out_dir) / "results.jsonl").string(), jsonl);
  }
  return kOk;
}

}  // namespace

std::string CaseReport::to_json() const {
  nlohmann::ordered_json j;
  j["id"] = id;
  j["gNodes"] = g_nodes;
  j["gAT"] = g_atomic;
  j["gAND"] = g_and;
  j["gOR"] = g_or;
  j["tsVars"] = ts_vars;
  j["tsClauses"] = ts_clauses;
  j["cost"] = cost ? nlohmann::ordered_json(*cost) : nlohmann::ordered_json(nullptr);
  j["time"] = time_ms();
  j["encode_ms"] = encode_ms;
  j["solve_ms"] = solve_ms;
  auto& solution_json = j["solution"] = nlohmann::ordered_json::array();
  for (const auto& n : solution) solution_json.push_back({{"node", n.id}, {"cost", n.cost}});
  j["status"] = status;
  j["decisions"] = decisions;
  j["propagations"] = propagations;
  if (verified) j["verified"] = *verified;
  if (oracle_cost) j["oracle_cost"] = *oracle_cost;
  if (!error.empty()) j["error"] = error;
  return j.dump();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimum-cost critical node sets in AND/OR dependency graphs"};
  app.require_subcommand(1);

  std::size_t gen_size = 0;
  std::string gen_config = "80,10,10";
  std::optional<std::uint64_t> gen_seed;
  std::string gen_out;
  auto* generate_cmd = app.add_subcommand("generate", "Generate a pseudo-random AND/OR graph");
  generate_cmd->add_option("--size", gen_size, "Target node count")->required();
  generate_cmd->add_option("--config", gen_config, "Composition atomic,and,or (percent)");
  generate_cmd->add_option("--seed", gen_seed, "RNG seed (default: $ANDORCUT_SEED or 0)");
  generate_cmd->add_option("--out", gen_out, "Output .aog file")->required();

  std::string enc_graph, enc_out;
  auto* encode_cmd = app.add_subcommand("encode", "Encode a graph as a WCNF instance");
  encode_cmd->add_option("--graph", enc_graph, "Input .aog file")->required();
  encode_cmd->add_option("--out", enc_out, "Output .wcnf file")->required();

  std::string solve_wcnf, solve_graph, solve_report;
  std::optional<double> solve_timeout;
  auto* solve_cmd = app.add_subcommand("solve", "Solve a graph or WCNF instance to optimality");
  auto* wcnf_opt = solve_cmd->add_option("--wcnf", solve_wcnf, "Input .wcnf file");
  auto* graph_opt = solve_cmd->add_option("--graph", solve_graph, "Input .aog file");
  wcnf_opt->excludes(graph_opt);
  solve_cmd->add_option("--timeout", solve_timeout, "Wall-clock limit in seconds");
  solve_cmd->add_option("--report", solve_report, "Write a JSON case report here");

  std::string verify_graph, verify_solution;
  auto* verify_cmd = app.add_subcommand("verify", "Check a claimed critical node set");
  verify_cmd->add_option("--graph", verify_graph, "Input .aog file")->required();
  verify_cmd->add_option("--solution", verify_solution, "Comma-separated ids (optionally id:cost)")
      ->required();

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Generate, encode and solve a benchmark suite");
  bench_cmd->add_option("--sizes", bench.sizes, "Graph sizes")->required();
  bench_cmd->add_option("--configs", bench.configs, "Compositions, e.g. 80,10,10 60,20,20")
      ->required();
  bench_cmd->add_option("--count", bench.count, "Cases per size and composition");
  bench_cmd->add_option("--seed", bench.seed, "Base seed (default: $ANDORCUT_SEED or 0)");
  bench_cmd->add_option("--budget", bench.budget, "Per-case wall-clock limit in seconds");
  bench_cmd->add_option("--out-dir", bench.out_dir, "Directory for instances and results");
  bench_cmd->add_option("--jobs", bench.jobs, "Cases solved concurrently");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (generate_cmd->parsed()) return cmd_generate(gen_size, gen_config, gen_seed, gen_out, out);
    if (encode_cmd->parsed()) return cmd_encode(enc_graph, enc_out, out);
    if (solve_cmd->parsed()) {
      return cmd_solve(solve_wcnf, solve_graph, solve_timeout, solve_report, out, err);
    }
    if (verify_cmd->parsed()) return cmd_verify(verify_graph, verify_solution, out);
    if (bench_cmd->parsed()) return cmd_bench(bench, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace andorcut::cli
