#include "andorcut/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

namespace andorcut {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    tokens.push_back(Token{line.substr(start, i - start), start + 1});
  }
  return tokens;
}

// Splits on LF, keeping 1-based line numbers.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    fn(++number, text.substr(pos, end - pos));
    pos = end + 1;
  }
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

void append_clause(std::string& out, Weight weight, const Clause& clause) {
  out += std::to_string(weight);
  for (Literal l : clause) {
    out += ' ';
    out += std::to_string(l.dimacs());
  }
  out += " 0\n";
}

}  // namespace

std::string emit_wcnf(const WcnfInstance& instance) {
  std::string out = "c andorcut wcnf\n";
  std::vector<VarIndex> aux = instance.aux;
  std::sort(aux.begin(), aux.end());
  auto next_aux = aux.begin();
  for (VarIndex v = 1; v <= instance.nvars; ++v) {
    if (const NodeId* id = instance.varmap.node_of(v)) {
      out += "c var " + std::to_string(v) + " = node " + *id + "\n";
    } else if (next_aux != aux.end() && *next_aux == v) {
      out += "c var " + std::to_string(v) + " = aux\n";
    }
    while (next_aux != aux.end() && *next_aux <= v) ++next_aux;
  }
  out += "p wcnf " + std::to_string(instance.nvars) + " " +
         std::to_string(instance.clause_count()) + " " + std::to_string(instance.top) + "\n";
  for (const auto& clause : instance.hard) append_clause(out, instance.top, clause);
  for (const auto& soft : instance.soft) append_clause(out, soft.weight, soft.clause);
  return out;
}

WcnfParseResult parse_wcnf(std::string_view text) {
  WcnfParseResult result;
  WcnfInstance& instance = result.instance;
  bool have_header = false;
  bool have_top = false;
  std::size_t declared_clauses = 0;
  struct PendingClause {
    Weight weight;
    Clause clause;
    std::size_t line;
  };
  std::vector<PendingClause> clauses;
  struct Mapping {
    VarIndex var;
    std::optional<NodeId> node;
    std::size_t line;
  };
  std::vector<Mapping> mappings;

  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    const auto tokens = tokenize(line);
    if (tokens.empty()) return;
    const Token& head = tokens.front();
    if (head.text == "c" || head.text.front() == 'c') {
      // "c var <index> = node <id>" / "c var <index> = aux"; other comments ignored
      if (head.text != "c" || tokens.size() < 5 || tokens[1].text != "var" ||
          tokens[3].text != "=") {
        return;
      }
      auto var = parse_number<VarIndex>(tokens[2].text);
      if (!var || *var == 0) throw ParseError(line_no, tokens[2].column, "bad variable index in mapping");
      if (tokens[4].text == "aux" && tokens.size() == 5) {
        mappings.push_back(Mapping{*var, std::nullopt, line_no});
      } else if (tokens[4].text == "node" && tokens.size() == 6) {
        mappings.push_back(Mapping{*var, NodeId(tokens[5].text), line_no});
      } else {
        throw ParseError(line_no, tokens[4].column, "malformed variable mapping");
      }
      return;
    }
    if (head.text == "p") {
      if (have_header) throw ParseError(line_no, head.column, "duplicate header");
      if (tokens.size() < 4 || tokens.size() > 5 || tokens[1].text != "wcnf") {
        throw ParseError(line_no, head.column, "expected 'p wcnf <nvars> <nclauses> <top>'");
      }
      auto nvars = parse_number<VarIndex>(tokens[2].text);
      if (!nvars) throw ParseError(line_no, tokens[2].column, "bad variable count");
      auto nclauses = parse_number<std::size_t>(tokens[3].text);
      if (!nclauses) throw ParseError(line_no, tokens[3].column, "bad clause count");
      instance.nvars = *nvars;
      declared_clauses = *nclauses;
      if (tokens.size() == 5) {
        auto top = parse_number<Weight>(tokens[4].text);
        if (!top || *top == 0) throw ParseError(line_no, tokens[4].column, "bad top weight");
        instance.top = *top;
        have_top = true;
      }
      have_header = true;
      return;
    }
    if (!have_header) throw ParseError(line_no, head.column, "clause before 'p wcnf' header");
    auto weight = parse_number<Weight>(head.text);
    if (!weight) throw ParseError(line_no, head.column, "bad clause weight '" + std::string(head.text) + "'");
    if (*weight == 0) throw ParseError(line_no, head.column, "clause weight must be positive");
    if (have_top && *weight > instance.top) {
      throw ParseError(line_no, head.column, "clause weight exceeds top");
    }
    PendingClause pending{*weight, {}, line_no};
    bool terminated = false;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      auto lit = parse_number<std::int64_t>(tokens[i].text);
      if (!lit) throw ParseError(line_no, tokens[i].column, "bad literal '" + std::string(tokens[i].text) + "'");
      if (*lit == 0) {
        if (i + 1 != tokens.size()) throw ParseError(line_no, tokens[i].column, "literal 0 inside clause body");
        terminated = true;
        break;
      }
      const std::uint64_t magnitude = *lit < 0 ? static_cast<std::uint64_t>(-*lit)
                                               : static_cast<std::uint64_t>(*lit);
      if (magnitude > instance.nvars) {
        throw ParseError(line_no, tokens[i].column, "literal exceeds declared variable count");
      }
      pending.clause.push_back(Literal::from_dimacs(*lit));
    }
    if (!terminated) throw ParseError(line_no, tokens.back().column, "clause not terminated by 0");
    clauses.push_back(std::move(pending));
  });

  if (!have_header) throw ParseError(1, 1, "missing 'p wcnf' header");
  if (!have_top) {
    // Headers without top carry no hard clauses.
    Weight sum = 0;
    for (const auto& c : clauses) sum += c.weight;
    instance.top = std::max(kDefaultTop, sum + 1);
  }
  for (auto& c : clauses) {
    if (c.weight == instance.top) {
      instance.hard.push_back(std::move(c.clause));
    } else {
      instance.soft.push_back(SoftClause{c.weight, std::move(c.clause)});
    }
  }
  if (clauses.size() != declared_clauses) {
    result.warnings.push_back("header declares " + std::to_string(declared_clauses) +
                              " clauses but body has " + std::to_string(clauses.size()));
  }
  std::set<VarIndex> bound;
  for (const auto& m : mappings) {
    if (m.var > instance.nvars) throw ParseError(m.line, 1, "mapping for variable beyond nvars");
    if (!bound.insert(m.var).second) throw ParseError(m.line, 1, "variable mapped twice");
    if (m.node) {
      try {
        instance.varmap.bind(m.var, *m.node);
      } catch (const std::invalid_argument& e) {
        throw ParseError(m.line, 1, e.what());
      }
    } else {
      instance.aux.push_back(m.var);
    }
  }
  std::sort(instance.aux.begin(), instance.aux.end());
  return result;
}

std::string emit_graph(const AndOrGraph& graph) {
  std::string out = "aog 1\n";
  for (const Node& node : graph.nodes) {
    out += "node " + node.id + " " + std::string(to_string(node.kind));
    if (node.cost) out += " " + to_string(*node.cost);
    out += "\n";
  }
  for (const Edge& edge : graph.edges) out += "edge " + edge.from + " " + edge.to + "\n";
  out += "target " + graph.target + "\n";
  return out;
}

AndOrGraph parse_graph(std::string_view text) {
  AndOrGraph graph;
  bool have_version = false;
  bool have_target = false;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    // Ids may contain '#', so only whole lines are comments.
    const auto tokens = tokenize(line);
    if (tokens.empty() || tokens.front().text.front() == '#') return;
    const Token& head = tokens.front();
    auto expect_arity = [&](std::size_t min, std::size_t max) {
      if (tokens.size() < min) {
        throw ParseError(line_no, head.column, "too few fields for '" + std::string(head.text) + "'");
      }
      if (tokens.size() > max) {
        throw ParseError(line_no, tokens[max].column,
                         "unexpected field '" + std::string(tokens[max].text) + "'");
      }
    };
    if (!have_version) {
      if (head.text != "aog") throw ParseError(line_no, head.column, "expected 'aog 1' header");
      expect_arity(2, 2);
      if (tokens[1].text != "1") {
        throw ParseError(line_no, tokens[1].column,
                         "unsupported format version '" + std::string(tokens[1].text) + "'");
      }
      have_version = true;
      return;
    }
    if (head.text == "node") {
      expect_arity(3, 4);
      NodeId id(tokens[1].text);
      const auto kind = tokens[2].text;
      if (kind == "atomic") {
        if (tokens.size() != 4) throw ParseError(line_no, tokens[2].column, "atomic node needs a cost");
        const auto cost_text = tokens[3].text;
        if (cost_text == "inf") {
          graph.add_atomic(std::move(id), Cost::infinite());
        } else if (auto cost = parse_number<std::uint64_t>(cost_text)) {
          graph.add_atomic(std::move(id), Cost::finite(*cost));
        } else {
          throw ParseError(line_no, tokens[3].column, "bad cost '" + std::string(cost_text) + "'");
        }
      } else if (kind == "and" || kind == "or") {
        expect_arity(3, 3);
        graph.add_gate(std::move(id), kind == "and" ? NodeKind::kAnd : NodeKind::kOr);
      } else {
        throw ParseError(line_no, tokens[2].column, "unknown node kind '" + std::string(kind) + "'");
      }
    } else if (head.text == "edge") {
      expect_arity(3, 3);
      graph.add_edge(NodeId(tokens[1].text), NodeId(tokens[2].text));
    } else if (head.text == "target") {
      expect_arity(2, 2);
      if (have_target) throw ParseError(line_no, head.column, "duplicate target record");
      graph.target = NodeId(tokens[1].text);
      have_target = true;
    } else {
      throw ParseError(line_no, head.column, "unknown record '" + std::string(head.text) + "'");
    }
  });
  if (!have_version) throw ParseError(1, 1, "empty document");
  if (!have_target) throw ParseError(1, 1, "missing target record");
  if (auto violations = validate(graph); !violations.empty()) {
    throw ValidationError(std::move(violations));
  }
  return graph;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace andorcut
