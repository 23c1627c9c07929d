#include "andorcut/generator.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <random>

namespace andorcut {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [lo, hi] by rejection; independent of the standard
  // library's distribution implementations.
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo;
    if (span == std::numeric_limits<std::uint64_t>::max()) return engine_();
    const std::uint64_t range = span + 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + x % range;
  }

 private:
  std::mt19937_64 engine_;
};

constexpr std::int64_t kPpm = 1'000'000;

}  // namespace

std::string check_config(const GeneratorConfig& c) {
  if (c.atomic_percent + c.and_percent + c.or_percent != 100) {
    return "composition must sum to 100 (got " +
           std::to_string(c.atomic_percent + c.and_percent + c.or_percent) + ")";
  }
  if (c.atomic_percent < 1) return "composition needs at least 1% atomic nodes";
  if (c.size_target < 1) return "size must be at least 1";
  if (c.cost_min < 1 || c.cost_min > c.cost_max) return "cost range must satisfy 1 <= min <= max";
  if (c.branching_min < 2 || c.branching_min > c.branching_max) {
    return "branching must satisfy 2 <= min <= max";
  }
  return {};
}

AndOrGraph generate(const GeneratorConfig& config) {
  if (auto problem = check_config(config); !problem.empty()) {
    throw std::invalid_argument(problem);
  }
  Rng rng(config.seed);

  const std::int64_t gate_percent = config.and_percent + config.or_percent;
  const std::int64_t branching_sum = config.branching_min + config.branching_max;
  const std::int64_t expand_ppm = std::clamp<std::int64_t>(
      (220 - gate_percent * branching_sum) * kPpm / (2 * config.atomic_percent), 0, kPpm);

  AndOrGraph graph;
  std::vector<NodeKind> kinds;
  auto create = [&](NodeKind kind) {
    const std::size_t index = graph.nodes.size();
    NodeId id = "n" + std::to_string(index);
    if (kind == NodeKind::kAtomic) {
      graph.add_atomic(std::move(id), Cost::finite(rng.uniform(config.cost_min, config.cost_max)));
    } else {
      graph.add_gate(std::move(id), kind);
    }
    kinds.push_back(kind);
    return index;
  };
  auto draw_kind = [&] {
    const auto roll = rng.uniform(0, 99);
    if (roll < config.atomic_percent) return NodeKind::kAtomic;
    if (roll < config.atomic_percent + config.and_percent) return NodeKind::kAnd;
    return NodeKind::kOr;
  };
  auto link = [&](std::size_t child, std::size_t parent) {
    graph.add_edge(graph.nodes[child].id, graph.nodes[parent].id);
  };

  graph.add_atomic("n0", Cost::infinite());
  kinds.push_back(NodeKind::kAtomic);
  graph.target = "n0";

  std::deque<std::size_t> queue{0};
  while (graph.nodes.size() < config.size_target && !queue.empty()) {
    const std::size_t node = queue.front();
    queue.pop_front();
    std::uint64_t children = 0;
    if (kinds[node] != NodeKind::kAtomic) {
      children = rng.uniform(config.branching_min, config.branching_max);
    } else if (queue.empty() ||
               static_cast<std::int64_t>(rng.uniform(0, kPpm - 1)) < expand_ppm) {
      children = 1;
    }
    for (std::uint64_t i = 0; i < children; ++i) {
      const std::size_t child = create(draw_kind());
      link(child, node);
      queue.push_back(child);
    }
  }
  // Closure wave: every gate still waiting for inputs gets atomic leaves.
  for (std::size_t node : queue) {
    if (kinds[node] == NodeKind::kAtomic) continue;
    const auto children = rng.uniform(config.branching_min, config.branching_max);
    for (std::uint64_t i = 0; i < children; ++i) link(create(NodeKind::kAtomic), node);
  }
  return graph;
}

}  // namespace andorcut
