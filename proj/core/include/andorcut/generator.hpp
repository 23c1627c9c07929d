#pragma once

/// @file generator.hpp
/// Pseudo-random AND/OR benchmark graphs.
///
/// Construction: the target `n0` (atomic, infinite cost) is created first
/// and nodes are expanded breadth-first. Every new predecessor draws its
/// kind from the composition percentages and, if atomic, a cost uniformly
/// from `cost_range`. Gates receive a number of predecessors drawn
/// uniformly from `branching`; an atomic node receives a single
/// predecessor with an expansion probability tuned so the expected growth
/// per node is 1.1, and always when the queue would otherwise run dry.
/// Expansion stops once the node count reaches `size_target`; gates still
/// waiting in the queue are then closed with atomic leaves.
///
/// Randomness comes from std::mt19937_64 seeded with `seed`; bounded
/// integers are drawn by rejection sampling on its raw output, so graphs
/// are identical across platforms and standard libraries.

#include <cstdint>
#include <string>

#include "andorcut/graph.hpp"

namespace andorcut {

struct GeneratorConfig {
  std::size_t size_target = 1;
  unsigned atomic_percent = 80;
  unsigned and_percent = 10;
  unsigned or_percent = 10;
  std::uint64_t cost_min = 1;
  std::uint64_t cost_max = 100;
  unsigned branching_min = 2;
  unsigned branching_max = 3;
  std::uint64_t seed = 0;
};

/// Empty when the configuration is usable, otherwise the reason.
std::string check_config(const GeneratorConfig& config);

/// Throws std::invalid_argument for configurations rejected by check_config.
AndOrGraph generate(const GeneratorConfig& config);

}  // namespace andorcut
