#include <gtest/gtest.h>

#include <algorithm>

#include "andorcut/graph.hpp"
#include "support.hpp"

namespace andorcut {
namespace {

using testing::example_graph;

bool has_kind(const std::vector<Violation>& vs, ViolationKind kind) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.kind == kind; });
}

TEST(Validate, ExampleGraphIsValid) { EXPECT_TRUE(validate(example_graph()).empty()); }

TEST(Validate, SelfLoopIsCycle) {
  AndOrGraph g;
  g.add_atomic("x", Cost::finite(1));
  g.add_edge("x", "x");
  g.target = "x";
  const auto vs = validate(g);
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].kind, ViolationKind::kCycle);
  EXPECT_EQ(vs[0].nodes, std::vector<NodeId>{"x"});
}

TEST(Validate, LongerCycleNamesMembers) {
  AndOrGraph g;
  g.add_atomic("t", Cost::infinite());
  g.add_atomic("x", Cost::finite(1));
  g.add_gate("y", NodeKind::kAnd);
  g.add_edge("x", "y");
  g.add_edge("y", "x");
  g.add_edge("y", "t");
  g.target = "t";
  const auto vs = validate(g);
  ASSERT_TRUE(has_kind(vs, ViolationKind::kCycle));
  auto cycle = std::find_if(vs.begin(), vs.end(),
                            [](const Violation& v) { return v.kind == ViolationKind::kCycle; });
  auto nodes = cycle->nodes;
  std::sort(nodes.begin(), nodes.end());
  EXPECT_EQ(nodes, (std::vector<NodeId>{"x", "y"}));
}

TEST(Validate, OrWithoutInputs) {
  AndOrGraph g;
  g.add_atomic("t", Cost::infinite());
  g.add_gate("o", NodeKind::kOr);
  g.add_edge("o", "t");
  g.target = "t";
  const auto vs = validate(g);
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].kind, ViolationKind::kGateWithoutInput);
  EXPECT_EQ(vs[0].nodes, std::vector<NodeId>{"o"});
}

TEST(Validate, ReportsEveryProblem) {
  AndOrGraph g;
  g.add_atomic("a", Cost::finite(1));
  g.add_atomic("a", Cost::finite(2));
  g.add_gate("g", NodeKind::kAnd);
  g.nodes.push_back(Node{"h", NodeKind::kOr, Cost::finite(3)});
  g.nodes.push_back(Node{"bad id", NodeKind::kAtomic, Cost::finite(1)});
  g.add_edge("a", "g");
  g.add_edge("a", "g");
  g.add_edge("a", "h");
  g.add_edge("ghost", "g");
  g.target = "g";
  const auto vs = validate(g);
  EXPECT_TRUE(has_kind(vs, ViolationKind::kDuplicateNode));
  EXPECT_TRUE(has_kind(vs, ViolationKind::kCostMismatch));
  EXPECT_TRUE(has_kind(vs, ViolationKind::kBadId));
  EXPECT_TRUE(has_kind(vs, ViolationKind::kDuplicateEdge));
  EXPECT_TRUE(has_kind(vs, ViolationKind::kDanglingEdge));
  EXPECT_TRUE(has_kind(vs, ViolationKind::kTargetNotAtomic));
}

TEST(Validate, MissingTarget) {
  AndOrGraph g;
  g.add_atomic("a", Cost::finite(1));
  EXPECT_TRUE(has_kind(validate(g), ViolationKind::kMissingTarget));
  g.target = "zz";
  EXPECT_TRUE(has_kind(validate(g), ViolationKind::kMissingTarget));
}

TEST(Validate, AtomicWithoutCost) {
  AndOrGraph g;
  g.nodes.push_back(Node{"a", NodeKind::kAtomic, std::nullopt});
  g.target = "a";
  EXPECT_TRUE(has_kind(validate(g), ViolationKind::kCostMismatch));
}

TEST(Validate, CostSumOverflow) {
  AndOrGraph g;
  g.add_atomic("a", Cost::finite(~std::uint64_t{0} - 1));
  g.add_atomic("b", Cost::finite(~std::uint64_t{0} - 1));
  g.add_atomic("t", Cost::infinite());
  g.add_edge("a", "t");
  g.add_edge("b", "t");
  g.target = "t";
  EXPECT_TRUE(has_kind(validate(g), ViolationKind::kCostOverflow));
}

TEST(IndexedGraph, ThrowsOnInvalid) {
  AndOrGraph g;
  g.add_atomic("x", Cost::finite(1));
  g.add_edge("x", "x");
  g.target = "x";
  try {
    IndexedGraph ig(g);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    ASSERT_EQ(e.violations().size(), 1u);
    EXPECT_EQ(e.violations()[0].kind, ViolationKind::kCycle);
  }
}

TEST(IndexedGraph, Lookup) {
  const IndexedGraph ig(example_graph());
  EXPECT_EQ(ig.size(), 8u);
  EXPECT_EQ(ig.id(ig.target()), "c1");
  EXPECT_TRUE(ig.find("o1").has_value());
  EXPECT_FALSE(ig.find("zz").has_value());
  EXPECT_THROW(ig.index_of("zz"), std::out_of_range);
  EXPECT_TRUE(ig.is_compromisable(ig.index_of("a")));
  EXPECT_FALSE(ig.is_compromisable(ig.index_of("c1")));
  EXPECT_FALSE(ig.is_compromisable(ig.index_of("g1")));
  EXPECT_EQ(ig.backward_reachable(ig.target()).size(), 8u);
  EXPECT_EQ(ig.backward_reachable(ig.index_of("g2")).size(), 3u);
}

TEST(IndexedGraph, TopologicalOrderRespectsEdges) {
  const auto g = example_graph();
  const IndexedGraph ig(g);
  std::vector<std::size_t> position(ig.size());
  const auto order = ig.topological_order();
  ASSERT_EQ(order.size(), ig.size());
  for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;
  for (const auto& e : g.edges) {
    EXPECT_LT(position[ig.index_of(e.from)], position[ig.index_of(e.to)]) << e.from << "->" << e.to;
  }
}

TEST(Evaluate, ExampleGraph) {
  const auto g = example_graph();
  EXPECT_FALSE(evaluate(g, {"a", "c"}).at("c1"));
  EXPECT_TRUE(evaluate(g, {}).at("c1"));
  const auto only_a = evaluate(g, {"a"});
  EXPECT_TRUE(only_a.at("c1"));
  EXPECT_FALSE(only_a.at("g1"));
  EXPECT_TRUE(only_a.at("g2"));
}

TEST(Evaluate, RejectsBadSets) {
  const auto g = example_graph();
  EXPECT_THROW(evaluate(g, {"c1"}), std::invalid_argument);
  EXPECT_THROW(evaluate(g, {"g1"}), std::invalid_argument);
  EXPECT_THROW(evaluate(g, {"nope"}), std::invalid_argument);
}

TEST(IsDisrupted, ExampleGraph) {
  const auto g = example_graph();
  EXPECT_TRUE(is_disrupted(g, {"a", "c"}));
  EXPECT_TRUE(is_disrupted(g, {"b"}));
  EXPECT_FALSE(is_disrupted(g, {}));
  EXPECT_TRUE(is_disrupted(g, {"d"}));
  EXPECT_FALSE(is_disrupted(g, {"a"}));
  EXPECT_FALSE(is_disrupted(g, {"c"}));
  EXPECT_EQ(is_disrupted(IndexedGraph(g), {"a", "c"}), true);
}

TEST(Evaluate, AtomicNeedsAllPredecessors) {
  AndOrGraph g;
  g.add_atomic("x", Cost::finite(1));
  g.add_atomic("y", Cost::finite(1));
  g.add_atomic("t", Cost::infinite());
  g.add_edge("x", "t");
  g.add_edge("y", "t");
  g.target = "t";
  EXPECT_TRUE(is_disrupted(g, {"x"}));
  EXPECT_TRUE(is_disrupted(g, {"y"}));
}

TEST(Composition, CountsKinds) {
  const auto c = composition(example_graph());
  EXPECT_EQ(c.atomic, 5u);
  EXPECT_EQ(c.and_gates, 2u);
  EXPECT_EQ(c.or_gates, 1u);
}

}  // namespace
}  // namespace andorcut
