#include "localmech/graph.hpp"

#include <gtest/gtest.h>

#include "localmech/corpus.hpp"
#include "localmech/errors.hpp"

namespace localmech {
namespace {

std::vector<std::pair<NodeId, NodeId>> EdgePairs(const WeightedGraph& g) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (const Edge& e : g.edges()) pairs.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

TEST(WeightedGraph, ValidateReportsFirstProblem) {
  EXPECT_FALSE(WeightedGraph(2, {{0, 1}}, {1, 2}, 2).Validate().has_value());
  EXPECT_TRUE(WeightedGraph(2, {{0, 0}}, {1, 2}, 2).Validate().has_value());
  EXPECT_TRUE(WeightedGraph(2, {{0, 1}, {1, 0}}, {1, 2}, 2).Validate().has_value());
  EXPECT_TRUE(WeightedGraph(2, {{0, 1}}, {1, 3}, 2).Validate().has_value());
  EXPECT_THROW(RequireValid(WeightedGraph(2, {{0, 0}}, {0, 0}, 0)), ContractViolation);
}

TEST(WeightedGraph, AdjacencyAndDegrees) {
  const WeightedGraph g = StarGraph(3);
  EXPECT_EQ(g.max_degree(), 3);
  EXPECT_EQ(g.degree(1), 1);
  EXPECT_TRUE(g.adjacent(0, 2));
  EXPECT_FALSE(g.adjacent(1, 2));
}

TEST(SquareGraph, Examples) {
  EXPECT_EQ(EdgePairs(SquareGraph(PathGraph(3))),
            (std::vector<std::pair<NodeId, NodeId>>{{0, 1}, {0, 2}, {1, 2}}));
  EXPECT_EQ(EdgePairs(SquareGraph(PathGraph(2))), (std::vector<std::pair<NodeId, NodeId>>{{0, 1}}));
  const WeightedGraph k4 = SquareGraph(CycleGraph(4));
  EXPECT_EQ(k4.edge_count(), 6);
  EXPECT_EQ(k4.max_degree(), 3);
}

TEST(SquareGraph, CopiesWeights) {
  const WeightedGraph g = PathGraph(3).WithWeights({4, 5, 6}, 6);
  EXPECT_EQ(SquareGraph(g).weights(), g.weights());
}

TEST(LineGraph, Examples) {
  EXPECT_EQ(EdgePairs(LineGraph(PathGraph(3))), (std::vector<std::pair<NodeId, NodeId>>{{0, 1}}));
  EXPECT_EQ(LineGraph(CycleGraph(3)).edge_count(), 3);
  const WeightedGraph star_line = LineGraph(StarGraph(3));
  EXPECT_EQ(star_line.node_count(), 3);
  EXPECT_EQ(star_line.edge_count(), 3);
}

TEST(DerivedGraphs, ValidAndDegreeIdentity) {
  for (const WeightedGraph& g : RandomBoundedDegreeGraphs(30, 10, 4, 5, 61)) {
    const WeightedGraph sq = SquareGraph(g);
    const WeightedGraph line = LineGraph(g);
    EXPECT_FALSE(sq.Validate().has_value());
    EXPECT_FALSE(line.Validate().has_value());
    EXPECT_LE(line.max_degree(), std::max(0, 2 * g.max_degree() - 2));
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      EXPECT_EQ(line.degree(e), g.degree(g.edge(e).u) + g.degree(g.edge(e).v) - 2);
    }
    for (NodeId u = 0; u < g.node_count(); ++u) {
      for (NodeId v = u + 1; v < g.node_count(); ++v) {
        bool two_hop = g.adjacent(u, v);
        for (NodeId x : g.neighbors(u)) two_hop = two_hop || g.adjacent(x, v);
        EXPECT_EQ(sq.adjacent(u, v), two_hop);
      }
    }
  }
}

TEST(TieCompare, Examples) {
  EXPECT_TRUE(Beats({5, 2}, {5, 4}, Objective::kMax));
  EXPECT_TRUE(Beats({6, 0}, {5, 9}, Objective::kMax));
  EXPECT_FALSE(Beats({5, 9}, {6, 0}, Objective::kMax));
  EXPECT_TRUE(Beats({3, 0}, {3, 1}, Objective::kMin));
  EXPECT_EQ(TieCompare({3, 1}, {3, 0}, Objective::kMin), TieResult::kLess);
  EXPECT_THROW(Beats({1, 3}, {2, 3}, Objective::kMax), ContractViolation);
}

TEST(TieCompare, StrictTotalOrderOnSmallRanges) {
  std::vector<TieKey> keys;
  for (std::int64_t value = 0; value < 3; ++value) {
    for (std::int64_t color = 0; color < 3; ++color) keys.push_back({value, color});
  }
  for (Objective obj : {Objective::kMax, Objective::kMin}) {
    for (const TieKey& a : keys) {
      for (const TieKey& b : keys) {
        if (a.color == b.color) continue;
        EXPECT_NE(Beats(a, b, obj), Beats(b, a, obj));
        for (const TieKey& c : keys) {
          if (c.color == a.color || c.color == b.color) continue;
          if (Beats(a, b, obj) && Beats(b, c, obj)) EXPECT_TRUE(Beats(a, c, obj));
        }
      }
    }
  }
}

}  // namespace
}  // namespace localmech
