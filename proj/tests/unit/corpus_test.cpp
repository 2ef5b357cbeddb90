#include "localmech/corpus.hpp"

#include <gtest/gtest.h>

#include "localmech/errors.hpp"

namespace localmech {
namespace {

TEST(ConnectedLabeledGraphs, KnownCounts) {
  EXPECT_EQ(ConnectedLabeledGraphs(1).size(), 1u);
  EXPECT_EQ(ConnectedLabeledGraphs(2).size(), 1u);
  EXPECT_EQ(ConnectedLabeledGraphs(3).size(), 4u);
  EXPECT_EQ(ConnectedLabeledGraphs(4).size(), 38u);
  EXPECT_EQ(ConnectedLabeledGraphs(5).size(), 728u);
}

TEST(RandomBoundedDegreeGraphs, RespectsBoundsAndSeed) {
  const auto a = RandomBoundedDegreeGraphs(100, 10, 4, 6, 1);
  const auto b = RandomBoundedDegreeGraphs(100, 10, 4, 6, 1);
  EXPECT_EQ(a, b);
  for (const WeightedGraph& g : a) {
    EXPECT_FALSE(g.Validate().has_value());
    EXPECT_LE(g.node_count(), 10);
    EXPECT_LE(g.max_degree(), 4);
    EXPECT_GE(g.weight_bound(), 1);
    EXPECT_LE(g.weight_bound(), 6);
  }
}

TEST(Generators, ShapesAndErrors) {
  EXPECT_EQ(PathGraph(3).edge_count(), 2);
  EXPECT_EQ(CycleGraph(5).edge_count(), 5);
  EXPECT_EQ(StarGraph(4).max_degree(), 4);
  EXPECT_EQ(GridGraph(3, 4).edge_count(), 17);
  EXPECT_EQ(GnpGraph(10, 0.3, 7), GnpGraph(10, 0.3, 7));
  const WeightedGraph r = RandomRegularGraph(10, 3, 5);
  for (NodeId v = 0; v < r.node_count(); ++v) EXPECT_EQ(r.degree(v), 3);
  EXPECT_THROW(RandomRegularGraph(5, 3, 1), RangeError);
  EXPECT_THROW(CycleGraph(2), RangeError);
}

TEST(ForEachBidVector, VisitsEveryVectorOnce) {
  std::int64_t count = 0;
  ForEachBidVector(3, 2, [&](const BidVector&) { ++count; });
  EXPECT_EQ(count, 27);
}

}  // namespace
}  // namespace localmech
