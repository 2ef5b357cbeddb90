#include "localmech/mwds.hpp"

#include <gtest/gtest.h>

#include "localmech/corpus.hpp"
#include "localmech/optimum.hpp"

namespace localmech {
namespace {

const sim::ExecutionModel kLocal = sim::ExecutionModel::Local();

WeightedGraph StarK14() {
  return StarGraph(4).WithWeights({1, 10, 10, 10, 10}, 10);
}

TEST(IneffKey, ComparesRatiosExactly) {
  EXPECT_TRUE((IneffKey{1, 3, 5} < IneffKey{1, 2, 0}));
  EXPECT_TRUE((IneffKey{2, 4, 1} == IneffKey{1, 2, 1}));
  EXPECT_TRUE((IneffKey{2, 4, 0} < IneffKey{1, 2, 1}));
  EXPECT_TRUE((IneffKey{0, 1, 0} < IneffKey{0, 3, 1}));
}

TEST(MwdsAllocate, StarPicksLightCenter) {
  const WeightedGraph g = StarK14();
  const MwdsMechanism mech(g, kLocal);
  EXPECT_EQ(mech.Allocate(g.weights()).selected, (std::vector<char>{1, 0, 0, 0, 0}));
  EXPECT_EQ(OptMwds(g, ToRationals(g.weights())), Rational(1));
}

TEST(MwdsAllocate, SingleNodeDominatesItself) {
  const WeightedGraph g(1, {}, {7}, 7);
  const MwdsMechanism mech(g, kLocal);
  EXPECT_EQ(mech.Allocate(g.weights()).selected, (std::vector<char>{1}));
}

TEST(MwdsAllocate, EdgePicksLowerIneffectiveness) {
  const WeightedGraph g(2, {{0, 1}}, {2, 3}, 3);
  const MwdsMechanism mech(g, kLocal);
  EXPECT_EQ(mech.Allocate(g.weights()).selected, (std::vector<char>{1, 0}));
}

TEST(MwdsNonAdaptive, MatchesExamples) {
  const WeightedGraph star = StarK14();
  const MwdsMechanism star_mech(star, kLocal);
  EXPECT_EQ(MwdsAllocateNonAdaptive(star, star.weights(), star_mech.two_hop_coloring()),
            (std::vector<char>{1, 0, 0, 0, 0}));
  const WeightedGraph edge(2, {{0, 1}}, {2, 3}, 3);
  const MwdsMechanism edge_mech(edge, kLocal);
  EXPECT_EQ(MwdsAllocateNonAdaptive(edge, edge.weights(), edge_mech.two_hop_coloring()),
            (std::vector<char>{1, 0}));
}

TEST(MwdsPrices, SingleNodeThresholdIsGridMaximum) {
  const WeightedGraph g(1, {}, {7}, 9);
  EXPECT_EQ(CriticalPrice(MwdsMechanism(g, kLocal), g.weights(), 0), std::optional<Weight>(9));
}

TEST(MwdsPrices, BinarySearchMatchesLinearScan) {
  const std::vector<WeightedGraph> graphs = {WeightedGraph(2, {{0, 1}}, {2, 3}, 3), StarK14()};
  for (const WeightedGraph& g : graphs) {
    const MwdsMechanism mech(g, kLocal);
    const BidVector& b = g.weights();
    const BinaryAllocation alloc = mech.Allocate(b);
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (!alloc.selected[v]) continue;
      std::optional<Weight> scanned;
      BidVector probe = b;
      for (Weight x = 0; x <= g.weight_bound(); ++x) {
        probe[v] = x;
        if (mech.Allocate(probe).selected[v]) scanned = x;
      }
      EXPECT_EQ(CriticalPrice(mech, b, v), scanned) << "node " << v;
    }
  }
}

TEST(MwdsVerifyRatio, FourCycleWithinHarmonicBound) {
  const WeightedGraph g = CycleGraph(4).WithWeights({1, 1, 1, 1}, 1);
  const MwdsMechanism mech(g, kLocal);
  const BinaryAllocation alloc = mech.Allocate(g.weights());
  const RatioReport report = MwdsVerifyRatio(g, ToRationals(g.weights()), alloc.selected);
  EXPECT_EQ(report.optimum, Rational(2));
  EXPECT_EQ(report.bound, Rational(11, 6));
  EXPECT_TRUE(report.within_bound);
}

TEST(MwdsProperties, DominatesAndMatchesNonAdaptive) {
  for (const WeightedGraph& g : RandomBoundedDegreeGraphs(40, 10, 4, 6, 31)) {
    const MwdsMechanism mech(g, kLocal);
    const MwdsAllocation a = mech.AllocateDetailed(g.weights());
    EXPECT_TRUE(IsDominatingSet(g, a.in_set));
    EXPECT_EQ(a.in_set, MwdsAllocateNonAdaptive(g, g.weights(), mech.two_hop_coloring()));
    EXPECT_TRUE(MwdsVerifyRatio(g, ToRationals(g.weights()), a.in_set).within_bound);
    const std::int64_t d = g.max_degree() + 1;
    EXPECT_LE(a.trace.rounds, 4 * d * d * d * (g.weight_bound() + 1) + 2);
  }
}

TEST(MwdsProperties, SameStepJoinersCoverDisjointNodes) {
  for (const WeightedGraph& g : RandomBoundedDegreeGraphs(40, 10, 4, 6, 37)) {
    const MwdsMechanism mech(g, kLocal);
    const MwdsAllocation a = mech.AllocateDetailed(g.weights());
    std::vector<char> covered(g.node_count(), 0);
    const std::int64_t last = *std::max_element(a.join_step.begin(), a.join_step.end());
    for (std::int64_t step = 1; step <= last; ++step) {
      std::vector<NodeId> claimed_by(g.node_count(), -1);
      std::vector<NodeId> joiners;
      for (NodeId v = 0; v < g.node_count(); ++v) {
        if (a.join_step[v] != step) continue;
        joiners.push_back(v);
        std::vector<NodeId> closed{v};
        closed.insert(closed.end(), g.neighbors(v).begin(), g.neighbors(v).end());
        std::int64_t uncovered = 0;
        for (NodeId u : closed) {
          if (covered[u]) continue;
          ++uncovered;
          EXPECT_EQ(claimed_by[u], -1) << "step " << step << " nodes " << claimed_by[u] << "," << v;
          claimed_by[u] = v;
        }
        EXPECT_EQ(a.join_key[v].uncovered, uncovered);
      }
      for (NodeId v : joiners) {
        covered[v] = 1;
        for (NodeId u : g.neighbors(v)) covered[u] = 1;
      }
    }
  }
}

}  // namespace
}  // namespace localmech
