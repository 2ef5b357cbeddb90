#include "localmech/mwvc.hpp"

#include <algorithm>
#include <map>

#include <gtest/gtest.h>

#include "localmech/corpus.hpp"
#include "localmech/optimum.hpp"

namespace localmech {
namespace {

const sim::ExecutionModel kLocal = sim::ExecutionModel::Local();

TEST(MwvcAllocate, SingleEdgeTakesLighterEndpoint) {
  const WeightedGraph g(2, {{0, 1}}, {5, 3}, 5);
  const MwvcMechanism mech(g, kLocal);
  const MwvcAllocation a = mech.AllocateDetailed(g.weights());
  EXPECT_EQ(a.in_cover, (std::vector<char>{0, 1}));
  EXPECT_EQ(a.residual, (std::vector<Rational>{Rational(2), Rational(0)}));
  EXPECT_EQ(a.charge, (std::vector<Rational>{Rational(3)}));
  EXPECT_EQ(OptMwvc(g, ToRationals(g.weights())), Rational(3));
}

TEST(MwvcSequential, PathRealisesRatioTwo) {
  const WeightedGraph g(3, {{0, 1}, {1, 2}}, {1, 1, 1}, 1);
  const std::vector<EdgeId> order{0, 1};
  const MwvcAllocation a = MwvcSequential(g, ToRationals(g.weights()), order);
  EXPECT_EQ(a.in_cover, (std::vector<char>{1, 1, 0}));
  const RatioReport report = MwvcVerifyRatio(g, ToRationals(g.weights()), a.in_cover);
  EXPECT_EQ(report.optimum, Rational(1));
  EXPECT_EQ(report.ratio, Rational(2));
  EXPECT_TRUE(report.within_bound);
}

TEST(MwvcAllocate, ZeroWeightNodeJoins) {
  const WeightedGraph g(3, {{0, 1}, {1, 2}}, {4, 0, 4}, 4);
  const MwvcMechanism mech(g, kLocal);
  EXPECT_EQ(mech.Allocate(g.weights()).selected, (std::vector<char>{0, 1, 0}));
}

TEST(MwvcPrices, SingleEdgeThresholdIsPartnerBid) {
  const WeightedGraph g(2, {{0, 1}}, {5, 3}, 7);
  const MwvcMechanism mech(g, kLocal);
  EXPECT_EQ(CriticalPrice(mech, g.weights(), 1), std::optional<Weight>(5));
}

TEST(MwvcPrices, IsolatedNodeNeverCovers) {
  const WeightedGraph g(1, {}, {3}, 3);
  const MechanismResult r = RunMechanism(MwvcMechanism(g, kLocal), g.weights());
  EXPECT_EQ(r.allocation, (std::vector<std::int64_t>{0}));
  EXPECT_EQ(r.prices[0], std::nullopt);
  EXPECT_EQ(r.payments[0], Rational(0));
}

TEST(MwvcPrices, PathMiddleAlwaysCovered) {
  const WeightedGraph g(3, {{0, 1}, {1, 2}}, {1, 1, 1}, 2);
  const MwvcMechanism mech(g, kLocal);
  EXPECT_EQ(CriticalPrice(mech, g.weights(), 1), std::optional<Weight>(g.weight_bound()));
}

TEST(MwvcProperties, CoverChargesAndDualBound) {
  for (const WeightedGraph& g : RandomBoundedDegreeGraphs(40, 10, 4, 6, 17)) {
    const MwvcMechanism mech(g, kLocal);
    const MwvcAllocation a = mech.AllocateDetailed(g.weights());
    EXPECT_TRUE(IsVertexCover(g, a.in_cover));
    Rational total_charge(0);
    std::vector<Rational> charged(g.node_count(), Rational(0));
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      EXPECT_GE(a.charge[e], 0);
      total_charge += a.charge[e];
      charged[g.edge(e).u] += a.charge[e];
      charged[g.edge(e).v] += a.charge[e];
    }
    for (NodeId v = 0; v < g.node_count(); ++v) {
      EXPECT_GE(a.residual[v], 0);
      EXPECT_EQ(a.residual[v], Rational(g.weight(v)) - charged[v]);
    }
    const std::vector<Rational> w = ToRationals(g.weights());
    EXPECT_LE(total_charge, OptMwvc(g, w));
    EXPECT_LE(SetWeight(w, a.in_cover), 2 * total_charge);
  }
}

TEST(MwvcProperties, OrderWithinColourClassIsIrrelevant) {
  Rng rng(9);
  for (const WeightedGraph& g : RandomBoundedDegreeGraphs(30, 10, 4, 6, 23)) {
    if (g.edge_count() == 0) continue;
    const MwvcMechanism mech(g, kLocal);
    const MwvcAllocation distributed = mech.AllocateDetailed(g.weights());
    std::map<std::int64_t, std::vector<EdgeId>> classes;
    for (EdgeId e = 0; e < g.edge_count(); ++e) classes[mech.edge_coloring()[e]].push_back(e);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<EdgeId> order;
      for (auto& [color, members] : classes) {
        for (std::size_t i = members.size(); i > 1; --i) {
          std::swap(members[i - 1], members[static_cast<std::size_t>(rng.Uniform(0, i - 1))]);
        }
        order.insert(order.end(), members.begin(), members.end());
      }
      const MwvcAllocation sequential = MwvcSequential(g, ToRationals(g.weights()), order);
      EXPECT_EQ(sequential.residual, distributed.residual);
      EXPECT_EQ(sequential.in_cover, distributed.in_cover);
    }
  }
}

TEST(MwvcProperties, RoundsIgnoreWeights) {
  Rng rng(4);
  for (const WeightedGraph& g : RandomBoundedDegreeGraphs(20, 10, 4, 6, 29)) {
    const MwvcMechanism mech(g, kLocal);
    const std::int64_t rounds = mech.Allocate(g.weights()).trace.rounds;
    EXPECT_LE(rounds, 2 * g.max_degree() + 1);
    for (int trial = 0; trial < 5; ++trial) {
      EXPECT_EQ(mech.Allocate(RandomBids(g.node_count(), g.weight_bound(), rng)).trace.rounds,
                rounds);
    }
  }
}

}  // namespace
}  // namespace localmech
