#include "localmech/mechanism.hpp"

#include <gtest/gtest.h>

#include "json.hpp"
#include "localmech/corpus.hpp"
#include "localmech/errors.hpp"
#include "localmech/mwds.hpp"
#include "localmech/mwis.hpp"
#include "localmech/mwvc.hpp"

namespace localmech {
namespace {

const sim::ExecutionModel kLocal = sim::ExecutionModel::Local();

/// Selects v iff its bid is at most every neighbour's: non-monotone for a
/// maximisation problem.
class LocalMinimaMechanism final : public BinaryMechanism {
 public:
  explicit LocalMinimaMechanism(WeightedGraph g) : g_(std::move(g)) {}
  std::string_view name() const override { return "local-minima"; }
  Objective objective() const override { return Objective::kMax; }
  const WeightedGraph& graph() const override { return g_; }
  BinaryAllocation Allocate(const BidVector& bids) const override {
    BinaryAllocation a;
    for (NodeId v = 0; v < g_.node_count(); ++v) {
      bool min = true;
      for (NodeId u : g_.neighbors(v)) min = min && bids[v] <= bids[u];
      a.selected.push_back(min ? 1 : 0);
    }
    return a;
  }
  sim::RoundTrace preprocessing_trace() const override { return {}; }

 private:
  WeightedGraph g_;
};

TEST(CriticalPrice, IsolatedMwisNodeHasZeroThreshold) {
  const WeightedGraph g(1, {}, {3}, 5);
  EXPECT_EQ(CriticalPrice(MwisMechanism(g, kLocal), g.weights(), 0), std::optional<Weight>(0));
}

TEST(CriticalPrice, MwisEdgeWinnerWithSmallerColour) {
  const WeightedGraph g(2, {{0, 1}}, {5, 3}, 6);
  const MwisMechanism mech(g, ColoringResult{{{0, 1}, 2}, {}}, kLocal);
  EXPECT_EQ(CriticalPrice(mech, g.weights(), 0), std::optional<Weight>(3));
  EXPECT_EQ(CriticalPrice(mech, g.weights(), 1), std::optional<Weight>(6));
}

TEST(CriticalPrice, NeverSelectedHasNoPrice) {
  // An isolated node is never part of a vertex cover.
  const WeightedGraph g(1, {}, {2}, 4);
  EXPECT_EQ(CriticalPrice(MwvcMechanism(g, kLocal), g.weights(), 0), std::nullopt);
}

TEST(CriticalPrice, DetectsNonMonotoneRule) {
  const WeightedGraph g(2, {{0, 1}}, {1, 2}, 3);
  const LocalMinimaMechanism mech(g);
  EXPECT_THROW(CriticalPrice(mech, g.weights(), 0), MonotonicityViolation);
}

TEST(CriticalPrice, BinarySearchMatchesLinearScan) {
  for (const WeightedGraph& g : RandomBoundedDegreeGraphs(15, 7, 3, 5, 51)) {
    const MwisMechanism mwis(g, kLocal);
    const MwvcMechanism mwvc(g, kLocal);
    const MwdsMechanism mwds(g, kLocal);
    for (const BinaryMechanism* mech : {static_cast<const BinaryMechanism*>(&mwis),
                                        static_cast<const BinaryMechanism*>(&mwvc),
                                        static_cast<const BinaryMechanism*>(&mwds)}) {
      const BidVector& b = g.weights();
      for (NodeId v = 0; v < g.node_count(); ++v) {
        std::optional<Weight> scanned;
        BidVector probe = b;
        for (Weight x = 0; x <= g.weight_bound(); ++x) {
          probe[v] = x;
          if (!mech->Allocate(probe).selected[v]) continue;
          if (mech->objective() == Objective::kMax && !scanned) scanned = x;
          if (mech->objective() == Objective::kMin) scanned = x;
        }
        EXPECT_EQ(CriticalPrice(*mech, b, v), scanned) << mech->name() << " node " << v;
      }
    }
  }
}

TEST(PaymentsFromPrices, SignsFollowObjective) {
  const std::vector<char> selected{1, 0};
  const std::vector<std::optional<Weight>> prices{3, std::nullopt};
  EXPECT_EQ(PaymentsFromPrices(Objective::kMax, selected, prices),
            (std::vector<Rational>{Rational(-3), Rational(0)}));
  const std::vector<std::optional<Weight>> min_prices{5, std::nullopt};
  EXPECT_EQ(PaymentsFromPrices(Objective::kMin, selected, min_prices),
            (std::vector<Rational>{Rational(5), Rational(0)}));
  const std::vector<std::optional<Weight>> missing{std::nullopt, std::nullopt};
  EXPECT_THROW(PaymentsFromPrices(Objective::kMax, selected, missing), ContractViolation);
}

TEST(TotalUtility, Examples) {
  EXPECT_EQ(TotalUtility(Objective::kMax, true, Rational(5), Rational(-3)), Rational(2));
  EXPECT_EQ(TotalUtility(Objective::kMin, true, Rational(3), Rational(5)), Rational(2));
  EXPECT_EQ(TotalUtility(Objective::kMin, false, Rational(3), Rational(0)), Rational(0));
  EXPECT_EQ(SlotUtility(Rational(10), Rational(5), Rational(-18)), Rational(32));
}

TEST(Discretize, RoundsTowardsTheMechanism) {
  const DiscretizationConfig cfg{Rational(1, 2), Rational(2)};
  const std::vector<Rational> bids{Rational(13, 10)};
  EXPECT_EQ(Discretize(bids, cfg, Objective::kMax), (BidVector{2}));
  EXPECT_EQ(Discretize(bids, cfg, Objective::kMin), (BidVector{3}));
  const std::vector<Rational> on_grid{Rational(3, 2), Rational(0), Rational(2)};
  EXPECT_EQ(Discretize(on_grid, cfg, Objective::kMax), (BidVector{3, 0, 4}));
  EXPECT_EQ(Discretize(on_grid, cfg, Objective::kMin), (BidVector{3, 0, 4}));
}

TEST(Discretize, RejectsOutOfRange) {
  const DiscretizationConfig cfg{Rational(1, 2), Rational(2)};
  EXPECT_THROW(Discretize(std::vector<Rational>{Rational(5, 2)}, cfg, Objective::kMax),
               RangeError);
  EXPECT_THROW(Discretize(std::vector<Rational>{Rational(-1)}, cfg, Objective::kMin), RangeError);
  const DiscretizationConfig bad{Rational(3, 4), Rational(2)};
  EXPECT_THROW(bad.GridSize(), RangeError);
}

TEST(RunMechanism, IsolatedMwisNode) {
  const WeightedGraph g(1, {}, {7}, 7);
  const MechanismResult r = RunMechanism(MwisMechanism(g, kLocal), g.weights());
  EXPECT_EQ(r.allocation, (std::vector<std::int64_t>{1}));
  EXPECT_EQ(r.payments, (std::vector<Rational>{Rational(0)}));
  EXPECT_EQ(TotalUtility(Objective::kMax, true, Rational(7), r.payments[0]), Rational(7));
}

TEST(RunMechanism, MwvcEdgeObjective) {
  const WeightedGraph g(2, {{0, 1}}, {5, 3}, 5);
  const MechanismResult r = RunMechanism(MwvcMechanism(g, kLocal), g.weights());
  EXPECT_EQ(r.allocation, (std::vector<std::int64_t>{0, 1}));
  EXPECT_EQ(r.objective_value, Rational(-3));
  EXPECT_EQ(r.payments, (std::vector<Rational>{Rational(0), Rational(5)}));
}

TEST(RunMechanism, JsonHasDocumentedKeys) {
  const WeightedGraph g(3, {{0, 1}, {1, 2}}, {1, 5, 1}, 5);
  const MechanismResult r = RunMechanism(MwisMechanism(g, kLocal), g.weights());
  const auto j = nlohmann::json::parse(ToJson(r));
  EXPECT_EQ(j["mechanism"], "mwis");
  EXPECT_EQ(j["allocation"], nlohmann::json::parse("[0,1,0]"));
  // Colours are the ids here; at bid 1 the middle node loses the tie to node 0.
  EXPECT_EQ(j["payments"][1], -2);
  EXPECT_EQ(j["objective_value"], 5);
  EXPECT_TRUE(j.contains("rounds"));
  EXPECT_TRUE(j.contains("messages_total"));
  EXPECT_TRUE(j.contains("max_message_bits"));
}

}  // namespace
}  // namespace localmech
