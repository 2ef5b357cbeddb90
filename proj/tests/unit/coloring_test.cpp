#include "localmech/coloring.hpp"

#include <set>

#include <gtest/gtest.h>

#include "localmech/corpus.hpp"
#include "localmech/errors.hpp"

namespace localmech {
namespace {

const sim::ExecutionModel kLocal = sim::ExecutionModel::Local();

std::size_t Distinct(const ColorAssignment& c) {
  return std::set<std::int64_t>(c.colors.begin(), c.colors.end()).size();
}

TEST(ColorGraph, Examples) {
  const ColoringResult single = ColorGraph(WeightedGraph::Structure(1, {}), kLocal);
  EXPECT_EQ(single.coloring.colors, (std::vector<std::int64_t>{0}));
  EXPECT_EQ(single.coloring.palette_size, 1);
  EXPECT_EQ(single.trace.rounds, 1);

  const ColoringResult edge = ColorGraph(PathGraph(2), kLocal);
  EXPECT_EQ(Distinct(edge.coloring), 2u);
  EXPECT_FALSE(CheckProper(PathGraph(2), edge.coloring).has_value());

  const ColoringResult c5 = ColorGraph(CycleGraph(5), kLocal);
  EXPECT_LE(c5.coloring.palette_size, 3);
  EXPECT_FALSE(CheckProper(CycleGraph(5), c5.coloring).has_value());
}

TEST(ColorTwoHop, Examples) {
  EXPECT_EQ(Distinct(ColorTwoHop(PathGraph(3), kLocal).coloring), 3u);
  EXPECT_EQ(ColorTwoHop(WeightedGraph::Structure(1, {}), kLocal).coloring.colors,
            (std::vector<std::int64_t>{0}));
  EXPECT_EQ(Distinct(ColorTwoHop(StarGraph(4), kLocal).coloring), 5u);
}

TEST(ColorLineGraph, Examples) {
  EXPECT_EQ(ColorLineGraph(PathGraph(2), kLocal).coloring.colors, (std::vector<std::int64_t>{0}));
  EXPECT_EQ(Distinct(ColorLineGraph(PathGraph(3), kLocal).coloring), 2u);
  EXPECT_EQ(Distinct(ColorLineGraph(CycleGraph(3), kLocal).coloring), 3u);
  EXPECT_THROW(ColorLineGraph(WeightedGraph::Structure(2, {}), kLocal), ContractViolation);
}

TEST(Coloring, ProperWithinPaletteBoundsOnRandomGraphs) {
  std::vector<WeightedGraph> graphs = RandomBoundedDegreeGraphs(40, 10, 4, 3, 91);
  graphs.push_back(GridGraph(6, 6));
  graphs.push_back(RandomRegularGraph(40, 5, 3));
  graphs.push_back(GnpGraph(60, 0.1, 4));
  for (const WeightedGraph& g : graphs) {
    const std::int64_t delta = g.max_degree();
    const ColoringResult plain = ColorGraph(g, kLocal);
    EXPECT_FALSE(CheckProper(g, plain.coloring).has_value());
    EXPECT_LE(plain.coloring.palette_size, delta + 1);

    const ColoringResult two_hop = ColorTwoHop(g, kLocal);
    EXPECT_FALSE(CheckProper(SquareGraph(g), two_hop.coloring).has_value());
    EXPECT_LE(two_hop.coloring.palette_size, delta * delta + 1);

    if (g.edge_count() == 0) continue;
    const ColoringResult line = ColorLineGraph(g, kLocal);
    EXPECT_FALSE(CheckProper(LineGraph(g), line.coloring).has_value());
    EXPECT_LE(line.coloring.palette_size, std::max<std::int64_t>(1, 2 * delta - 1));
  }
}

TEST(Coloring, IgnoresWeights) {
  const WeightedGraph a = CycleGraph(7).WithWeights({1, 2, 3, 4, 5, 6, 7}, 9);
  const WeightedGraph b = CycleGraph(7).WithWeights({9, 0, 9, 0, 9, 0, 9}, 9);
  EXPECT_EQ(ColorGraph(a, kLocal).coloring.colors, ColorGraph(b, kLocal).coloring.colors);
  EXPECT_EQ(ColorTwoHop(a, kLocal).coloring.colors, ColorTwoHop(b, kLocal).coloring.colors);
  EXPECT_EQ(ColorLineGraph(a, kLocal).coloring.colors, ColorLineGraph(b, kLocal).coloring.colors);
}

TEST(Coloring, TwoHopSimulationCostsTwoRoundsPerStep) {
  const WeightedGraph g = CycleGraph(12);
  const ColorReduction direct(g.node_count(), SquareGraph(g).max_degree());
  const ColoringResult simulated = ColorTwoHop(g, kLocal);
  EXPECT_EQ(simulated.trace.rounds, 2 * direct.total_rounds() + 1);
}

TEST(ColorReduction, ScheduleShrinksLargeIdSpaces) {
  const ColorReduction reduction(1'000'000, 3);
  EXPECT_FALSE(reduction.linial_steps().empty());
  EXPECT_LT(reduction.reduced_palette(), 1'000'000);
  EXPECT_LE(reduction.total_rounds(), 1 + 10 + reduction.reduced_palette());
}

}  // namespace
}  // namespace localmech
