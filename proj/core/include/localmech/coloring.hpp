#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "localmech/graph.hpp"
#include "localmech/sim.hpp"

namespace localmech {

/// Colours per node (or per edge for line-graph colourings).
struct ColorAssignment {
  std::vector<std::int64_t> colors;
  std::int64_t palette_size = 0;

  std::int64_t operator[](std::size_t i) const { return colors[i]; }
};

struct ColoringResult {
  ColorAssignment coloring;
  sim::RoundTrace trace;
};

/// Deterministic colour reduction: Linial-style polynomial steps shrink the
/// id space to O(D^2) colours, then one colour class per round recolours
/// greedily into {0..D}. The schedule depends only on (id space, D), so
/// every node halts in the same round.
class ColorReduction {
 public:
  using Input = std::int64_t;  // initial colour, unique among neighbours
  using Output = std::int64_t;

  struct State {
    std::int64_t invocation = 0;
    std::int64_t color = 0;
    std::vector<std::int64_t> neighbor_colors;  // aligned with ctx.neighbors
  };

  struct LinialStep {
    std::int64_t prime = 0;
    std::int64_t degree = 0;  // polynomial degree
    std::int64_t palette_after = 0;
  };

  ColorReduction(std::int64_t id_space, int max_degree);

  State Init(const sim::NodeContext& ctx, const Input& input) const;
  std::optional<Output> Round(const sim::NodeContext& ctx, State& s,
                              std::span<const sim::Message> inbox, sim::Outbox& out) const;

  const std::vector<LinialStep>& linial_steps() const { return steps_; }
  /// Palette entering the greedy phase.
  std::int64_t reduced_palette() const { return reduced_palette_; }
  /// Handler invocations every node performs.
  std::int64_t total_rounds() const { return total_rounds_; }

 private:
  std::int64_t ApplyLinial(const LinialStep& step, std::int64_t color,
                           std::span<const std::int64_t> neighbor_colors) const;

  int max_degree_;
  std::vector<LinialStep> steps_;
  std::int64_t reduced_palette_ = 0;
  std::int64_t greedy_rounds_ = 0;
  std::int64_t total_rounds_ = 0;
};

/// Proper (D+1)-colouring of g computed by ColorReduction on g itself.
ColoringResult ColorGraph(const WeightedGraph& g, const sim::ExecutionModel& model);

/// Colouring proper on G^2 with palette D(G^2)+1 <= D^2+1, simulated on g.
ColoringResult ColorTwoHop(const WeightedGraph& g, const sim::ExecutionModel& model);

/// Edge colouring (per edge id) proper on the line graph, palette
/// D(L(g))+1 <= 2D-1, executed by endpoints simulating their edges.
/// Requires at least one edge.
ColoringResult ColorLineGraph(const WeightedGraph& g, const sim::ExecutionModel& model);

/// First conflicting pair on `g` (adjacent nodes with equal colours, or a
/// colour outside the palette), or nullopt.
std::optional<std::string> CheckProper(const WeightedGraph& g, const ColorAssignment& coloring);

}  // namespace localmech
