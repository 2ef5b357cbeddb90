#include "localmech/coloring.hpp"

#include <algorithm>
#include <variant>

#include "localmech/errors.hpp"
#include "localmech/sim_adapters.hpp"

namespace localmech {
namespace {

bool IsPrime(std::int64_t x) {
  if (x < 2) return false;
  for (std::int64_t d = 2; d * d <= x; ++d) {
    if (x % d == 0) return false;
  }
  return true;
}

/// Smallest q with q^e >= m, saturating.
std::int64_t IntRoot(std::int64_t m, std::int64_t e) {
  std::int64_t q = 1;
  auto pow_at_least = [&](std::int64_t base) {
    std::int64_t acc = 1;
    for (std::int64_t i = 0; i < e; ++i) {
      if (acc >= (m + base - 1) / base) return true;
      acc *= base;
    }
    return acc >= m;
  };
  while (!pow_at_least(q)) ++q;
  return q;
}

}  // namespace

ColorReduction::ColorReduction(std::int64_t id_space, int max_degree) : max_degree_(max_degree) {
  if (max_degree == 0) {
    reduced_palette_ = 1;
    total_rounds_ = 1;
    return;
  }
  std::int64_t palette = std::max<std::int64_t>(id_space, 1);
  while (true) {
    std::optional<LinialStep> best;
    for (std::int64_t d = 1; d <= 62; ++d) {
      std::int64_t q = std::max<std::int64_t>(max_degree * d + 1, IntRoot(palette, d + 1));
      while (!IsPrime(q)) ++q;
      const std::int64_t next = q * q;
      if (!best || next < best->palette_after) best = LinialStep{q, d, next};
      if (max_degree * d + 1 > palette) break;
    }
    if (!best || best->palette_after >= palette) break;
    steps_.push_back(*best);
    palette = best->palette_after;
  }
  reduced_palette_ = palette;
  greedy_rounds_ = std::max<std::int64_t>(0, palette - (max_degree + 1));
  total_rounds_ = 1 + static_cast<std::int64_t>(steps_.size()) + greedy_rounds_;
}

ColorReduction::State ColorReduction::Init(const sim::NodeContext& ctx, const Input& input) const {
  State s;
  s.color = input;
  s.neighbor_colors.assign(ctx.neighbors.size(), -1);
  return s;
}

std::int64_t ColorReduction::ApplyLinial(const LinialStep& step, std::int64_t color,
                                         std::span<const std::int64_t> neighbor_colors) const {
  const std::int64_t q = step.prime;
  auto evaluate = [&](std::int64_t c, std::int64_t x) {
    // Coefficients are the base-q digits of c.
    std::int64_t result = 0;
    std::int64_t power = 1;
    for (std::int64_t i = 0; i <= step.degree; ++i) {
      result = (result + (c % q) * power) % q;
      c /= q;
      power = (power * x) % q;
    }
    return result;
  };
  for (std::int64_t x = 0; x < q; ++x) {
    const std::int64_t mine = evaluate(color, x);
    bool clash = false;
    for (std::int64_t other : neighbor_colors) {
      if (other >= 0 && evaluate(other, x) == mine) {
        clash = true;
        break;
      }
    }
    if (!clash) return x * q + mine;
  }
  throw ContractViolation("colour reduction found no free evaluation point");
}

std::optional<ColorReduction::Output> ColorReduction::Round(const sim::NodeContext& ctx, State& s,
                                                            std::span<const sim::Message> inbox,
                                                            sim::Outbox& out) const {
  ++s.invocation;
  if (max_degree_ == 0) return 0;
  for (const sim::Message& m : inbox) {
    const int idx = ctx.NeighborIndex(m.from);
    if (idx >= 0) s.neighbor_colors[idx] = static_cast<std::int64_t>(m.payload[0]);
  }
  const auto linial_count = static_cast<std::int64_t>(steps_.size());
  bool changed = s.invocation == 1;
  std::int64_t palette = s.invocation == 1 ? ctx.node_count : 0;
  if (s.invocation >= 2 && s.invocation <= 1 + linial_count) {
    const LinialStep& step = steps_[s.invocation - 2];
    s.color = ApplyLinial(step, s.color, s.neighbor_colors);
    palette = step.palette_after;
    changed = true;
  } else if (s.invocation > 1 + linial_count) {
    const std::int64_t target = reduced_palette_ - 1 - (s.invocation - 2 - linial_count);
    if (s.color == target) {
      std::vector<char> used(max_degree_ + 1, 0);
      for (std::int64_t c : s.neighbor_colors) {
        if (c >= 0 && c <= max_degree_) used[c] = 1;
      }
      s.color = std::find(used.begin(), used.end(), 0) - used.begin();
      changed = true;
    }
    palette = reduced_palette_;
  }
  if (s.invocation == total_rounds_) return s.color;
  if (changed) {
    sim::Payload p;
    p.Add(static_cast<std::uint64_t>(s.color),
          sim::BitsFor(std::max<std::int64_t>(palette, ctx.node_count)));
    out.Broadcast(p);
  }
  return std::nullopt;
}

ColoringResult ColorGraph(const WeightedGraph& g, const sim::ExecutionModel& model) {
  const ColorReduction program(g.node_count(), g.max_degree());
  std::vector<std::int64_t> ids(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) ids[v] = v;
  auto run = sim::Run(program, g, std::span<const std::int64_t>(ids), model);
  return {{std::move(run.outputs), g.max_degree() + 1}, run.trace};
}

ColoringResult ColorTwoHop(const WeightedGraph& g, const sim::ExecutionModel& model) {
  const int square_degree = SquareGraph(g).max_degree();
  const sim::TwoHopSimulation<ColorReduction> program(
      ColorReduction(g.node_count(), square_degree), square_degree);
  std::vector<std::int64_t> ids(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) ids[v] = v;
  auto run = sim::Run(program, g, std::span<const std::int64_t>(ids), model);
  return {{std::move(run.outputs), square_degree + 1}, run.trace};
}

ColoringResult ColorLineGraph(const WeightedGraph& g, const sim::ExecutionModel& model) {
  if (g.edge_count() == 0) throw ContractViolation("line-graph colouring needs an edge");
  const int line_degree = LineGraph(g).max_degree();
  std::vector<std::int64_t> edge_ids(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) edge_ids[e] = e;
  const sim::LineGraphSimulation<ColorReduction> program(
      ColorReduction(g.edge_count(), line_degree), g, edge_ids, line_degree);
  std::vector<std::monostate> inputs(g.node_count());
  auto run = sim::Run(program, g, std::span<const std::monostate>(inputs), model);

  ColorAssignment coloring{std::vector<std::int64_t>(g.edge_count(), -1), line_degree + 1};
  for (const auto& per_node : run.outputs) {
    for (const auto& [e, color] : per_node) {
      if (coloring.colors[e] >= 0 && coloring.colors[e] != color) {
        throw ContractViolation("edge replicas disagree on colour of edge " + std::to_string(e));
      }
      coloring.colors[e] = color;
    }
  }
  return {std::move(coloring), run.trace};
}

std::optional<std::string> CheckProper(const WeightedGraph& g, const ColorAssignment& coloring) {
  if (static_cast<NodeId>(coloring.colors.size()) != g.node_count()) {
    return "colour count mismatch";
  }
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (coloring.colors[v] < 0 || coloring.colors[v] >= coloring.palette_size) {
      return "colour of node " + std::to_string(v) + " outside palette";
    }
  }
  for (const Edge& e : g.edges()) {
    if (coloring.colors[e.u] == coloring.colors[e.v]) {
      return "nodes " + std::to_string(e.u) + " and " + std::to_string(e.v) + " share colour " +
             std::to_string(coloring.colors[e.u]);
    }
  }
  return std::nullopt;
}

}  // namespace localmech
