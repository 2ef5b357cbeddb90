#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "localmech/coloring.hpp"
#include "localmech/graph.hpp"
#include "localmech/mechanism.hpp"
#include "localmech/mwis.hpp"
#include "localmech/rational.hpp"
#include "localmech/sim.hpp"

namespace localmech {

/// Local-ratio vertex cover, one edge colour class per round. In round k+1
/// the endpoints of every colour-k edge exchange residuals; in round k+2
/// both apply m(e) = min(t(u), t(v)). A node is in the cover iff it has an
/// incident edge and its residual reaches 0.
class MwvcProgram {
 public:
  struct IncidentEdge {
    EdgeId edge = 0;
    NodeId other = 0;
    std::int64_t color = 0;
  };
  struct Input {
    Weight bid = 0;
    std::vector<IncidentEdge> edges;
  };
  struct Output {
    bool in_cover = false;
    Rational residual;
    std::vector<std::pair<EdgeId, Rational>> charges;
  };
  struct State {
    std::int64_t invocation = 0;
    Input input;
    Rational residual;
    std::vector<std::pair<EdgeId, Rational>> charges;
  };

  explicit MwvcProgram(std::int64_t palette) : palette_(palette) {}

  State Init(const sim::NodeContext& ctx, const Input& input) const;
  std::optional<Output> Round(const sim::NodeContext& ctx, State& s,
                              std::span<const sim::Message> inbox, sim::Outbox& out) const;

  std::int64_t total_rounds() const { return palette_ + 1; }

 private:
  std::int64_t palette_;
};

struct MwvcAllocation {
  std::vector<char> in_cover;
  std::vector<Rational> residual;
  std::vector<Rational> charge;  // per edge id
  sim::RoundTrace trace;
};

/// Requires `edge_coloring` proper on the line graph (ignored when g has no edges).
MwvcAllocation MwvcAllocate(const WeightedGraph& g, const BidVector& bids,
                            const ColorAssignment& edge_coloring,
                            const sim::ExecutionModel& model);

/// Centralised reference: applies the local-ratio update to the edges in
/// `order` one at a time.
MwvcAllocation MwvcSequential(const WeightedGraph& g, std::span<const Rational> weights,
                              std::span<const EdgeId> order);

/// Checks w(C) <= 2 OPT against brute force.
RatioReport MwvcVerifyRatio(const WeightedGraph& g, std::span<const Rational> weights,
                            std::span<const char> in_cover);

class MwvcMechanism final : public BinaryMechanism {
 public:
  MwvcMechanism(const WeightedGraph& g, sim::ExecutionModel model);
  MwvcMechanism(const WeightedGraph& g, ColoringResult edge_coloring, sim::ExecutionModel model);

  std::string_view name() const override { return "mwvc"; }
  Objective objective() const override { return Objective::kMin; }
  const WeightedGraph& graph() const override { return graph_; }
  BinaryAllocation Allocate(const BidVector& bids) const override;
  sim::RoundTrace preprocessing_trace() const override { return coloring_.trace; }

  MwvcAllocation AllocateDetailed(const BidVector& bids) const;
  const ColorAssignment& edge_coloring() const { return coloring_.coloring; }

 private:
  WeightedGraph graph_;
  ColoringResult coloring_;
  sim::ExecutionModel model_;
};

}  // namespace localmech
