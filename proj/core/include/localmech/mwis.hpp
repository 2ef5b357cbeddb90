#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "localmech/coloring.hpp"
#include "localmech/graph.hpp"
#include "localmech/mechanism.hpp"
#include "localmech/rational.hpp"
#include "localmech/sim.hpp"

namespace localmech {

enum class TieRule { kSmallerColorWins, kLargerColorWins };

struct MwisOptions {
  /// Tie order used by the allocation. The price protocol always assumes
  /// kSmallerColorWins; kLargerColorWins exists to plant faulty variants.
  TieRule tie_rule = TieRule::kSmallerColorWins;
  /// When false the price protocol ignores blocking neighbours (faulty variant).
  bool check_blocking = true;
};

/// Greedy local maxima: in each two-round step every active node that beats
/// all active neighbours under (bid, colour) joins and announces it; its
/// neighbours are eliminated and announce that in the next round.
class MwisAllocationProgram {
 public:
  struct Input {
    Weight bid = 0;
    std::int64_t color = 0;
  };
  using Output = char;  // 1 iff in the independent set

  struct State {
    std::int64_t invocation = 0;
    TieKey key;
    std::vector<TieKey> neighbor_keys;
    std::vector<char> neighbor_active;
  };

  explicit MwisAllocationProgram(TieRule tie_rule) : tie_rule_(tie_rule) {}

  State Init(const sim::NodeContext& ctx, const Input& input) const;
  std::optional<Output> Round(const sim::NodeContext& ctx, State& s,
                              std::span<const sim::Message> inbox, sim::Outbox& out) const;

 private:
  TieKey KeyOf(Weight bid, std::int64_t color) const;

  TieRule tie_rule_;
};

/// Three-round price protocol: share (bid, colour, membership); every
/// non-member tells each higher member neighbour whether another higher
/// member neighbour blocks it; members take the first unblocked lower
/// neighbour in descending order.
class MwisPriceProgram {
 public:
  struct Input {
    Weight bid = 0;
    std::int64_t color = 0;
    bool in_set = false;
  };
  using Output = std::optional<Weight>;

  struct Neighbor {
    TieKey key;
    bool in_set = false;
    std::optional<bool> blocked;  // answer received by a member
  };

  struct State {
    std::int64_t invocation = 0;
    Input input;
    std::vector<Neighbor> neighbors;
  };

  explicit MwisPriceProgram(bool check_blocking) : check_blocking_(check_blocking) {}

  State Init(const sim::NodeContext& ctx, const Input& input) const;
  std::optional<Output> Round(const sim::NodeContext& ctx, State& s,
                              std::span<const sim::Message> inbox, sim::Outbox& out) const;

 private:
  bool check_blocking_;
};

struct MwisAllocation {
  std::vector<char> in_set;
  sim::RoundTrace trace;
};

MwisAllocation MwisAllocate(const WeightedGraph& g, const BidVector& bids,
                            const ColorAssignment& coloring, const sim::ExecutionModel& model,
                            const MwisOptions& options = {});

PriceProtocolResult MwisPricesCongest(const WeightedGraph& g, const BidVector& bids,
                                      const ColorAssignment& coloring,
                                      std::span<const char> in_set,
                                      const sim::ExecutionModel& model,
                                      const MwisOptions& options = {});

struct RatioReport {
  Rational optimum;
  Rational achieved;
  /// Worse-over-better value; 1 when both are 0.
  Rational ratio;
  Rational bound;
  bool within_bound = false;
};

/// Checks OPT <= max(D, 1) * w(I) against brute force.
RatioReport MwisVerifyRatio(const WeightedGraph& g, std::span<const Rational> weights,
                            std::span<const char> in_set);

class MwisMechanism final : public BinaryMechanism {
 public:
  /// Colours g with ColorGraph under `model`.
  MwisMechanism(const WeightedGraph& g, sim::ExecutionModel model, MwisOptions options = {});
  MwisMechanism(const WeightedGraph& g, ColoringResult coloring, sim::ExecutionModel model,
                MwisOptions options = {});

  std::string_view name() const override { return "mwis"; }
  Objective objective() const override { return Objective::kMax; }
  const WeightedGraph& graph() const override { return graph_; }
  BinaryAllocation Allocate(const BidVector& bids) const override;
  std::optional<PriceProtocolResult> PriceProtocol(const BidVector& bids,
                                                   const BinaryAllocation& alloc) const override;
  sim::RoundTrace preprocessing_trace() const override { return coloring_.trace; }

  const ColorAssignment& coloring() const { return coloring_.coloring; }

 private:
  WeightedGraph graph_;
  ColoringResult coloring_;
  sim::ExecutionModel model_;
  MwisOptions options_;
};

}  // namespace localmech
