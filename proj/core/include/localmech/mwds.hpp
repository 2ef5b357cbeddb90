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

/// Ineffectiveness w / d with the 2-hop colour as tie-breaker.
struct IneffKey {
  Weight weight = 0;
  std::int64_t uncovered = 1;  // d >= 1
  std::int64_t color = 0;

  Rational value() const { return Rational(weight, uncovered); }

  /// Exact cross-multiplied comparison; equal ratios fall back to colour.
  friend bool operator<(const IneffKey& a, const IneffKey& b) {
    const std::int64_t lhs = a.weight * b.uncovered;
    const std::int64_t rhs = b.weight * a.uncovered;
    if (lhs != rhs) return lhs < rhs;
    return a.color < b.color;
  }
  /// Same ratio and colour (the raw counts may differ, e.g. 2/4 vs 1/2).
  friend bool operator==(const IneffKey& a, const IneffKey& b) {
    return a.weight * b.uncovered == b.weight * a.uncovered && a.color == b.color;
  }
};

/// Greedy dominating set, four rounds per step:
///   A  apply joins announced last step, broadcast own covered flag;
///   B  count uncovered nodes d in N+(v), halt if d = 0, else broadcast key;
///   C  broadcast the minimum key over N+(v);
///   D  join iff every minimum received (and its own) is its key.
/// Coverage changes reach distance 2 only through active (uncovered-
/// neighbourhood) nodes, which is where any conflict must lie.
class MwdsProgram {
 public:
  struct Input {
    Weight bid = 0;
    std::int64_t color = 0;  // proper on G^2
  };
  struct Output {
    bool in_set = false;
    std::int64_t step = 0;  // join step, 0 if not joined
    IneffKey key;           // key at joining
  };
  struct State {
    std::int64_t invocation = 0;
    Input input;
    bool covered = false;
    std::vector<char> neighbor_covered;
    IneffKey key;
    IneffKey local_min;
  };

  State Init(const sim::NodeContext& ctx, const Input& input) const;
  std::optional<Output> Round(const sim::NodeContext& ctx, State& s,
                              std::span<const sim::Message> inbox, sim::Outbox& out) const;

  static constexpr std::int64_t kRoundsPerStep = 4;
};

struct MwdsAllocation {
  std::vector<char> in_set;
  std::vector<std::int64_t> join_step;  // 0 for non-members
  std::vector<IneffKey> join_key;
  sim::RoundTrace trace;
};

MwdsAllocation MwdsAllocate(const WeightedGraph& g, const BidVector& bids,
                            const ColorAssignment& two_hop_coloring,
                            const sim::ExecutionModel& model);

/// Walks all value classes (f, colour) in increasing order; at each class
/// every node whose current key equals it (and still has an uncovered node
/// in N+(v)) joins.
std::vector<char> MwdsAllocateNonAdaptive(const WeightedGraph& g, const BidVector& bids,
                                          const ColorAssignment& two_hop_coloring);

/// Checks w(D) <= H_{D+1} OPT against brute force.
RatioReport MwdsVerifyRatio(const WeightedGraph& g, std::span<const Rational> weights,
                            std::span<const char> in_set);

class MwdsMechanism final : public BinaryMechanism {
 public:
  MwdsMechanism(const WeightedGraph& g, sim::ExecutionModel model);
  MwdsMechanism(const WeightedGraph& g, ColoringResult two_hop_coloring,
                sim::ExecutionModel model);

  std::string_view name() const override { return "mwds"; }
  Objective objective() const override { return Objective::kMin; }
  const WeightedGraph& graph() const override { return graph_; }
  BinaryAllocation Allocate(const BidVector& bids) const override;
  sim::RoundTrace preprocessing_trace() const override { return coloring_.trace; }

  MwdsAllocation AllocateDetailed(const BidVector& bids) const;
  const ColorAssignment& two_hop_coloring() const { return coloring_.coloring; }

 private:
  WeightedGraph graph_;
  ColoringResult coloring_;
  sim::ExecutionModel model_;
};

}  // namespace localmech
