#pragma once

#include <filesystem>
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

/// Slot rates, slot 1 best: alpha_1 >= alpha_2 >= ... >= 0.
class RateSchedule {
 public:
  RateSchedule() = default;

  /// Validates and pads with zeros (or truncates) to `slot_count` entries.
  /// Throws RangeError for negative or increasing rates.
  RateSchedule(std::vector<Rational> rates, int slot_count);

  const std::vector<Rational>& rates() const { return rates_; }
  int slot_count() const { return static_cast<int>(rates_.size()); }
  /// 1-based.
  const Rational& rate(std::int64_t slot) const { return rates_.at(slot - 1); }

 private:
  std::vector<Rational> rates_;
};

/// One rational per line, best slot first; blank lines and '#' comments
/// are skipped. Throws FormatError for malformed or increasing rates.
std::vector<Rational> ParseRates(std::string_view text);
std::vector<Rational> ReadRatesFile(const std::filesystem::path& path);

/// Greedy slot claiming: after one round sharing (bid, colour), every
/// unassigned node that beats all unassigned neighbours takes the lowest
/// slot no assigned neighbour holds and announces it; one round per step.
class SlotProgram {
 public:
  struct Input {
    Weight bid = 0;
    std::int64_t color = 0;
  };
  using Output = std::int64_t;  // slot, 1-based

  struct State {
    std::int64_t invocation = 0;
    TieKey key;
    std::vector<TieKey> neighbor_keys;
    std::vector<char> neighbor_assigned;
    std::vector<char> slot_taken;  // index 0 unused
  };

  State Init(const sim::NodeContext& ctx, const Input& input) const;
  std::optional<Output> Round(const sim::NodeContext& ctx, State& s,
                              std::span<const sim::Message> inbox, sim::Outbox& out) const;
};

struct SlotAllocation {
  std::vector<std::int64_t> slot;
  sim::RoundTrace trace;
};

SlotAllocation SlotAllocate(const WeightedGraph& g, const BidVector& bids,
                            const ColorAssignment& coloring, const sim::ExecutionModel& model);

struct ThresholdEntry {
  std::int64_t slot = 0;
  Weight threshold = 0;

  friend bool operator==(const ThresholdEntry&, const ThresholdEntry&) = default;
};

/// Slots v reaches as its bid grows, with the smallest bid reaching each;
/// thresholds strictly increase and slots strictly improve.
using ThresholdTable = std::vector<ThresholdEntry>;

/// -sum_{k<=j} (alpha_{c_k} - alpha_{c_{k-1}}) b*_k where c_j is the
/// assigned slot and alpha_{c_0} = 0. Throws ContractViolation if the slot
/// is missing from the table.
Rational SlotPayment(const ThresholdTable& table, std::int64_t assigned_slot,
                     const RateSchedule& rates);

/// Checks OPT <= alpha_1 (D+1) / sum(alpha) * value against brute force.
RatioReport SlotVerifyRatio(const WeightedGraph& g, std::span<const Rational> weights,
                            std::span<const std::int64_t> slots, const RateSchedule& rates);

class SlotMechanism {
 public:
  SlotMechanism(const WeightedGraph& g, std::vector<Rational> rates, sim::ExecutionModel model);
  SlotMechanism(const WeightedGraph& g, ColoringResult coloring, std::vector<Rational> rates,
                sim::ExecutionModel model);

  const WeightedGraph& graph() const { return graph_; }
  const RateSchedule& rates() const { return rates_; }
  const ColorAssignment& coloring() const { return coloring_.coloring; }

  SlotAllocation Allocate(const BidVector& bids) const;

  /// Linear probe of v's bid over {0..W}. Throws MonotonicityViolation if
  /// the slot ever gets worse as the bid grows.
  ThresholdTable Thresholds(const BidVector& bids, NodeId v) const;

  MechanismResult Run(const BidVector& bids) const;

 private:
  WeightedGraph graph_;
  ColoringResult coloring_;
  RateSchedule rates_;
  sim::ExecutionModel model_;
};

}  // namespace localmech
