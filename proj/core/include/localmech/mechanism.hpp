#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "localmech/graph.hpp"
#include "localmech/rational.hpp"
#include "localmech/sim.hpp"

namespace localmech {

using PriceVector = std::vector<std::optional<Weight>>;

struct BinaryAllocation {
  std::vector<char> selected;
  sim::RoundTrace trace;
};

struct PriceProtocolResult {
  PriceVector prices;
  sim::RoundTrace trace;
};

/// A monotone allocation rule for a binary problem, bound to one network
/// (structure-only preprocessing such as tie-break colourings is done once
/// at construction). Allocate() must be a deterministic function of bids.
class BinaryMechanism {
 public:
  virtual ~BinaryMechanism() = default;

  virtual std::string_view name() const = 0;
  virtual Objective objective() const = 0;
  virtual const WeightedGraph& graph() const = 0;

  virtual BinaryAllocation Allocate(const BidVector& bids) const = 0;

  /// Mechanism-specific payment protocol, if any. The default has none and
  /// RunMechanism falls back to re-simulation.
  virtual std::optional<PriceProtocolResult> PriceProtocol(const BidVector& bids,
                                                           const BinaryAllocation& alloc) const;

  /// Rounds spent on bid-independent preprocessing.
  virtual sim::RoundTrace preprocessing_trace() const = 0;
};

/// Critical grid bid of `v` given the other bids: for kMax the smallest x
/// in {0..W} with v selected under (x, b_-v), for kMin the largest. nullopt
/// if v is never selected. Binary search; throws MonotonicityViolation when
/// the probes (including the actual bid) contradict a threshold rule.
std::optional<Weight> CriticalPrice(const BinaryMechanism& mechanism, const BidVector& bids,
                                    NodeId v);

/// kMax: p(v) = -b*(v) if selected; kMin: p(v) = +b*(v); 0 otherwise.
/// Throws ContractViolation if a selected node has no price.
std::vector<Rational> PaymentsFromPrices(Objective objective, std::span<const char> selected,
                                         std::span<const std::optional<Weight>> prices);

/// u_v(o) + p(v) for binary problems: +w if selected for kMax (gain),
/// -w if selected for kMin (cost).
Rational TotalUtility(Objective objective, bool selected, const Rational& true_weight,
                      const Rational& payment);

/// alpha_slot * w + p(v).
Rational SlotUtility(const Rational& rate, const Rational& true_weight, const Rational& payment);

struct MechanismResult {
  std::string mechanism;
  /// Binary problems: 1 if selected. Slot assignment: slot index (1-based).
  std::vector<std::int64_t> allocation;
  std::vector<Rational> payments;
  /// Critical prices (binary problems only; empty otherwise).
  PriceVector prices;
  Rational objective_value;
  sim::RoundTrace trace;
};

enum class PriceSource { kAuto, kResimulation };

/// Allocation, critical prices (protocol if the mechanism has one and
/// `source` is kAuto, re-simulation otherwise), payments and the trace of
/// preprocessing + allocation + price protocol. objective_value treats the
/// bids as the weights.
MechanismResult RunMechanism(const BinaryMechanism& mechanism, const BidVector& bids,
                             PriceSource source = PriceSource::kAuto);

/// {mechanism, allocation, payments, objective_value, rounds, messages_total, max_message_bits}.
std::string ToJson(const MechanismResult& result);

struct DiscretizationConfig {
  Rational epsilon;
  Rational weight_cap;

  /// W / epsilon; throws RangeError unless it is an integer >= 1.
  std::int64_t GridSize() const;
};

/// Rounds each bid onto {0, eps, ..., K eps}: down for kMax, up for kMin.
/// Returns grid indices. Throws RangeError for bids outside [0, W].
BidVector Discretize(std::span<const Rational> real_bids, const DiscretizationConfig& config,
                     Objective objective);

}  // namespace localmech
