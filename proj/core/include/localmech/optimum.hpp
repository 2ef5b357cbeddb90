#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "localmech/graph.hpp"
#include "localmech/rational.hpp"

namespace localmech {

/// Largest n accepted by the subset-enumeration optima.
inline constexpr NodeId kBruteForceNodeCap = 20;
/// Largest number of candidate slot assignments enumerated by OptSlot.
inline constexpr std::int64_t kSlotAssignmentCap = 50'000'000;

std::vector<Rational> ToRationals(std::span<const Weight> weights);

/// Exact optima by subset bitmask enumeration. Throw CapExceeded above
/// kBruteForceNodeCap nodes.
Rational OptMwis(const WeightedGraph& g, std::span<const Rational> weights);
Rational OptMwvc(const WeightedGraph& g, std::span<const Rational> weights);
Rational OptMwds(const WeightedGraph& g, std::span<const Rational> weights);

/// The same optima by recursive include/exclude search with bounding; an
/// independent second strategy used to cross-check the enumerations.
Rational OptMwisBranch(const WeightedGraph& g, std::span<const Rational> weights);
Rational OptMwvcBranch(const WeightedGraph& g, std::span<const Rational> weights);
Rational OptMwdsBranch(const WeightedGraph& g, std::span<const Rational> weights);

/// max sum_v rates[slot(v)] * w(v) over proper assignments V -> {1..D+1};
/// `rates` holds D+1 entries. Backtracking over nodes in id order.
Rational OptSlot(const WeightedGraph& g, std::span<const Rational> weights,
                 std::span<const Rational> rates);
/// Same value by plain odometer enumeration of all (D+1)^n functions.
Rational OptSlotOdometer(const WeightedGraph& g, std::span<const Rational> weights,
                         std::span<const Rational> rates);

bool IsIndependentSet(const WeightedGraph& g, std::span<const char> members);
bool IsMaximalIndependentSet(const WeightedGraph& g, std::span<const char> members);
bool IsVertexCover(const WeightedGraph& g, std::span<const char> members);
bool IsDominatingSet(const WeightedGraph& g, std::span<const char> members);

Rational SetWeight(std::span<const Rational> weights, std::span<const char> members);

}  // namespace localmech
