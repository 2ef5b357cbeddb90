#include "localmech/errors.hpp"

namespace localmech {

CongestionViolation::CongestionViolation(std::int64_t round, std::int64_t sender,
                                         std::int64_t bits, std::int64_t budget)
    : Error("congestion violation: node " + std::to_string(sender) + " sent " +
            std::to_string(bits) + " bits in round " + std::to_string(round) +
            " (budget " + std::to_string(budget) + ")"),
      round_(round),
      sender_(sender),
      bits_(bits),
      budget_(budget) {}

MonotonicityViolation::MonotonicityViolation(std::int64_t node, std::int64_t selected_bid,
                                             std::int64_t unselected_bid)
    : Error("monotonicity violation: node " + std::to_string(node) + " selected at bid " +
            std::to_string(selected_bid) + " but not at bid " +
            std::to_string(unselected_bid)),
      node_(node),
      selected_bid_(selected_bid),
      unselected_bid_(unselected_bid) {}

FormatError::FormatError(std::int64_t line, const std::string& what)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

}  // namespace localmech
