#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace localmech {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition (e.g. compared two keys with
/// the same colour, or sent a message to a non-neighbour).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// A CONGEST message exceeded the per-message bit budget.
class CongestionViolation : public Error {
 public:
  CongestionViolation(std::int64_t round, std::int64_t sender, std::int64_t bits,
                      std::int64_t budget);

  std::int64_t round() const { return round_; }
  std::int64_t sender() const { return sender_; }
  std::int64_t bits() const { return bits_; }
  std::int64_t budget() const { return budget_; }

 private:
  std::int64_t round_;
  std::int64_t sender_;
  std::int64_t bits_;
  std::int64_t budget_;
};

/// Some node was still running when the round cap was reached.
class NonTermination : public Error {
 public:
  using Error::Error;
};

/// A threshold search observed a node selected at one bid and unselected
/// at a bid that should be at least as good for it.
class MonotonicityViolation : public Error {
 public:
  MonotonicityViolation(std::int64_t node, std::int64_t selected_bid,
                        std::int64_t unselected_bid);

  std::int64_t node() const { return node_; }
  std::int64_t selected_bid() const { return selected_bid_; }
  std::int64_t unselected_bid() const { return unselected_bid_; }

 private:
  std::int64_t node_;
  std::int64_t selected_bid_;
  std::int64_t unselected_bid_;
};

/// Malformed text input; `line()` is 1-based, 0 when not line-specific.
class FormatError : public Error {
 public:
  FormatError(std::int64_t line, const std::string& what);

  std::int64_t line() const { return line_; }

 private:
  std::int64_t line_;
};

/// Brute-force enumeration refused because the instance is too large.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// A numeric input is outside its admissible range.
class RangeError : public Error {
 public:
  using Error::Error;
};

}  // namespace localmech
