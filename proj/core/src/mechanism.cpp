#include "localmech/mechanism.hpp"

#include "json.hpp"
#include "localmech/errors.hpp"

namespace localmech {

std::optional<PriceProtocolResult> BinaryMechanism::PriceProtocol(const BidVector&,
                                                                  const BinaryAllocation&) const {
  return std::nullopt;
}

std::optional<Weight> CriticalPrice(const BinaryMechanism& mechanism, const BidVector& bids,
                                    NodeId v) {
  const Weight top = mechanism.graph().weight_bound();
  const bool maximize = mechanism.objective() == Objective::kMax;
  BidVector probe = bids;
  auto selected_at = [&](Weight x) {
    probe[v] = x;
    return mechanism.Allocate(probe).selected[v] != 0;
  };

  // `best` is the most favourable bid for v: W when maximising, 0 when minimising.
  const Weight best = maximize ? top : 0;
  if (!selected_at(best)) {
    if (selected_at(bids[v])) throw MonotonicityViolation(v, bids[v], best);
    return std::nullopt;
  }
  // Invariant: selected at `good`, unselected at `bad` (or bad is off-grid).
  Weight good = best;
  Weight bad = maximize ? -1 : top + 1;
  while ((maximize ? good - bad : bad - good) > 1) {
    const Weight mid = maximize ? bad + (good - bad) / 2 : good + (bad - good) / 2;
    if (selected_at(mid)) {
      good = mid;
    } else {
      bad = mid;
    }
  }
  const bool actual = selected_at(bids[v]);
  const bool predicted = maximize ? bids[v] >= good : bids[v] <= good;
  if (actual != predicted) {
    if (actual) throw MonotonicityViolation(v, bids[v], bad);
    throw MonotonicityViolation(v, good, bids[v]);
  }
  return good;
}

std::vector<Rational> PaymentsFromPrices(Objective objective, std::span<const char> selected,
                                         std::span<const std::optional<Weight>> prices) {
  std::vector<Rational> payments(selected.size(), Rational(0));
  for (std::size_t v = 0; v < selected.size(); ++v) {
    if (!selected[v]) continue;
    if (v >= prices.size() || !prices[v]) {
      throw ContractViolation("selected node " + std::to_string(v) + " has no critical price");
    }
    const Rational price(*prices[v]);
    payments[v] = objective == Objective::kMax ? -price : price;
  }
  return payments;
}

Rational TotalUtility(Objective objective, bool selected, const Rational& true_weight,
                      const Rational& payment) {
  Rational utility = payment;
  if (selected) utility += objective == Objective::kMax ? true_weight : -true_weight;
  return utility;
}

Rational SlotUtility(const Rational& rate, const Rational& true_weight, const Rational& payment) {
  return rate * true_weight + payment;
}

MechanismResult RunMechanism(const BinaryMechanism& mechanism, const BidVector& bids,
                             PriceSource source) {
  const WeightedGraph& g = mechanism.graph();
  if (auto violation = ValidateBids(g, bids)) throw ContractViolation(*violation);
  MechanismResult result;
  result.mechanism = std::string(mechanism.name());
  BinaryAllocation alloc = mechanism.Allocate(bids);
  result.trace = mechanism.preprocessing_trace() + alloc.trace;

  std::optional<PriceProtocolResult> protocol;
  if (source == PriceSource::kAuto) protocol = mechanism.PriceProtocol(bids, alloc);
  if (protocol) {
    result.prices = std::move(protocol->prices);
    result.trace += protocol->trace;
  } else {
    result.prices.assign(g.node_count(), std::nullopt);
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (alloc.selected[v]) result.prices[v] = CriticalPrice(mechanism, bids, v);
    }
  }
  result.payments = PaymentsFromPrices(mechanism.objective(), alloc.selected, result.prices);
  result.objective_value = Rational(0);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    result.allocation.push_back(alloc.selected[v] ? 1 : 0);
    if (alloc.selected[v]) {
      result.objective_value +=
          mechanism.objective() == Objective::kMax ? Rational(bids[v]) : Rational(-bids[v]);
    }
  }
  return result;
}

namespace {

nlohmann::ordered_json RationalJson(const Rational& r) {
  if (r.denominator() == 1) return r.numerator();
  return ToString(r);
}

}  // namespace

std::string ToJson(const MechanismResult& result) {
  nlohmann::ordered_json j;
  j["mechanism"] = result.mechanism;
  j["allocation"] = result.allocation;
  auto payments = nlohmann::ordered_json::array();
  for (const Rational& p : result.payments) payments.push_back(RationalJson(p));
  j["payments"] = std::move(payments);
  j["objective_value"] = RationalJson(result.objective_value);
  j["rounds"] = result.trace.rounds;
  j["messages_total"] = result.trace.messages_total;
  j["max_message_bits"] = result.trace.max_message_bits;
  return j.dump();
}

std::int64_t DiscretizationConfig::GridSize() const {
  if (epsilon <= 0) throw RangeError("epsilon must be positive");
  const Rational k = weight_cap / epsilon;
  if (k.denominator() != 1 || k.numerator() < 1) {
    throw RangeError("W / epsilon must be a positive integer, got " + ToString(k));
  }
  return k.numerator();
}

BidVector Discretize(std::span<const Rational> real_bids, const DiscretizationConfig& config,
                     Objective objective) {
  const std::int64_t grid = config.GridSize();
  BidVector out;
  out.reserve(real_bids.size());
  for (const Rational& b : real_bids) {
    if (b < 0 || b > config.weight_cap) {
      throw RangeError("bid " + ToString(b) + " outside [0, " + ToString(config.weight_cap) + "]");
    }
    const Rational steps = b / config.epsilon;
    out.push_back(std::min(grid, objective == Objective::kMax ? FloorDiv(steps) : CeilDiv(steps)));
  }
  return out;
}

}  // namespace localmech
