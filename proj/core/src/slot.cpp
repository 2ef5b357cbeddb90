#include "localmech/slot.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "localmech/errors.hpp"
#include "localmech/optimum.hpp"

namespace localmech {

RateSchedule::RateSchedule(std::vector<Rational> rates, int slot_count) {
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (rates[i] < 0) throw RangeError("rate " + std::to_string(i + 1) + " is negative");
    if (i > 0 && rates[i] > rates[i - 1]) {
      throw RangeError("rates must be non-increasing; rate " + std::to_string(i + 1) +
                       " exceeds rate " + std::to_string(i));
    }
  }
  rates.resize(slot_count, Rational(0));
  rates_ = std::move(rates);
}

std::vector<Rational> ParseRates(std::string_view text) {
  std::vector<Rational> rates;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string token = line.substr(first, last - first + 1);
    Rational r;
    try {
      r = ParseRational(token);
    } catch (const FormatError&) {
      throw FormatError(line_no, "malformed rate '" + token + "'");
    }
    if (r < 0) throw FormatError(line_no, "negative rate");
    if (!rates.empty() && r > rates.back()) {
      throw FormatError(line_no, "rates must be non-increasing");
    }
    rates.push_back(r);
  }
  if (rates.empty()) throw FormatError(line_no, "no rates given");
  return rates;
}

std::vector<Rational> ReadRatesFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(0, "cannot open rates file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseRates(buffer.str());
}

SlotProgram::State SlotProgram::Init(const sim::NodeContext& ctx, const Input& input) const {
  State s;
  s.key = {input.bid, input.color};
  s.neighbor_keys.resize(ctx.neighbors.size());
  s.neighbor_assigned.assign(ctx.neighbors.size(), 0);
  s.slot_taken.assign(ctx.max_degree + 2, 0);
  return s;
}

std::optional<SlotProgram::Output> SlotProgram::Round(const sim::NodeContext& ctx, State& s,
                                                      std::span<const sim::Message> inbox,
                                                      sim::Outbox& out) const {
  ++s.invocation;
  if (s.invocation == 1) {
    sim::Payload p;
    p.Add(static_cast<std::uint64_t>(s.key.value), ctx.widths.value)
        .Add(static_cast<std::uint64_t>(s.key.color), ctx.widths.id);
    out.Broadcast(p);
    return std::nullopt;
  }
  for (const sim::Message& m : inbox) {
    const int idx = ctx.NeighborIndex(m.from);
    if (s.invocation == 2) {
      s.neighbor_keys[idx] = {static_cast<Weight>(m.payload[0]),
                              static_cast<std::int64_t>(m.payload[1])};
    } else {
      s.neighbor_assigned[idx] = 1;
      s.slot_taken[m.payload[0]] = 1;
    }
  }
  for (std::size_t i = 0; i < s.neighbor_keys.size(); ++i) {
    if (!s.neighbor_assigned[i] && !Beats(s.key, s.neighbor_keys[i], Objective::kMax)) {
      return std::nullopt;
    }
  }
  std::int64_t slot = 1;
  while (s.slot_taken[slot]) ++slot;
  sim::Payload p;
  p.Add(static_cast<std::uint64_t>(slot), sim::BitsFor(ctx.max_degree + 2));
  out.Broadcast(p);
  return slot;
}

SlotAllocation SlotAllocate(const WeightedGraph& g, const BidVector& bids,
                            const ColorAssignment& coloring, const sim::ExecutionModel& model) {
  if (auto violation = ValidateBids(g, bids)) throw ContractViolation(*violation);
  std::vector<SlotProgram::Input> inputs(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) inputs[v] = {bids[v], coloring[v]};
  auto run = sim::Run(SlotProgram(), g, std::span<const SlotProgram::Input>(inputs), model);
  return {std::move(run.outputs), run.trace};
}

Rational SlotPayment(const ThresholdTable& table, std::int64_t assigned_slot,
                     const RateSchedule& rates) {
  Rational payment(0);
  Rational previous_rate(0);
  for (const ThresholdEntry& entry : table) {
    const Rational& rate = rates.rate(entry.slot);
    payment -= (rate - previous_rate) * Rational(entry.threshold);
    previous_rate = rate;
    if (entry.slot == assigned_slot) return payment;
  }
  throw ContractViolation("assigned slot " + std::to_string(assigned_slot) +
                          " missing from threshold table");
}

RatioReport SlotVerifyRatio(const WeightedGraph& g, std::span<const Rational> weights,
                            std::span<const std::int64_t> slots, const RateSchedule& rates) {
  RatioReport report;
  report.optimum = OptSlot(g, weights, rates.rates());
  report.achieved = Rational(0);
  for (NodeId v = 0; v < g.node_count(); ++v) report.achieved += rates.rate(slots[v]) * weights[v];
  report.ratio = report.achieved == Rational(0) ? Rational(report.optimum == Rational(0) ? 1 : 0)
                                      : report.optimum / report.achieved;
  Rational total(0);
  for (const Rational& a : rates.rates()) total += a;
  if (total == Rational(0)) {
    report.bound = Rational(1);
    report.within_bound = report.optimum == Rational(0);
  } else {
    report.bound = rates.rate(1) * Rational(g.max_degree() + 1) / total;
    report.within_bound = report.optimum <= report.bound * report.achieved;
  }
  return report;
}

SlotMechanism::SlotMechanism(const WeightedGraph& g, std::vector<Rational> rates,
                             sim::ExecutionModel model)
    : SlotMechanism(g, ColorGraph(g, model), std::move(rates), model) {}

SlotMechanism::SlotMechanism(const WeightedGraph& g, ColoringResult coloring,
                             std::vector<Rational> rates, sim::ExecutionModel model)
    : graph_(g),
      coloring_(std::move(coloring)),
      rates_(std::move(rates), g.max_degree() + 1),
      model_(std::move(model)) {}

SlotAllocation SlotMechanism::Allocate(const BidVector& bids) const {
  return SlotAllocate(graph_, bids, coloring_.coloring, model_);
}

ThresholdTable SlotMechanism::Thresholds(const BidVector& bids, NodeId v) const {
  BidVector probe = bids;
  ThresholdTable table;
  for (Weight x = 0; x <= graph_.weight_bound(); ++x) {
    probe[v] = x;
    const std::int64_t slot = Allocate(probe).slot[v];
    if (table.empty() || slot < table.back().slot) {
      table.push_back({slot, x});
    } else if (slot > table.back().slot) {
      throw MonotonicityViolation(v, x - 1, x);
    }
  }
  return table;
}

MechanismResult SlotMechanism::Run(const BidVector& bids) const {
  SlotAllocation alloc = Allocate(bids);
  MechanismResult result;
  result.mechanism = "slot";
  result.trace = coloring_.trace + alloc.trace;
  result.objective_value = Rational(0);
  for (NodeId v = 0; v < graph_.node_count(); ++v) {
    result.allocation.push_back(alloc.slot[v]);
    result.payments.push_back(SlotPayment(Thresholds(bids, v), alloc.slot[v], rates_));
    result.objective_value += rates_.rate(alloc.slot[v]) * Rational(bids[v]);
  }
  return result;
}

}  // namespace localmech
