#include "localmech/sim.hpp"

#include <bit>
#include <cmath>

#include "json.hpp"

namespace localmech::sim {

std::uint32_t BitsFor(std::int64_t count) {
  if (count <= 1) return 0;
  return static_cast<std::uint32_t>(std::bit_width(static_cast<std::uint64_t>(count - 1)));
}

int LogStar(std::int64_t n) {
  int k = 0;
  double x = static_cast<double>(n);
  while (x > 1.0) {
    x = std::log2(x);
    ++k;
  }
  return k;
}

FieldWidths FieldWidths::For(std::int64_t node_count, std::int64_t weight_bound) {
  return {BitsFor(node_count), BitsFor(weight_bound + 1)};
}

Payload Payload::Slice(std::size_t first, std::size_t count) const {
  Payload out;
  for (std::size_t i = first; i < first + count; ++i) out.Add(fields_[i].value, fields_[i].bits);
  return out;
}

void Outbox::Send(NodeId to, Payload payload) {
  if (!std::binary_search(neighbors_.begin(), neighbors_.end(), to)) {
    throw ContractViolation("message addressed to non-neighbour " + std::to_string(to));
  }
  sends_.emplace_back(to, std::move(payload));
}

void Outbox::Broadcast(const Payload& payload) {
  for (NodeId u : neighbors_) sends_.emplace_back(u, payload);
}

std::string ToJson(const RoundTrace& trace) {
  nlohmann::ordered_json j;
  j["rounds"] = trace.rounds;
  j["messages_total"] = trace.messages_total;
  j["max_message_bits"] = trace.max_message_bits;
  return j.dump();
}

ExecutionModel ExecutionModel::Local() { return {}; }

ExecutionModel ExecutionModel::Congest(std::int64_t constant) {
  if (constant <= 0) throw ContractViolation("CONGEST constant must be positive");
  ExecutionModel m;
  m.kind = Kind::kCongest;
  m.congest_constant = constant;
  m.bit_budget = [constant](std::int64_t n) {
    return constant * static_cast<std::int64_t>(BitsFor(std::max<std::int64_t>(n, 2)));
  };
  return m;
}

ExecutionModel ExecutionModel::CongestBits(std::int64_t bits) {
  ExecutionModel m;
  m.kind = Kind::kCongest;
  m.bit_budget = [bits](std::int64_t) { return bits; };
  return m;
}

std::optional<std::int64_t> ExecutionModel::BudgetFor(std::int64_t node_count) const {
  if (kind != Kind::kCongest || !bit_budget) return std::nullopt;
  return bit_budget(node_count);
}

std::int64_t DefaultRoundCap(std::int64_t node_count, int max_degree,
                             std::int64_t weight_bound) {
  const std::int64_t d = max_degree;
  return 16 * (d * d * d * (weight_bound + 1) + 64 * LogStar(node_count) + 64);
}

std::optional<std::string> AssertCongest(const RoundTrace& trace, std::int64_t node_count,
                                         std::int64_t constant) {
  const std::int64_t budget =
      constant * static_cast<std::int64_t>(BitsFor(std::max<std::int64_t>(node_count, 2)));
  if (trace.max_message_bits <= budget) return std::nullopt;
  return "max message size " + std::to_string(trace.max_message_bits) +
         " bits exceeds budget " + std::to_string(budget);
}

namespace detail {

std::vector<NodeContext> BuildContexts(const WeightedGraph& g) {
  std::vector<NodeContext> contexts(g.node_count());
  const FieldWidths widths = FieldWidths::For(g.node_count(), g.weight_bound());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    contexts[v] = {v, g.neighbors(v), g.node_count(), g.max_degree(), g.weight_bound(), widths};
  }
  return contexts;
}

void ChargeMessage(RoundTrace& trace, const ExecutionModel& model,
                   std::optional<std::int64_t> budget, std::int64_t round, NodeId from,
                   std::uint64_t bits) {
  const auto size = static_cast<std::int64_t>(bits);
  if (budget && model.enforce && size > *budget) {
    throw CongestionViolation(round, from, size, *budget);
  }
  ++trace.messages_total;
  trace.max_message_bits = std::max(trace.max_message_bits, size);
}

}  // namespace detail
}  // namespace localmech::sim
