#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "localmech/errors.hpp"
#include "localmech/graph.hpp"

namespace localmech::sim {

/// ceil(log2(count)); 0 for count <= 1.
std::uint32_t BitsFor(std::int64_t count);

/// Iterated logarithm (base 2): number of times log2 must be applied
/// before the value drops to <= 1.
int LogStar(std::int64_t n);

/// Fixed-width field layout used for message size accounting.
struct FieldWidths {
  std::uint32_t id = 0;     // node ids and colours: ceil(log2 n)
  std::uint32_t value = 0;  // bids and residuals: ceil(log2(W + 1))

  static FieldWidths For(std::int64_t node_count, std::int64_t weight_bound);
};

/// One fixed-width field of a message payload.
struct Field {
  std::uint64_t value = 0;
  std::uint32_t bits = 0;
};

/// A structured message; its size is the sum of its field widths.
class Payload {
 public:
  Payload() = default;

  Payload& Add(std::uint64_t value, std::uint32_t bits) {
    fields_.push_back({value, bits});
    bit_size_ += bits;
    return *this;
  }
  Payload& Append(const Payload& other) {
    for (const Field& f : other.fields_) Add(f.value, f.bits);
    return *this;
  }

  std::uint64_t operator[](std::size_t i) const { return fields_[i].value; }
  const Field& field(std::size_t i) const { return fields_[i]; }
  std::size_t size() const { return fields_.size(); }
  std::uint64_t bit_size() const { return bit_size_; }

  /// Copies fields [first, first + count) into a new payload.
  Payload Slice(std::size_t first, std::size_t count) const;

  friend bool operator==(const Payload& a, const Payload& b) {
    return a.fields_.size() == b.fields_.size() &&
           std::equal(a.fields_.begin(), a.fields_.end(), b.fields_.begin(),
                      [](const Field& x, const Field& y) {
                        return x.value == y.value && x.bits == y.bits;
                      });
  }

 private:
  boost::container::small_vector<Field, 4> fields_;
  std::uint64_t bit_size_ = 0;
};

struct Message {
  NodeId from = 0;
  Payload payload;
};

/// Per-node view of the network handed to a program.
struct NodeContext {
  NodeId id = 0;
  std::span<const NodeId> neighbors;
  std::int64_t node_count = 0;
  int max_degree = 0;
  std::int64_t weight_bound = 0;
  FieldWidths widths;

  /// Position of `u` in `neighbors`, or -1.
  int NeighborIndex(NodeId u) const {
    auto it = std::lower_bound(neighbors.begin(), neighbors.end(), u);
    return it != neighbors.end() && *it == u ? static_cast<int>(it - neighbors.begin()) : -1;
  }
};

/// Messages produced by one handler invocation.
class Outbox {
 public:
  explicit Outbox(std::span<const NodeId> neighbors) : neighbors_(neighbors) {}

  /// Throws ContractViolation if `to` is not a neighbour.
  void Send(NodeId to, Payload payload);
  void Broadcast(const Payload& payload);

  std::vector<std::pair<NodeId, Payload>>& sends() { return sends_; }
  const std::vector<std::pair<NodeId, Payload>>& sends() const { return sends_; }

 private:
  std::span<const NodeId> neighbors_;
  std::vector<std::pair<NodeId, Payload>> sends_;
};

/// A synchronous node program. Round() receives the messages sent to the
/// node in the previous round and returns an output to halt. Handlers are
/// const: all node-local data lives in State.
template <class P>
concept NodeProgram = requires(const P& p, const NodeContext& ctx, typename P::State& state,
                               const typename P::Input& input,
                               std::span<const Message> inbox, Outbox& out) {
  typename P::Output;
  { p.Init(ctx, input) } -> std::convertible_to<typename P::State>;
  { p.Round(ctx, state, inbox, out) } -> std::same_as<std::optional<typename P::Output>>;
};

/// Round and message accounting of one execution (or several composed
/// sequentially with +=).
struct RoundTrace {
  std::int64_t rounds = 0;
  std::int64_t messages_total = 0;
  std::int64_t max_message_bits = 0;

  RoundTrace& operator+=(const RoundTrace& next) {
    rounds += next.rounds;
    messages_total += next.messages_total;
    max_message_bits = std::max(max_message_bits, next.max_message_bits);
    return *this;
  }
  friend RoundTrace operator+(RoundTrace a, const RoundTrace& b) { return a += b; }
  friend bool operator==(const RoundTrace&, const RoundTrace&) = default;
};

std::string ToJson(const RoundTrace& trace);

struct ExecutionModel {
  enum class Kind { kLocal, kCongest };

  Kind kind = Kind::kLocal;
  /// Per-message bit budget as a function of n; CONGEST only.
  std::function<std::int64_t(std::int64_t)> bit_budget;
  /// When false, CONGEST budgets are accounted for but not enforced.
  bool enforce = true;
  std::int64_t congest_constant = 0;
  /// Replaces DefaultRoundCap for every run under this model.
  std::optional<std::int64_t> max_rounds;

  static ExecutionModel Local();
  /// Budget c * ceil(log2(max(n, 2))) bits.
  static ExecutionModel Congest(std::int64_t constant);
  /// Fixed budget independent of n.
  static ExecutionModel CongestBits(std::int64_t bits);

  ExecutionModel AccountingOnly() const {
    ExecutionModel copy = *this;
    copy.enforce = false;
    return copy;
  }
  bool is_congest() const { return kind == Kind::kCongest; }
  std::optional<std::int64_t> BudgetFor(std::int64_t node_count) const;
};

/// 16 * (D^3 (W + 1) + 64 log*(n) + 64).
std::int64_t DefaultRoundCap(std::int64_t node_count, int max_degree, std::int64_t weight_bound);

/// max_message_bits <= c * ceil(log2(max(n, 2))); returns the violation text otherwise.
std::optional<std::string> AssertCongest(const RoundTrace& trace, std::int64_t node_count,
                                         std::int64_t constant);

struct MessageRecord {
  std::int64_t round = 0;
  NodeId from = 0;
  NodeId to = 0;
  std::uint64_t bits = 0;
};

struct RunOptions {
  std::optional<std::int64_t> max_rounds;
  bool record_messages = false;
};

template <class Output>
struct RunResult {
  std::vector<Output> outputs;
  RoundTrace trace;
  std::vector<MessageRecord> log;
  /// Round in which each node halted.
  std::vector<std::int64_t> halt_round;
};

namespace detail {

std::vector<NodeContext> BuildContexts(const WeightedGraph& g);
void ChargeMessage(RoundTrace& trace, const ExecutionModel& model,
                   std::optional<std::int64_t> budget, std::int64_t round, NodeId from,
                   std::uint64_t bits);

}  // namespace detail

/// Executes `program` on every node of `g` in synchronous rounds. Messages
/// sent in round r are delivered in round r + 1; messages addressed to
/// halted nodes are counted but dropped. Throws NonTermination when the
/// round cap is hit and CongestionViolation for over-budget payloads.
template <NodeProgram P>
RunResult<typename P::Output> Run(const P& program, const WeightedGraph& g,
                                  std::span<const typename P::Input> inputs,
                                  const ExecutionModel& model, const RunOptions& options = {}) {
  using Output = typename P::Output;
  const NodeId n = g.node_count();
  if (static_cast<NodeId>(inputs.size()) != n) {
    throw ContractViolation("input count does not match node count");
  }
  const std::int64_t cap =
      options.max_rounds.value_or(model.max_rounds.value_or(
          DefaultRoundCap(n, g.max_degree(), g.weight_bound())));
  const std::optional<std::int64_t> budget = model.BudgetFor(n);

  const std::vector<NodeContext> contexts = detail::BuildContexts(g);
  std::vector<typename P::State> states;
  states.reserve(n);
  for (NodeId v = 0; v < n; ++v) states.push_back(program.Init(contexts[v], inputs[v]));

  std::vector<std::optional<Output>> outputs(n);
  std::vector<std::vector<Message>> inbox(n);
  std::vector<std::vector<Message>> next(n);
  RunResult<Output> result;
  result.halt_round.assign(n, 0);
  NodeId running = n;

  for (std::int64_t round = 1; running > 0; ++round) {
    if (round > cap) {
      throw NonTermination("round cap " + std::to_string(cap) + " reached with " +
                           std::to_string(running) + " nodes running");
    }
    for (NodeId v = 0; v < n; ++v) {
      if (outputs[v]) continue;
      Outbox out(contexts[v].neighbors);
      std::optional<Output> halt =
          program.Round(contexts[v], states[v], std::span<const Message>(inbox[v]), out);
      for (auto& [to, payload] : out.sends()) {
        const std::uint64_t bits = payload.bit_size();
        detail::ChargeMessage(result.trace, model, budget, round, v, bits);
        if (options.record_messages) result.log.push_back({round, v, to, bits});
        next[to].push_back({v, std::move(payload)});
      }
      if (halt) {
        outputs[v] = std::move(halt);
        result.halt_round[v] = round;
        result.trace.rounds = round;
        --running;
      }
    }
    for (NodeId v = 0; v < n; ++v) {
      inbox[v].clear();
      if (!outputs[v]) std::swap(inbox[v], next[v]);
      next[v].clear();
    }
  }

  result.outputs.reserve(n);
  for (auto& o : outputs) result.outputs.push_back(std::move(*o));
  return result;
}

}  // namespace localmech::sim
