#include "localmech/mwis.hpp"

#include <algorithm>

#include "localmech/errors.hpp"
#include "localmech/optimum.hpp"

namespace localmech {
namespace {

constexpr std::uint64_t kFlag = 1;
constexpr std::uint32_t kFlagBits = 1;

sim::Payload FlagMessage(bool value) {
  sim::Payload p;
  p.Add(value ? 1 : 0, kFlagBits);
  return p;
}

}  // namespace

TieKey MwisAllocationProgram::KeyOf(Weight bid, std::int64_t color) const {
  return {bid, tie_rule_ == TieRule::kSmallerColorWins ? color : -color};
}

MwisAllocationProgram::State MwisAllocationProgram::Init(const sim::NodeContext& ctx,
                                                         const Input& input) const {
  State s;
  s.key = KeyOf(input.bid, input.color);
  s.neighbor_keys.resize(ctx.neighbors.size());
  s.neighbor_active.assign(ctx.neighbors.size(), 1);
  return s;
}

std::optional<MwisAllocationProgram::Output> MwisAllocationProgram::Round(
    const sim::NodeContext& ctx, State& s, std::span<const sim::Message> inbox,
    sim::Outbox& out) const {
  ++s.invocation;
  if (s.invocation == 1) {
    sim::Payload p;
    p.Add(static_cast<std::uint64_t>(s.key.value), ctx.widths.value);
    const std::int64_t color = tie_rule_ == TieRule::kSmallerColorWins ? s.key.color : -s.key.color;
    p.Add(static_cast<std::uint64_t>(color), ctx.widths.id);
    out.Broadcast(p);
    return std::nullopt;
  }
  if (s.invocation % 2 == 1) {
    // Joins announced last round eliminate this node.
    if (!inbox.empty()) {
      out.Broadcast(FlagMessage(true));
      return 0;
    }
    return std::nullopt;
  }
  for (const sim::Message& m : inbox) {
    const int idx = ctx.NeighborIndex(m.from);
    if (s.invocation == 2) {
      s.neighbor_keys[idx] = KeyOf(static_cast<Weight>(m.payload[0]),
                                   static_cast<std::int64_t>(m.payload[1]));
    } else {
      s.neighbor_active[idx] = 0;  // elimination notice
    }
  }
  for (std::size_t i = 0; i < s.neighbor_keys.size(); ++i) {
    if (s.neighbor_active[i] && !Beats(s.key, s.neighbor_keys[i], Objective::kMax)) {
      return std::nullopt;
    }
  }
  out.Broadcast(FlagMessage(true));
  return 1;
}

MwisPriceProgram::State MwisPriceProgram::Init(const sim::NodeContext& ctx,
                                               const Input& input) const {
  State s;
  s.input = input;
  s.neighbors.resize(ctx.neighbors.size());
  return s;
}

std::optional<MwisPriceProgram::Output> MwisPriceProgram::Round(const sim::NodeContext& ctx,
                                                                State& s,
                                                                std::span<const sim::Message> inbox,
                                                                sim::Outbox& out) const {
  ++s.invocation;
  const TieKey mine{s.input.bid, s.input.color};
  if (s.invocation == 1) {
    sim::Payload p;
    p.Add(static_cast<std::uint64_t>(s.input.bid), ctx.widths.value)
        .Add(static_cast<std::uint64_t>(s.input.color), ctx.widths.id)
        .Add(s.input.in_set ? kFlag : 0, kFlagBits);
    out.Broadcast(p);
    return std::nullopt;
  }
  if (s.invocation == 2) {
    for (const sim::Message& m : inbox) {
      Neighbor& nb = s.neighbors[ctx.NeighborIndex(m.from)];
      nb.key = {static_cast<Weight>(m.payload[0]), static_cast<std::int64_t>(m.payload[1])};
      nb.in_set = m.payload[2] != 0;
    }
    if (s.input.in_set) return std::nullopt;
    for (std::size_t i = 0; i < s.neighbors.size(); ++i) {
      const Neighbor& v = s.neighbors[i];
      if (!v.in_set || !Beats(v.key, mine, Objective::kMax)) continue;
      bool blocked = false;
      if (check_blocking_) {
        for (std::size_t j = 0; j < s.neighbors.size(); ++j) {
          const Neighbor& x = s.neighbors[j];
          if (j != i && x.in_set && Beats(x.key, mine, Objective::kMax)) blocked = true;
        }
      }
      out.Send(ctx.neighbors[i], FlagMessage(blocked));
    }
    return Output{};
  }
  for (const sim::Message& m : inbox) {
    s.neighbors[ctx.NeighborIndex(m.from)].blocked = m.payload[0] != 0;
  }
  std::vector<const Neighbor*> lower;
  for (const Neighbor& u : s.neighbors) {
    if (Beats(mine, u.key, Objective::kMax)) lower.push_back(&u);
  }
  // Lower neighbours may be two hops apart and share a colour.
  std::stable_sort(lower.begin(), lower.end(), [](const Neighbor* a, const Neighbor* b) {
    if (a->key.value != b->key.value) return a->key.value > b->key.value;
    return a->key.color < b->key.color;
  });
  for (const Neighbor* u : lower) {
    if (!u->blocked.has_value()) {
      throw ContractViolation("lower neighbour sent no blocking answer");
    }
    if (!*u->blocked) {
      return Output{s.input.color < u->key.color ? u->key.value : u->key.value + 1};
    }
  }
  return Output{0};
}

MwisAllocation MwisAllocate(const WeightedGraph& g, const BidVector& bids,
                            const ColorAssignment& coloring, const sim::ExecutionModel& model,
                            const MwisOptions& options) {
  if (auto violation = ValidateBids(g, bids)) throw ContractViolation(*violation);
  std::vector<MwisAllocationProgram::Input> inputs(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) inputs[v] = {bids[v], coloring[v]};
  auto run = sim::Run(MwisAllocationProgram(options.tie_rule), g,
                      std::span<const MwisAllocationProgram::Input>(inputs), model);
  return {std::move(run.outputs), run.trace};
}

PriceProtocolResult MwisPricesCongest(const WeightedGraph& g, const BidVector& bids,
                                      const ColorAssignment& coloring,
                                      std::span<const char> in_set,
                                      const sim::ExecutionModel& model,
                                      const MwisOptions& options) {
  std::vector<MwisPriceProgram::Input> inputs(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) inputs[v] = {bids[v], coloring[v], in_set[v] != 0};
  auto run = sim::Run(MwisPriceProgram(options.check_blocking), g,
                      std::span<const MwisPriceProgram::Input>(inputs), model);
  return {std::move(run.outputs), run.trace};
}

RatioReport MwisVerifyRatio(const WeightedGraph& g, std::span<const Rational> weights,
                            std::span<const char> in_set) {
  RatioReport report;
  report.optimum = OptMwis(g, weights);
  report.achieved = SetWeight(weights, in_set);
  report.ratio = report.achieved == Rational(0) ? Rational(report.optimum == Rational(0) ? 1 : 0)
                                      : report.optimum / report.achieved;
  report.bound = Rational(std::max(g.max_degree(), 1));
  report.within_bound = report.optimum <= report.bound * report.achieved;
  return report;
}

MwisMechanism::MwisMechanism(const WeightedGraph& g, sim::ExecutionModel model,
                             MwisOptions options)
    : MwisMechanism(g, ColorGraph(g, model), model, options) {}

MwisMechanism::MwisMechanism(const WeightedGraph& g, ColoringResult coloring,
                             sim::ExecutionModel model, MwisOptions options)
    : graph_(g), coloring_(std::move(coloring)), model_(std::move(model)), options_(options) {}

BinaryAllocation MwisMechanism::Allocate(const BidVector& bids) const {
  MwisAllocation alloc = MwisAllocate(graph_, bids, coloring_.coloring, model_, options_);
  return {std::move(alloc.in_set), alloc.trace};
}

std::optional<PriceProtocolResult> MwisMechanism::PriceProtocol(
    const BidVector& bids, const BinaryAllocation& alloc) const {
  return MwisPricesCongest(graph_, bids, coloring_.coloring, alloc.selected, model_, options_);
}

}  // namespace localmech
