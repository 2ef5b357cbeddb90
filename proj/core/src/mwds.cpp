#include "localmech/mwds.hpp"

#include <algorithm>

#include "localmech/errors.hpp"
#include "localmech/optimum.hpp"

namespace localmech {
namespace {

constexpr std::uint32_t kFlagBits = 1;

sim::Payload KeyMessage(const sim::NodeContext& ctx, const IneffKey& key) {
  sim::Payload p;
  p.Add(static_cast<std::uint64_t>(key.weight), ctx.widths.value)
      .Add(static_cast<std::uint64_t>(key.uncovered), sim::BitsFor(ctx.max_degree + 2))
      .Add(static_cast<std::uint64_t>(key.color), ctx.widths.id);
  return p;
}

IneffKey ReadKey(const sim::Payload& p) {
  return {static_cast<Weight>(p[0]), static_cast<std::int64_t>(p[1]),
          static_cast<std::int64_t>(p[2])};
}

}  // namespace

MwdsProgram::State MwdsProgram::Init(const sim::NodeContext& ctx, const Input& input) const {
  State s;
  s.input = input;
  s.neighbor_covered.assign(ctx.neighbors.size(), 0);
  return s;
}

std::optional<MwdsProgram::Output> MwdsProgram::Round(const sim::NodeContext& ctx, State& s,
                                                      std::span<const sim::Message> inbox,
                                                      sim::Outbox& out) const {
  ++s.invocation;
  const std::int64_t phase = (s.invocation - 1) % kRoundsPerStep;
  const std::int64_t step = (s.invocation - 1) / kRoundsPerStep + 1;
  switch (phase) {
    case 0: {  // joins from the previous step
      for (const sim::Message& m : inbox) {
        s.covered = true;
        s.neighbor_covered[ctx.NeighborIndex(m.from)] = 1;
      }
      sim::Payload p;
      p.Add(s.covered ? 1 : 0, kFlagBits);
      out.Broadcast(p);
      return std::nullopt;
    }
    case 1: {
      for (const sim::Message& m : inbox) {
        if (m.payload[0] != 0) s.neighbor_covered[ctx.NeighborIndex(m.from)] = 1;
      }
      std::int64_t d = s.covered ? 0 : 1;
      for (char c : s.neighbor_covered) d += c ? 0 : 1;
      if (d == 0) return Output{};
      s.key = {s.input.bid, d, s.input.color};
      out.Broadcast(KeyMessage(ctx, s.key));
      return std::nullopt;
    }
    case 2: {
      s.local_min = s.key;
      for (const sim::Message& m : inbox) s.local_min = std::min(s.local_min, ReadKey(m.payload));
      out.Broadcast(KeyMessage(ctx, s.local_min));
      return std::nullopt;
    }
    default: {
      bool join = s.local_min == s.key;
      for (const sim::Message& m : inbox) join = join && ReadKey(m.payload) == s.key;
      if (!join) return std::nullopt;
      sim::Payload p;
      p.Add(1, kFlagBits);
      out.Broadcast(p);
      return Output{true, step, s.key};
    }
  }
}

MwdsAllocation MwdsAllocate(const WeightedGraph& g, const BidVector& bids,
                            const ColorAssignment& two_hop_coloring,
                            const sim::ExecutionModel& model) {
  if (auto violation = ValidateBids(g, bids)) throw ContractViolation(*violation);
  std::vector<MwdsProgram::Input> inputs(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) inputs[v] = {bids[v], two_hop_coloring[v]};
  auto run = sim::Run(MwdsProgram(), g, std::span<const MwdsProgram::Input>(inputs), model);
  MwdsAllocation result;
  result.trace = run.trace;
  for (const MwdsProgram::Output& o : run.outputs) {
    result.in_set.push_back(o.in_set ? 1 : 0);
    result.join_step.push_back(o.step);
    result.join_key.push_back(o.key);
  }
  return result;
}

std::vector<char> MwdsAllocateNonAdaptive(const WeightedGraph& g, const BidVector& bids,
                                          const ColorAssignment& two_hop_coloring) {
  if (auto violation = ValidateBids(g, bids)) throw ContractViolation(*violation);
  const NodeId n = g.node_count();
  std::vector<IneffKey> classes;
  for (Weight w = 0; w <= g.weight_bound(); ++w) {
    for (std::int64_t d = 1; d <= g.max_degree() + 1; ++d) {
      for (std::int64_t c = 0; c < two_hop_coloring.palette_size; ++c) classes.push_back({w, d, c});
    }
  }
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());

  std::vector<char> in_set(n, 0);
  std::vector<char> covered(n, 0);
  auto uncovered_count = [&](NodeId v) {
    std::int64_t d = covered[v] ? 0 : 1;
    for (NodeId u : g.neighbors(v)) d += covered[u] ? 0 : 1;
    return d;
  };
  for (const IneffKey& x : classes) {
    std::vector<NodeId> joiners;
    for (NodeId v = 0; v < n; ++v) {
      if (in_set[v]) continue;
      const std::int64_t d = uncovered_count(v);
      if (d >= 1 && IneffKey{bids[v], d, two_hop_coloring[v]} == x) joiners.push_back(v);
    }
    for (NodeId v : joiners) {
      in_set[v] = 1;
      covered[v] = 1;
      for (NodeId u : g.neighbors(v)) covered[u] = 1;
    }
  }
  return in_set;
}

RatioReport MwdsVerifyRatio(const WeightedGraph& g, std::span<const Rational> weights,
                            std::span<const char> in_set) {
  RatioReport report;
  report.optimum = OptMwds(g, weights);
  report.achieved = SetWeight(weights, in_set);
  report.ratio = report.optimum == Rational(0) ? Rational(report.achieved == Rational(0) ? 1 : 0)
                                     : report.achieved / report.optimum;
  report.bound = Harmonic(g.max_degree() + 1);
  report.within_bound = report.achieved <= report.bound * report.optimum;
  return report;
}

MwdsMechanism::MwdsMechanism(const WeightedGraph& g, sim::ExecutionModel model)
    : MwdsMechanism(g, ColorTwoHop(g, model), model) {}

MwdsMechanism::MwdsMechanism(const WeightedGraph& g, ColoringResult two_hop_coloring,
                             sim::ExecutionModel model)
    : graph_(g), coloring_(std::move(two_hop_coloring)), model_(std::move(model)) {}

MwdsAllocation MwdsMechanism::AllocateDetailed(const BidVector& bids) const {
  return MwdsAllocate(graph_, bids, coloring_.coloring, model_);
}

BinaryAllocation MwdsMechanism::Allocate(const BidVector& bids) const {
  MwdsAllocation alloc = AllocateDetailed(bids);
  return {std::move(alloc.in_set), alloc.trace};
}

}  // namespace localmech
