#include "localmech/mwvc.hpp"

#include <algorithm>

#include "localmech/errors.hpp"
#include "localmech/optimum.hpp"

namespace localmech {

MwvcProgram::State MwvcProgram::Init(const sim::NodeContext&, const Input& input) const {
  State s;
  s.input = input;
  s.residual = Rational(input.bid);
  return s;
}

std::optional<MwvcProgram::Output> MwvcProgram::Round(const sim::NodeContext& ctx, State& s,
                                                      std::span<const sim::Message> inbox,
                                                      sim::Outbox& out) const {
  ++s.invocation;
  if (s.input.edges.empty()) return Output{false, s.residual, {}};
  for (const sim::Message& m : inbox) {
    const auto it = std::find_if(s.input.edges.begin(), s.input.edges.end(),
                                 [&](const IncidentEdge& e) {
                                   return e.other == m.from && e.color == s.invocation - 2;
                                 });
    if (it == s.input.edges.end()) throw ContractViolation("residual from unexpected sender");
    const Rational partner(static_cast<std::int64_t>(m.payload[0]));
    const Rational charge = std::min(s.residual, partner);
    s.residual -= charge;
    s.charges.emplace_back(it->edge, charge);
  }
  if (s.invocation <= palette_) {
    for (const IncidentEdge& e : s.input.edges) {
      if (e.color != s.invocation - 1) continue;
      if (s.residual.denominator() != 1) throw ContractViolation("non-integral residual");
      sim::Payload p;
      p.Add(static_cast<std::uint64_t>(s.residual.numerator()), ctx.widths.value);
      out.Send(e.other, std::move(p));
    }
    return std::nullopt;
  }
  std::sort(s.charges.begin(), s.charges.end());
  return Output{s.residual == Rational(0), s.residual, std::move(s.charges)};
}

MwvcAllocation MwvcAllocate(const WeightedGraph& g, const BidVector& bids,
                            const ColorAssignment& edge_coloring,
                            const sim::ExecutionModel& model) {
  if (auto violation = ValidateBids(g, bids)) throw ContractViolation(*violation);
  std::vector<MwvcProgram::Input> inputs(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    inputs[v].bid = bids[v];
    for (EdgeId e : g.incident_edges(v)) {
      const Edge& edge = g.edge(e);
      inputs[v].edges.push_back({e, edge.u == v ? edge.v : edge.u, edge_coloring[e]});
    }
  }
  const std::int64_t palette = g.edge_count() == 0 ? 0 : edge_coloring.palette_size;
  auto run = sim::Run(MwvcProgram(palette), g, std::span<const MwvcProgram::Input>(inputs), model);

  MwvcAllocation result;
  result.trace = run.trace;
  result.charge.assign(g.edge_count(), Rational(0));
  std::vector<std::optional<Rational>> seen(g.edge_count());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const MwvcProgram::Output& o = run.outputs[v];
    result.in_cover.push_back(o.in_cover ? 1 : 0);
    result.residual.push_back(o.residual);
    for (const auto& [e, c] : o.charges) {
      if (seen[e] && *seen[e] != c) {
        throw ContractViolation("endpoints disagree on charge of edge " + std::to_string(e));
      }
      seen[e] = c;
      result.charge[e] = c;
    }
  }
  return result;
}

MwvcAllocation MwvcSequential(const WeightedGraph& g, std::span<const Rational> weights,
                              std::span<const EdgeId> order) {
  MwvcAllocation result;
  result.residual.assign(weights.begin(), weights.end());
  result.charge.assign(g.edge_count(), Rational(0));
  for (EdgeId e : order) {
    const Edge& edge = g.edge(e);
    const Rational m = std::min(result.residual[edge.u], result.residual[edge.v]);
    result.residual[edge.u] -= m;
    result.residual[edge.v] -= m;
    result.charge[e] = m;
  }
  for (NodeId v = 0; v < g.node_count(); ++v) {
    result.in_cover.push_back(g.degree(v) > 0 && result.residual[v] == Rational(0) ? 1 : 0);
  }
  return result;
}

RatioReport MwvcVerifyRatio(const WeightedGraph& g, std::span<const Rational> weights,
                            std::span<const char> in_cover) {
  RatioReport report;
  report.optimum = OptMwvc(g, weights);
  report.achieved = SetWeight(weights, in_cover);
  report.ratio = report.optimum == Rational(0) ? Rational(report.achieved == Rational(0) ? 1 : 0)
                                     : report.achieved / report.optimum;
  report.bound = Rational(2);
  report.within_bound = report.achieved <= report.bound * report.optimum;
  return report;
}

namespace {

ColoringResult EdgeColoringOrEmpty(const WeightedGraph& g, const sim::ExecutionModel& model) {
  if (g.edge_count() == 0) return {};
  return ColorLineGraph(g, model);
}

}  // namespace

MwvcMechanism::MwvcMechanism(const WeightedGraph& g, sim::ExecutionModel model)
    : MwvcMechanism(g, EdgeColoringOrEmpty(g, model), model) {}

MwvcMechanism::MwvcMechanism(const WeightedGraph& g, ColoringResult edge_coloring,
                             sim::ExecutionModel model)
    : graph_(g), coloring_(std::move(edge_coloring)), model_(std::move(model)) {}

MwvcAllocation MwvcMechanism::AllocateDetailed(const BidVector& bids) const {
  return MwvcAllocate(graph_, bids, coloring_.coloring, model_);
}

BinaryAllocation MwvcMechanism::Allocate(const BidVector& bids) const {
  MwvcAllocation alloc = AllocateDetailed(bids);
  return {std::move(alloc.in_cover), alloc.trace};
}

}  // namespace localmech
