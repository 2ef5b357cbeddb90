#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <variant>
#include <utility>
#include <vector>

#include "localmech/graph.hpp"
#include "localmech/sim.hpp"

namespace localmech::sim {

/// Width of the per-item field counter inside relay bundles.
inline constexpr std::uint32_t kFieldCountBits = 8;

namespace detail {

inline void AppendItem(Payload& bundle, std::uint64_t tag, std::uint32_t tag_bits,
                       std::uint64_t address, std::uint32_t address_bits, const Payload& body) {
  bundle.Add(tag, tag_bits).Add(address, address_bits).Add(body.size(), kFieldCountBits);
  bundle.Append(body);
}

}  // namespace detail

/// Runs a program written for G^2 on the network G. Every simulated round
/// costs two real rounds: messages to distance-2 nodes travel through the
/// smallest-id common neighbour. One extra leading round exchanges
/// neighbour lists so each node learns its 2-hop topology.
///
/// Nodes stop relaying once their inner program halts, so inner programs
/// must halt in the same simulated round on every node (true for the
/// fixed-schedule colour reduction).
template <NodeProgram Inner>
class TwoHopSimulation {
 public:
  using Input = typename Inner::Input;
  using Output = typename Inner::Output;

  struct State {
    std::int64_t invocation = 0;
    Input input{};
    std::vector<NodeId> two_hop;
    std::vector<NodeId> relay;
    std::optional<typename Inner::State> inner;
    std::vector<Message> pending;
    std::optional<Output> done;
  };

  TwoHopSimulation(Inner inner, int square_max_degree)
      : inner_(std::move(inner)), square_max_degree_(square_max_degree) {}

  State Init(const NodeContext&, const Input& input) const {
    State s;
    s.input = input;
    return s;
  }

  std::optional<Output> Round(const NodeContext& ctx, State& s, std::span<const Message> inbox,
                              Outbox& out) const {
    ++s.invocation;
    if (s.invocation == 1) {
      Payload list;
      for (NodeId u : ctx.neighbors) list.Add(static_cast<std::uint64_t>(u), ctx.widths.id);
      out.Broadcast(list);
      return std::nullopt;
    }
    if (s.invocation == 2) {
      std::map<NodeId, NodeId> relay;
      for (NodeId u : ctx.neighbors) relay[u] = u;
      for (const Message& m : inbox) {
        for (std::size_t i = 0; i < m.payload.size(); ++i) {
          const auto y = static_cast<NodeId>(m.payload[i]);
          if (y == ctx.id) continue;
          auto [it, inserted] = relay.emplace(y, m.from);
          if (!inserted && it->second != y) it->second = std::min(it->second, m.from);
        }
      }
      for (auto [y, via] : relay) {
        s.two_hop.push_back(y);
        s.relay.push_back(via);
      }
      const NodeContext inner_ctx = InnerContext(ctx, s);
      s.inner.emplace(inner_.Init(inner_ctx, s.input));
      Step(ctx, inner_ctx, s, out);
      return std::nullopt;
    }
    if (s.invocation % 2 == 1) {
      // Relay round: keep items addressed here, forward the rest.
      std::map<NodeId, Payload> forward;
      for (const Message& m : inbox) {
        std::size_t i = 0;
        while (i < m.payload.size()) {
          const auto dest = static_cast<NodeId>(m.payload[i + 1]);
          const auto count = static_cast<std::size_t>(m.payload[i + 2]);
          Payload body = m.payload.Slice(i + 3, count);
          i += 3 + count;
          if (dest == ctx.id) {
            s.pending.push_back({m.from, std::move(body)});
          } else {
            detail::AppendItem(forward[dest], 0, 0, static_cast<std::uint64_t>(m.from),
                               ctx.widths.id, body);
          }
        }
      }
      for (auto& [dest, bundle] : forward) out.Send(dest, std::move(bundle));
      if (s.done) return std::move(s.done);
      return std::nullopt;
    }
    for (const Message& m : inbox) {
      std::size_t i = 0;
      while (i < m.payload.size()) {
        const auto origin = static_cast<NodeId>(m.payload[i + 1]);
        const auto count = static_cast<std::size_t>(m.payload[i + 2]);
        s.pending.push_back({origin, m.payload.Slice(i + 3, count)});
        i += 3 + count;
      }
    }
    std::stable_sort(s.pending.begin(), s.pending.end(),
                     [](const Message& a, const Message& b) { return a.from < b.from; });
    const NodeContext inner_ctx = InnerContext(ctx, s);
    Step(ctx, inner_ctx, s, out);
    return std::nullopt;
  }

 private:
  NodeContext InnerContext(const NodeContext& ctx, const State& s) const {
    NodeContext inner = ctx;
    inner.neighbors = s.two_hop;
    inner.max_degree = square_max_degree_;
    return inner;
  }

  void Step(const NodeContext& ctx, const NodeContext& inner_ctx, State& s, Outbox& out) const {
    if (s.done) return;
    Outbox inner_out(inner_ctx.neighbors);
    std::optional<Output> halt =
        inner_.Round(inner_ctx, *s.inner, std::span<const Message>(s.pending), inner_out);
    s.pending.clear();
    std::map<NodeId, Payload> bundles;
    for (auto& [dest, payload] : inner_out.sends()) {
      const auto pos = std::lower_bound(s.two_hop.begin(), s.two_hop.end(), dest);
      const NodeId via = s.relay[pos - s.two_hop.begin()];
      detail::AppendItem(bundles[via], via == dest ? 0 : 1, 1, static_cast<std::uint64_t>(dest),
                         ctx.widths.id, payload);
    }
    for (auto& [via, bundle] : bundles) out.Send(via, std::move(bundle));
    if (halt) s.done = std::move(halt);
  }

  Inner inner_;
  int square_max_degree_;
};

/// Runs a program written for the line graph L(G) on the network G. Each
/// edge is simulated by both of its endpoints (identical replicas), so one
/// simulated round costs one real round. One extra leading round exchanges
/// incident-edge lists. Output per node: the outputs of its incident edges.
///
/// Same lockstep-halting requirement as TwoHopSimulation.
template <NodeProgram Inner>
class LineGraphSimulation {
 public:
  using Input = std::monostate;
  using Output = std::vector<std::pair<EdgeId, typename Inner::Output>>;

  struct Replica {
    EdgeId edge = 0;
    NodeId other = 0;
    std::vector<EdgeId> adjacent;
    std::optional<typename Inner::State> state;
    std::vector<Message> pending;
    std::optional<typename Inner::Output> done;
  };

  struct State {
    std::int64_t invocation = 0;
    std::vector<Replica> replicas;
  };

  /// `inputs_by_edge[e]` seeds the replicas of edge e.
  LineGraphSimulation(Inner inner, const WeightedGraph& network,
                      std::vector<typename Inner::Input> inputs_by_edge,
                      int line_max_degree)
      : inner_(std::move(inner)),
        network_(&network),
        inputs_(std::move(inputs_by_edge)),
        line_max_degree_(line_max_degree) {}

  State Init(const NodeContext& ctx, const std::monostate&) const {
    State s;
    for (EdgeId e : network_->incident_edges(ctx.id)) {
      const Edge& edge = network_->edge(e);
      s.replicas.push_back({e, edge.u == ctx.id ? edge.v : edge.u, {}, std::nullopt, {}, {}});
    }
    return s;
  }

  std::optional<Output> Round(const NodeContext& ctx, State& s, std::span<const Message> inbox,
                              Outbox& out) const {
    ++s.invocation;
    if (s.replicas.empty()) return Output{};
    const std::uint32_t edge_bits = sim::BitsFor(network_->edge_count());
    if (s.invocation == 1) {
      Payload list;
      for (const Replica& r : s.replicas) list.Add(static_cast<std::uint64_t>(r.edge), edge_bits);
      out.Broadcast(list);
      return std::nullopt;
    }
    if (s.invocation == 2) {
      for (Replica& r : s.replicas) {
        for (const Replica& other : s.replicas) {
          if (other.edge != r.edge) r.adjacent.push_back(other.edge);
        }
        for (const Message& m : inbox) {
          if (m.from != r.other) continue;
          for (std::size_t i = 0; i < m.payload.size(); ++i) {
            const auto f = static_cast<EdgeId>(m.payload[i]);
            if (f != r.edge) r.adjacent.push_back(f);
          }
        }
        std::sort(r.adjacent.begin(), r.adjacent.end());
        r.state.emplace(inner_.Init(InnerContext(ctx, r), inputs_[r.edge]));
      }
    } else {
      for (const Message& m : inbox) {
        std::size_t i = 0;
        while (i < m.payload.size()) {
          const auto src = static_cast<EdgeId>(m.payload[i]);
          const auto dst = static_cast<EdgeId>(m.payload[i + 1]);
          const auto count = static_cast<std::size_t>(m.payload[i + 2]);
          if (Replica* r = Find(s, dst)) r->pending.push_back({src, m.payload.Slice(i + 3, count)});
          i += 3 + count;
        }
      }
    }

    std::vector<std::pair<EdgeId, std::vector<Message>>> local;
    std::map<NodeId, Payload> bundles;
    for (Replica& r : s.replicas) {
      if (r.done) continue;
      std::stable_sort(r.pending.begin(), r.pending.end(),
                       [](const Message& a, const Message& b) { return a.from < b.from; });
      const NodeContext inner_ctx = InnerContext(ctx, r);
      Outbox inner_out(inner_ctx.neighbors);
      std::optional<typename Inner::Output> halt =
          inner_.Round(inner_ctx, *r.state, std::span<const Message>(r.pending), inner_out);
      r.pending.clear();
      for (auto& [dst, payload] : inner_out.sends()) {
        const Edge& f = network_->edge(dst);
        if (f.u != ctx.id && f.v != ctx.id) continue;  // the replica at the shared endpoint delivers
        const NodeId far = f.u == ctx.id ? f.v : f.u;
        const Edge& e = network_->edge(r.edge);
        if (e.u != far && e.v != far) {
          detail::AppendItem(bundles[far], static_cast<std::uint64_t>(r.edge), edge_bits,
                             static_cast<std::uint64_t>(dst), edge_bits, payload);
        }
        local.push_back({dst, {}});
        local.back().second.push_back({r.edge, std::move(payload)});
      }
      if (halt) r.done = std::move(halt);
    }
    for (auto& [dst, msgs] : local) {
      if (Replica* r = Find(s, dst)) {
        for (Message& m : msgs) r->pending.push_back(std::move(m));
      }
    }
    for (auto& [to, bundle] : bundles) out.Send(to, std::move(bundle));

    if (std::all_of(s.replicas.begin(), s.replicas.end(),
                    [](const Replica& r) { return r.done.has_value(); })) {
      Output result;
      for (Replica& r : s.replicas) result.emplace_back(r.edge, std::move(*r.done));
      return result;
    }
    return std::nullopt;
  }

 private:
  static Replica* Find(State& s, EdgeId e) {
    for (Replica& r : s.replicas) {
      if (r.edge == e) return &r;
    }
    return nullptr;
  }

  NodeContext InnerContext(const NodeContext& ctx, const Replica& r) const {
    NodeContext inner;
    inner.id = r.edge;
    inner.neighbors = r.adjacent;
    inner.node_count = network_->edge_count();
    inner.max_degree = line_max_degree_;
    inner.weight_bound = ctx.weight_bound;
    inner.widths = FieldWidths::For(network_->edge_count(), ctx.weight_bound);
    return inner;
  }

  Inner inner_;
  const WeightedGraph* network_;
  std::vector<typename Inner::Input> inputs_;
  int line_max_degree_;
};

}  // namespace localmech::sim
