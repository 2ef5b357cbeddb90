#include "localmech/optimum.hpp"

#include <algorithm>
#include <functional>

#include "localmech/errors.hpp"

namespace localmech {
namespace {

void RequireCap(const WeightedGraph& g) {
  if (g.node_count() > kBruteForceNodeCap) {
    throw CapExceeded("brute force limited to " + std::to_string(kBruteForceNodeCap) +
                      " nodes, got " + std::to_string(g.node_count()));
  }
}

void RequireWeights(const WeightedGraph& g, std::span<const Rational> weights) {
  if (static_cast<NodeId>(weights.size()) != g.node_count()) {
    throw ContractViolation("weight count does not match node count");
  }
}

/// Bit v set iff v is adjacent to the node (closed: includes the node itself).
std::vector<std::uint32_t> ClosedNeighborhoodMasks(const WeightedGraph& g) {
  std::vector<std::uint32_t> masks(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    masks[v] = 1u << v;
    for (NodeId u : g.neighbors(v)) masks[v] |= 1u << u;
  }
  return masks;
}

Rational MaskWeight(std::span<const Rational> weights, std::uint32_t mask) {
  Rational total(0);
  for (std::size_t v = 0; v < weights.size(); ++v) {
    if (mask >> v & 1u) total += weights[v];
  }
  return total;
}

/// Best weight over subsets accepted by `feasible`, maximising or minimising.
template <class Feasible>
Rational EnumerateSubsets(const WeightedGraph& g, std::span<const Rational> weights, bool maximize,
                          Feasible feasible) {
  RequireCap(g);
  RequireWeights(g, weights);
  const std::uint32_t limit = 1u << g.node_count();
  std::optional<Rational> best;
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    if (!feasible(mask)) continue;
    const Rational w = MaskWeight(weights, mask);
    if (!best || (maximize ? w > *best : w < *best)) best = w;
  }
  return *best;
}

}  // namespace

std::vector<Rational> ToRationals(std::span<const Weight> weights) {
  return {weights.begin(), weights.end()};
}

Rational OptMwis(const WeightedGraph& g, std::span<const Rational> weights) {
  return EnumerateSubsets(g, weights, true, [&](std::uint32_t mask) {
    for (const Edge& e : g.edges()) {
      if ((mask >> e.u & 1u) && (mask >> e.v & 1u)) return false;
    }
    return true;
  });
}

Rational OptMwvc(const WeightedGraph& g, std::span<const Rational> weights) {
  return EnumerateSubsets(g, weights, false, [&](std::uint32_t mask) {
    for (const Edge& e : g.edges()) {
      if (!(mask >> e.u & 1u) && !(mask >> e.v & 1u)) return false;
    }
    return true;
  });
}

Rational OptMwds(const WeightedGraph& g, std::span<const Rational> weights) {
  const std::vector<std::uint32_t> closed = ClosedNeighborhoodMasks(g);
  return EnumerateSubsets(g, weights, false, [&](std::uint32_t mask) {
    for (std::uint32_t c : closed) {
      if ((c & mask) == 0) return false;
    }
    return true;
  });
}

Rational OptMwisBranch(const WeightedGraph& g, std::span<const Rational> weights) {
  RequireCap(g);
  RequireWeights(g, weights);
  const NodeId n = g.node_count();
  std::vector<char> blocked(n, 0);
  Rational best(0);
  // Suffix sums bound what the undecided nodes can still add.
  std::vector<Rational> suffix(n + 1, Rational(0));
  for (NodeId v = n - 1; v >= 0; --v) suffix[v] = suffix[v + 1] + weights[v];
  std::function<void(NodeId, Rational)> search = [&](NodeId v, Rational value) {
    if (value + suffix[v] <= best && v < n) return;
    if (v == n) {
      best = std::max(best, value);
      return;
    }
    if (!blocked[v]) {
      std::vector<NodeId> newly;
      for (NodeId u : g.neighbors(v)) {
        if (!blocked[u]) {
          blocked[u] = 1;
          newly.push_back(u);
        }
      }
      search(v + 1, value + weights[v]);
      for (NodeId u : newly) blocked[u] = 0;
    }
    search(v + 1, value);
  };
  search(0, Rational(0));
  return best;
}

Rational OptMwvcBranch(const WeightedGraph& g, std::span<const Rational> weights) {
  RequireCap(g);
  RequireWeights(g, weights);
  const NodeId n = g.node_count();
  std::vector<char> chosen(n, 0);
  std::optional<Rational> best;
  std::function<void(NodeId, Rational)> search = [&](NodeId v, Rational cost) {
    if (best && cost >= *best) return;
    if (v == n) {
      best = cost;
      return;
    }
    // Excluding v forces every earlier neighbour to be in the cover.
    bool can_exclude = true;
    for (NodeId u : g.neighbors(v)) {
      if (u < v && !chosen[u]) can_exclude = false;
    }
    chosen[v] = 1;
    search(v + 1, cost + weights[v]);
    chosen[v] = 0;
    if (can_exclude) search(v + 1, cost);
  };
  search(0, Rational(0));
  return *best;
}

Rational OptMwdsBranch(const WeightedGraph& g, std::span<const Rational> weights) {
  RequireCap(g);
  RequireWeights(g, weights);
  const NodeId n = g.node_count();
  std::vector<int> cover_count(n, 0);
  std::optional<Rational> best;
  // A node u is settled once every member of N+(u) has been decided, i.e.
  // after deciding max(N+(u)); it must be covered by then.
  std::vector<NodeId> last_decider(n);
  for (NodeId u = 0; u < n; ++u) {
    last_decider[u] = u;
    for (NodeId x : g.neighbors(u)) last_decider[u] = std::max(last_decider[u], x);
  }
  std::function<void(NodeId, Rational)> search = [&](NodeId v, Rational cost) {
    if (best && cost >= *best) return;
    if (v == n) {
      best = cost;
      return;
    }
    auto settled_ok = [&] {
      if (last_decider[v] == v && cover_count[v] == 0) return false;
      for (NodeId u : g.neighbors(v)) {
        if (last_decider[u] == v && cover_count[u] == 0) return false;
      }
      return true;
    };
    auto toggle = [&](int delta) {
      cover_count[v] += delta;
      for (NodeId u : g.neighbors(v)) cover_count[u] += delta;
    };
    toggle(+1);
    if (settled_ok()) search(v + 1, cost + weights[v]);
    toggle(-1);
    if (settled_ok()) search(v + 1, cost);
  };
  search(0, Rational(0));
  return *best;
}

namespace {

void RequireRates(const WeightedGraph& g, std::span<const Rational> rates) {
  if (static_cast<int>(rates.size()) != g.max_degree() + 1) {
    throw ContractViolation("slot rates must have max_degree + 1 entries");
  }
}

}  // namespace

Rational OptSlot(const WeightedGraph& g, std::span<const Rational> weights,
                 std::span<const Rational> rates) {
  RequireWeights(g, weights);
  RequireRates(g, rates);
  const NodeId n = g.node_count();
  const auto slots = static_cast<int>(rates.size());
  std::vector<int> slot(n, -1);
  std::int64_t visited = 0;
  std::optional<Rational> best;
  std::function<void(NodeId, Rational)> search = [&](NodeId v, Rational value) {
    if (++visited > kSlotAssignmentCap) throw CapExceeded("slot assignment enumeration cap");
    if (v == n) {
      if (!best || value > *best) best = value;
      return;
    }
    for (int s = 0; s < slots; ++s) {
      bool clash = false;
      for (NodeId u : g.neighbors(v)) {
        if (slot[u] == s) clash = true;
      }
      if (clash) continue;
      slot[v] = s;
      search(v + 1, value + rates[s] * weights[v]);
      slot[v] = -1;
    }
  };
  search(0, Rational(0));
  return *best;
}

Rational OptSlotOdometer(const WeightedGraph& g, std::span<const Rational> weights,
                         std::span<const Rational> rates) {
  RequireWeights(g, weights);
  RequireRates(g, rates);
  const NodeId n = g.node_count();
  const auto slots = static_cast<int>(rates.size());
  std::int64_t total = 1;
  for (NodeId v = 0; v < n; ++v) {
    total *= slots;
    if (total > kSlotAssignmentCap) throw CapExceeded("slot assignment enumeration cap");
  }
  std::vector<int> digits(n, 0);
  std::optional<Rational> best;
  for (std::int64_t i = 0; i < total; ++i) {
    bool proper = true;
    for (const Edge& e : g.edges()) {
      if (digits[e.u] == digits[e.v]) proper = false;
    }
    if (proper) {
      Rational value(0);
      for (NodeId v = 0; v < n; ++v) value += rates[digits[v]] * weights[v];
      if (!best || value > *best) best = value;
    }
    for (NodeId v = 0; v < n; ++v) {
      if (++digits[v] < slots) break;
      digits[v] = 0;
    }
  }
  return *best;
}

bool IsIndependentSet(const WeightedGraph& g, std::span<const char> members) {
  for (const Edge& e : g.edges()) {
    if (members[e.u] && members[e.v]) return false;
  }
  return true;
}

bool IsMaximalIndependentSet(const WeightedGraph& g, std::span<const char> members) {
  if (!IsIndependentSet(g, members)) return false;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (members[v]) continue;
    const auto nbrs = g.neighbors(v);
    if (std::none_of(nbrs.begin(), nbrs.end(), [&](NodeId u) { return members[u] != 0; })) {
      return false;
    }
  }
  return true;
}

bool IsVertexCover(const WeightedGraph& g, std::span<const char> members) {
  for (const Edge& e : g.edges()) {
    if (!members[e.u] && !members[e.v]) return false;
  }
  return true;
}

bool IsDominatingSet(const WeightedGraph& g, std::span<const char> members) {
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (members[v]) continue;
    const auto nbrs = g.neighbors(v);
    if (std::none_of(nbrs.begin(), nbrs.end(), [&](NodeId u) { return members[u] != 0; })) {
      return false;
    }
  }
  return true;
}

Rational SetWeight(std::span<const Rational> weights, std::span<const char> members) {
  Rational total(0);
  for (std::size_t v = 0; v < weights.size(); ++v) {
    if (members[v]) total += weights[v];
  }
  return total;
}

}  // namespace localmech
