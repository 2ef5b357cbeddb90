#include "localmech/graph.hpp"

#include <algorithm>

#include "localmech/errors.hpp"

namespace localmech {

WeightedGraph::WeightedGraph(NodeId node_count, std::vector<Edge> edges,
                             std::vector<Weight> weights, Weight weight_bound)
    : adjacency_(node_count > 0 ? node_count : 0),
      incident_(node_count > 0 ? node_count : 0),
      edges_(std::move(edges)),
      weights_(std::move(weights)),
      weight_bound_(weight_bound) {
  if (node_count < 0) throw ContractViolation("negative node count");
  for (EdgeId e = 0; e < edge_count(); ++e) {
    const auto [u, v] = edges_[e];
    if (u < 0 || v < 0 || u >= node_count || v >= node_count) {
      throw ContractViolation("edge " + std::to_string(e) + " has an endpoint out of range");
    }
    adjacency_[u].push_back(v);
    incident_[u].push_back(e);
    if (u != v) {
      adjacency_[v].push_back(u);
      incident_[v].push_back(e);
    }
  }
  for (auto& list : adjacency_) {
    std::sort(list.begin(), list.end());
    max_degree_ = std::max(max_degree_, static_cast<int>(list.size()));
  }
}

WeightedGraph WeightedGraph::Structure(NodeId node_count, std::vector<Edge> edges) {
  return WeightedGraph(node_count, std::move(edges), std::vector<Weight>(node_count, 0), 0);
}

bool WeightedGraph::adjacent(NodeId u, NodeId v) const {
  return std::binary_search(adjacency_[u].begin(), adjacency_[u].end(), v);
}

WeightedGraph WeightedGraph::WithWeights(std::vector<Weight> weights,
                                         Weight weight_bound) const {
  WeightedGraph copy = *this;
  copy.weights_ = std::move(weights);
  copy.weight_bound_ = weight_bound;
  return copy;
}

std::optional<std::string> WeightedGraph::Validate() const {
  if (node_count() < 1) return "node count must be positive";
  if (static_cast<NodeId>(weights_.size()) != node_count()) return "weight count mismatch";
  if (weight_bound_ < 0) return "negative weight bound";
  for (EdgeId e = 0; e < edge_count(); ++e) {
    if (edges_[e].u == edges_[e].v) return "self-loop at edge " + std::to_string(e);
  }
  for (NodeId v = 0; v < node_count(); ++v) {
    if (std::adjacent_find(adjacency_[v].begin(), adjacency_[v].end()) != adjacency_[v].end()) {
      return "duplicate edge at node " + std::to_string(v);
    }
    if (weights_[v] < 0 || weights_[v] > weight_bound_) {
      return "weight out of range at node " + std::to_string(v);
    }
  }
  return std::nullopt;
}

void RequireValid(const WeightedGraph& g) {
  if (auto violation = g.Validate()) throw ContractViolation("invalid graph: " + *violation);
}

std::optional<std::string> ValidateBids(const WeightedGraph& g, std::span<const Weight> bids) {
  if (static_cast<NodeId>(bids.size()) != g.node_count()) return "bid count mismatch";
  for (std::size_t v = 0; v < bids.size(); ++v) {
    if (bids[v] < 0 || bids[v] > g.weight_bound()) {
      return "bid out of range at node " + std::to_string(v);
    }
  }
  return std::nullopt;
}

WeightedGraph SquareGraph(const WeightedGraph& g) {
  const NodeId n = g.node_count();
  std::vector<Edge> edges;
  std::vector<char> mark(n, 0);
  for (NodeId u = 0; u < n; ++u) {
    std::vector<NodeId> near;
    for (NodeId x : g.neighbors(u)) {
      near.push_back(x);
      for (NodeId y : g.neighbors(x)) near.push_back(y);
    }
    std::sort(near.begin(), near.end());
    near.erase(std::unique(near.begin(), near.end()), near.end());
    for (NodeId v : near) {
      if (v > u) edges.push_back({u, v});
    }
  }
  return WeightedGraph(n, std::move(edges), g.weights(), g.weight_bound());
}

WeightedGraph LineGraph(const WeightedGraph& g) {
  std::vector<Edge> edges;
  for (NodeId z = 0; z < g.node_count(); ++z) {
    auto inc = g.incident_edges(z);
    for (std::size_t i = 0; i < inc.size(); ++i) {
      for (std::size_t j = i + 1; j < inc.size(); ++j) edges.push_back({inc[i], inc[j]});
    }
  }
  // In a simple graph two edges share at most one endpoint, so no duplicates.
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
  });
  return WeightedGraph::Structure(g.edge_count(), std::move(edges));
}

bool Beats(const TieKey& a, const TieKey& b, Objective objective) {
  if (a.color == b.color) {
    throw ContractViolation("tie-break between equal colours " + std::to_string(a.color));
  }
  if (a.value != b.value) {
    return objective == Objective::kMax ? a.value > b.value : a.value < b.value;
  }
  return a.color < b.color;
}

TieResult TieCompare(const TieKey& a, const TieKey& b, Objective objective) {
  return Beats(a, b, objective) ? TieResult::kGreater : TieResult::kLess;
}

}  // namespace localmech
