#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace localmech {

using NodeId = std::int32_t;
using EdgeId = std::int32_t;
using Weight = std::int64_t;

/// Reported weights, one per node, on the integer grid {0..W}.
using BidVector = std::vector<Weight>;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected node-weighted graph; both the problem instance and the
/// communication network. Node ids are 0..n-1, edge ids follow input order.
///
/// Construction does not validate: malformed input (self-loops, duplicate
/// edges, out-of-range weights) is representable so that Validate() can
/// report it. Everything downstream assumes Validate() returned nullopt.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  WeightedGraph(NodeId node_count, std::vector<Edge> edges, std::vector<Weight> weights,
                Weight weight_bound);

  /// Unweighted convenience: all weights 0, W = 0.
  static WeightedGraph Structure(NodeId node_count, std::vector<Edge> edges);

  NodeId node_count() const { return static_cast<NodeId>(adjacency_.size()); }
  EdgeId edge_count() const { return static_cast<EdgeId>(edges_.size()); }
  Weight weight_bound() const { return weight_bound_; }
  int max_degree() const { return max_degree_; }

  std::span<const NodeId> neighbors(NodeId v) const { return adjacency_[v]; }
  /// Edge ids incident to v, in increasing id order.
  std::span<const EdgeId> incident_edges(NodeId v) const { return incident_[v]; }
  int degree(NodeId v) const { return static_cast<int>(adjacency_[v].size()); }
  bool adjacent(NodeId u, NodeId v) const;

  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  const std::vector<Weight>& weights() const { return weights_; }
  Weight weight(NodeId v) const { return weights_[v]; }

  /// Same structure, new weights and bound.
  WeightedGraph WithWeights(std::vector<Weight> weights, Weight weight_bound) const;

  /// First invariant violation, or nullopt when the graph is simple,
  /// undirected and every weight lies in [0, W].
  std::optional<std::string> Validate() const;

  friend bool operator==(const WeightedGraph&, const WeightedGraph&) = default;

 private:
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<std::vector<EdgeId>> incident_;
  std::vector<Edge> edges_;
  std::vector<Weight> weights_;
  Weight weight_bound_ = 0;
  int max_degree_ = 0;
};

/// Throws ContractViolation with the violation text if `g` is invalid.
void RequireValid(const WeightedGraph& g);

/// Checks length and range of a bid vector against g.
std::optional<std::string> ValidateBids(const WeightedGraph& g, std::span<const Weight> bids);

/// u ~ v iff 1 <= dist(u, v) <= 2. Weights are copied.
WeightedGraph SquareGraph(const WeightedGraph& g);

/// One node per edge of g (same id); adjacent iff the edges share an
/// endpoint. Output weights are 0 with W = 0.
WeightedGraph LineGraph(const WeightedGraph& g);

enum class Objective { kMax, kMin };

/// A compared quantity together with the colour used to break ties.
struct TieKey {
  std::int64_t value = 0;
  std::int64_t color = 0;
};

/// True iff `a` is selected over `b`: for kMax the larger value wins, for
/// kMin the smaller; equal values go to the smaller colour.
/// Throws ContractViolation if the colours are equal.
bool Beats(const TieKey& a, const TieKey& b, Objective objective);

enum class TieResult { kLess, kGreater };

/// kGreater iff `a` beats `b`.
TieResult TieCompare(const TieKey& a, const TieKey& b, Objective objective);

}  // namespace localmech
