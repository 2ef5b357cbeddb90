#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "localmech/graph.hpp"
#include "localmech/rational.hpp"

namespace localmech {

/// Seeded generator with platform-independent draws (the standard
/// distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [lo, hi].
  std::int64_t Uniform(std::int64_t lo, std::int64_t hi);
  /// True with probability p.
  bool Bernoulli(double p);
  std::uint64_t Next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// Structure generators; all weights 0 with W = 0 (use WithWeights).
WeightedGraph PathGraph(NodeId n);
WeightedGraph CycleGraph(NodeId n);  // n >= 3
WeightedGraph StarGraph(NodeId leaves);
WeightedGraph GridGraph(NodeId rows, NodeId cols);
WeightedGraph GnpGraph(NodeId n, double p, std::uint64_t seed);
/// Random d-regular simple graph; throws RangeError if n*d is odd or d >= n.
WeightedGraph RandomRegularGraph(NodeId n, int d, std::uint64_t seed);

/// Same structure with weights drawn uniformly from {0..W}.
WeightedGraph WithRandomWeights(const WeightedGraph& g, Weight weight_bound, Rng& rng);
BidVector RandomBids(NodeId n, Weight weight_bound, Rng& rng);

/// Every connected graph on nodes 0..n-1 (labeled, not up to isomorphism),
/// ordered by edge bitmask; weights 0 with W = 0.
std::vector<WeightedGraph> ConnectedLabeledGraphs(NodeId n);

/// Connected graphs with 2..max_n nodes and degree <= max_degree: a random
/// spanning tree plus random extra edges. Weights uniform in {0..W} with W
/// drawn from {1..max_weight}.
std::vector<WeightedGraph> RandomBoundedDegreeGraphs(int count, NodeId max_n, int max_degree,
                                                     Weight max_weight, std::uint64_t seed);

/// Calls f(b) for every vector in {0..W}^n in odometer order.
template <class F>
void ForEachBidVector(NodeId n, Weight weight_bound, F&& f) {
  BidVector b(n, 0);
  while (true) {
    f(static_cast<const BidVector&>(b));
    NodeId i = 0;
    while (i < n && b[i] == weight_bound) b[i++] = 0;
    if (i == n) return;
    ++b[i];
  }
}

}  // namespace localmech
