#include "localmech/corpus.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "localmech/errors.hpp"

namespace localmech {

std::int64_t Rng::Uniform(std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(engine_() % span);
}

bool Rng::Bernoulli(double p) {
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return u < p;
}

WeightedGraph PathGraph(NodeId n) {
  std::vector<Edge> edges;
  for (NodeId v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1});
  return WeightedGraph::Structure(n, std::move(edges));
}

WeightedGraph CycleGraph(NodeId n) {
  if (n < 3) throw RangeError("a cycle needs at least 3 nodes");
  std::vector<Edge> edges;
  for (NodeId v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1});
  edges.push_back({0, n - 1});
  return WeightedGraph::Structure(n, std::move(edges));
}

WeightedGraph StarGraph(NodeId leaves) {
  std::vector<Edge> edges;
  for (NodeId v = 1; v <= leaves; ++v) edges.push_back({0, v});
  return WeightedGraph::Structure(leaves + 1, std::move(edges));
}

WeightedGraph GridGraph(NodeId rows, NodeId cols) {
  std::vector<Edge> edges;
  for (NodeId r = 0; r < rows; ++r) {
    for (NodeId c = 0; c < cols; ++c) {
      const NodeId v = r * cols + c;
      if (c + 1 < cols) edges.push_back({v, v + 1});
      if (r + 1 < rows) edges.push_back({v, v + cols});
    }
  }
  return WeightedGraph::Structure(rows * cols, std::move(edges));
}

WeightedGraph GnpGraph(NodeId n, double p, std::uint64_t seed) {
  if (p < 0 || p > 1) throw RangeError("edge probability outside [0, 1]");
  Rng rng(seed);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (rng.Bernoulli(p)) edges.push_back({u, v});
    }
  }
  return WeightedGraph::Structure(n, std::move(edges));
}

WeightedGraph RandomRegularGraph(NodeId n, int d, std::uint64_t seed) {
  if (d < 0 || d >= n) throw RangeError("regular degree must lie in [0, n)");
  if ((static_cast<std::int64_t>(n) * d) % 2 != 0) {
    throw RangeError("n * d must be even for a regular graph");
  }
  Rng rng(seed);
  // Configuration model with restarts until the pairing is simple.
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<NodeId> stubs;
    for (NodeId v = 0; v < n; ++v) stubs.insert(stubs.end(), d, v);
    for (std::size_t i = stubs.size(); i > 1; --i) {
      std::swap(stubs[i - 1], stubs[static_cast<std::size_t>(rng.Uniform(0, i - 1))]);
    }
    std::set<std::pair<NodeId, NodeId>> seen;
    bool simple = true;
    for (std::size_t i = 0; i + 1 < stubs.size() && simple; i += 2) {
      const NodeId a = std::min(stubs[i], stubs[i + 1]);
      const NodeId b = std::max(stubs[i], stubs[i + 1]);
      simple = a != b && seen.insert({a, b}).second;
    }
    if (!simple) continue;
    std::vector<Edge> edges;
    for (auto [a, b] : seen) edges.push_back({a, b});
    return WeightedGraph::Structure(n, std::move(edges));
  }
  throw RangeError("no simple regular pairing found");
}

WeightedGraph WithRandomWeights(const WeightedGraph& g, Weight weight_bound, Rng& rng) {
  return g.WithWeights(RandomBids(g.node_count(), weight_bound, rng), weight_bound);
}

BidVector RandomBids(NodeId n, Weight weight_bound, Rng& rng) {
  BidVector bids(n);
  for (Weight& b : bids) b = rng.Uniform(0, weight_bound);
  return bids;
}

std::vector<WeightedGraph> ConnectedLabeledGraphs(NodeId n) {
  std::vector<Edge> candidates;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) candidates.push_back({u, v});
  }
  std::vector<WeightedGraph> graphs;
  const std::uint64_t limit = std::uint64_t{1} << candidates.size();
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    std::vector<Edge> edges;
    std::vector<NodeId> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](NodeId x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    NodeId components = n;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (!(mask >> i & 1u)) continue;
      edges.push_back(candidates[i]);
      const NodeId a = find(candidates[i].u);
      const NodeId b = find(candidates[i].v);
      if (a != b) {
        parent[a] = b;
        --components;
      }
    }
    if (components == 1) graphs.push_back(WeightedGraph::Structure(n, std::move(edges)));
  }
  return graphs;
}

std::vector<WeightedGraph> RandomBoundedDegreeGraphs(int count, NodeId max_n, int max_degree,
                                                     Weight max_weight, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<WeightedGraph> graphs;
  for (int i = 0; i < count; ++i) {
    const auto n = static_cast<NodeId>(rng.Uniform(2, max_n));
    std::vector<int> degree(n, 0);
    std::set<std::pair<NodeId, NodeId>> edges;
    auto add = [&](NodeId a, NodeId b) {
      edges.insert({std::min(a, b), std::max(a, b)});
      ++degree[a];
      ++degree[b];
    };
    for (NodeId v = 1; v < n; ++v) {
      // A tree always has a node of degree <= 1, so some parent is free.
      std::vector<NodeId> open;
      for (NodeId u = 0; u < v; ++u) {
        if (degree[u] < max_degree) open.push_back(u);
      }
      add(v, open[static_cast<std::size_t>(rng.Uniform(0, open.size() - 1))]);
    }
    const std::int64_t extra = rng.Uniform(0, n);
    for (std::int64_t k = 0; k < extra; ++k) {
      const auto a = static_cast<NodeId>(rng.Uniform(0, n - 1));
      const auto b = static_cast<NodeId>(rng.Uniform(0, n - 1));
      if (a == b || degree[a] >= max_degree || degree[b] >= max_degree) continue;
      if (edges.count({std::min(a, b), std::max(a, b)})) continue;
      add(a, b);
    }
    std::vector<Edge> edge_list;
    for (auto [a, b] : edges) edge_list.push_back({a, b});
    const Weight w = rng.Uniform(1, max_weight);
    graphs.push_back(
        WithRandomWeights(WeightedGraph::Structure(n, std::move(edge_list)), w, rng));
  }
  return graphs;
}

}  // namespace localmech
