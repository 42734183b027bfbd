#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "mgmapf/graph.hpp"

namespace mgmapf {

inline constexpr int kUnreachable = std::numeric_limits<int>::max();

// Unit-cost shortest path lengths, one breadth-first table per queried source,
// computed on first use. Not thread-safe; give each solver thread its own.
class DistanceOracle {
 public:
  explicit DistanceOracle(const Graph& graph);

  const Graph& graph() const { return *graph_; }

  // kUnreachable when u and v lie in different components
  int dist(Vertex u, Vertex v);
  std::span<const int> table(Vertex source);

  std::size_t cached_sources() const { return cached_; }

 private:
  const Graph* graph_;
  std::vector<std::vector<int>> tables_;
  std::size_t cached_ = 0;
};

// Cost of a minimum spanning tree of the metric closure over {u} ∪ terminals
// (Prim). Lower-bounds the cheapest walk from u that visits every terminal.
// Throws DisconnectedTerminals when some terminal is unreachable.
int mst_lower_bound(DistanceOracle& oracle, Vertex u, std::span<const Vertex> terminals);

}  // namespace mgmapf
