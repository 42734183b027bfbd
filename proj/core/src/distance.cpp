#include "mgmapf/distance.hpp"

#include <algorithm>
#include <deque>

#include "mgmapf/errors.hpp"

namespace mgmapf {

DistanceOracle::DistanceOracle(const Graph& graph)
    : graph_(&graph), tables_(static_cast<std::size_t>(graph.vertex_count())) {}

std::span<const int> DistanceOracle::table(Vertex source) {
  auto& t = tables_.at(static_cast<std::size_t>(source));
  if (!t.empty()) return t;
  t.assign(static_cast<std::size_t>(graph_->vertex_count()), kUnreachable);
  std::deque<Vertex> queue{source};
  t[source] = 0;
  while (!queue.empty()) {
    Vertex u = queue.front();
    queue.pop_front();
    for (Vertex v : graph_->neighbors(u))
      if (t[v] == kUnreachable) {
        t[v] = t[u] + 1;
        queue.push_back(v);
      }
  }
  ++cached_;
  return t;
}

int DistanceOracle::dist(Vertex u, Vertex v) { return table(u)[static_cast<std::size_t>(v)]; }

int mst_lower_bound(DistanceOracle& oracle, Vertex u, std::span<const Vertex> terminals) {
  std::vector<Vertex> nodes{u};
  for (Vertex v : terminals)
    if (std::find(nodes.begin(), nodes.end(), v) == nodes.end()) nodes.push_back(v);
  const std::size_t n = nodes.size();
  if (n <= 1) return 0;

  // Prim over the complete graph on the terminals
  std::vector<int> best(n, kUnreachable);
  std::vector<bool> in_tree(n, false);
  best[0] = 0;
  int cost = 0;
  for (std::size_t round = 0; round < n; ++round) {
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i)
      if (!in_tree[i] && (pick == n || best[i] < best[pick])) pick = i;
    if (best[pick] == kUnreachable)
      throw DisconnectedTerminals("terminal " + std::to_string(nodes[pick]) + " is unreachable from " +
                                  std::to_string(u));
    in_tree[pick] = true;
    cost += best[pick];
    auto row = oracle.table(nodes[pick]);
    for (std::size_t i = 0; i < n; ++i)
      if (!in_tree[i]) best[i] = std::min(best[i], row[static_cast<std::size_t>(nodes[i])]);
  }
  return cost;
}

}  // namespace mgmapf
