#include "mgmapf/graph.hpp"

#include <algorithm>

#include "mgmapf/errors.hpp"

namespace mgmapf {

Graph Graph::from_edges(int vertex_count, std::span<const std::pair<Vertex, Vertex>> edges) {
  if (vertex_count < 0) throw Error("negative vertex count");
  Graph g;
  g.adjacency_.resize(static_cast<std::size_t>(vertex_count));
  for (auto [u, v] : edges) {
    if (!g.contains(u) || !g.contains(v)) throw Error("edge endpoint out of range");
    if (u == v) throw Error("self-loop on vertex " + std::to_string(u));
    g.adjacency_[u].push_back(v);
    g.adjacency_[v].push_back(u);
  }
  for (auto& adj : g.adjacency_) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    g.edge_count_ += adj.size();
  }
  g.edge_count_ /= 2;
  return g;
}

Graph Graph::from_grid(int height, int width, const std::vector<bool>& passable) {
  if (height <= 0 || width <= 0) throw Error("grid dimensions must be positive");
  if (passable.size() != static_cast<std::size_t>(height) * static_cast<std::size_t>(width))
    throw Error("passability mask size mismatch");

  std::vector<Vertex> index(passable.size(), kNoVertex);
  std::vector<Cell> coords;
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c)
      if (passable[static_cast<std::size_t>(r * width + c)]) {
        index[static_cast<std::size_t>(r * width + c)] = static_cast<Vertex>(coords.size());
        coords.push_back({r, c});
      }

  std::vector<std::pair<Vertex, Vertex>> edges;
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) {
      Vertex u = index[static_cast<std::size_t>(r * width + c)];
      if (u == kNoVertex) continue;
      if (c + 1 < width) {
        Vertex v = index[static_cast<std::size_t>(r * width + c + 1)];
        if (v != kNoVertex) edges.emplace_back(u, v);
      }
      if (r + 1 < height) {
        Vertex v = index[static_cast<std::size_t>((r + 1) * width + c)];
        if (v != kNoVertex) edges.emplace_back(u, v);
      }
    }

  Graph g = from_edges(static_cast<int>(coords.size()), edges);
  g.coords_ = std::move(coords);
  g.cell_to_vertex_ = std::move(index);
  g.height_ = height;
  g.width_ = width;
  return g;
}

bool Graph::adjacent(Vertex u, Vertex v) const {
  if (!contains(u) || !contains(v)) return false;
  const auto& adj = adjacency_[static_cast<std::size_t>(u)];
  return std::binary_search(adj.begin(), adj.end(), v);
}

std::optional<Cell> Graph::cell(Vertex v) const {
  if (!is_grid() || !contains(v)) return std::nullopt;
  return coords_[static_cast<std::size_t>(v)];
}

Vertex Graph::vertex_at(int row, int col) const {
  if (!is_grid() || row < 0 || col < 0 || row >= height_ || col >= width_) return kNoVertex;
  return cell_to_vertex_[static_cast<std::size_t>(row * width_ + col)];
}

}  // namespace mgmapf
