#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace mgmapf {

using Vertex = std::int32_t;
using Timestep = std::int32_t;

inline constexpr Vertex kNoVertex = -1;

struct Cell {
  int row = 0;
  int col = 0;
  bool operator==(const Cell&) const = default;
};

// Undirected unit-cost graph with dense vertex ids. Grid-derived graphs also
// keep the cell geometry so scenario coordinates can be mapped to vertices.
class Graph {
 public:
  Graph() = default;

  static Graph from_edges(int vertex_count, std::span<const std::pair<Vertex, Vertex>> edges);

  // passable is row-major, height*width; vertices are numbered row-major over
  // passable cells, edges join 4-neighbours
  static Graph from_grid(int height, int width, const std::vector<bool>& passable);

  int vertex_count() const { return static_cast<int>(adjacency_.size()); }
  std::size_t edge_count() const { return edge_count_; }
  bool contains(Vertex v) const { return v >= 0 && v < vertex_count(); }

  std::span<const Vertex> neighbors(Vertex v) const { return adjacency_[static_cast<std::size_t>(v)]; }
  bool adjacent(Vertex u, Vertex v) const;
  // wait or edge move
  bool valid_move(Vertex from, Vertex to) const { return from == to || adjacent(from, to); }

  bool is_grid() const { return height_ > 0; }
  int height() const { return height_; }
  int width() const { return width_; }
  std::optional<Cell> cell(Vertex v) const;
  Vertex vertex_at(int row, int col) const;
  bool passable(int row, int col) const { return vertex_at(row, col) != kNoVertex; }

  bool operator==(const Graph&) const = default;

 private:
  std::vector<std::vector<Vertex>> adjacency_;
  std::vector<Cell> coords_;
  std::vector<Vertex> cell_to_vertex_;
  int height_ = 0;
  int width_ = 0;
  std::size_t edge_count_ = 0;
};

}  // namespace mgmapf
