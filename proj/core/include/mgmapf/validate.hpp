#pragma once

#include <compare>
#include <span>
#include <string>
#include <vector>

#include "mgmapf/instance.hpp"

namespace mgmapf {

enum class ConflictKind : std::uint8_t { kVertex, kEdge };

// Two agents meet at one vertex at `time` (kVertex, location v), or swap
// along one edge between `time` and `time + 1` (kEdge: first agent moves
// u -> v, second moves v -> u).
struct Collision {
  Timestep time = 0;
  int first = 0;
  int second = 0;
  ConflictKind kind = ConflictKind::kVertex;
  Vertex u = kNoVertex;  // kEdge only
  Vertex v = kNoVertex;

  auto operator<=>(const Collision&) const = default;
};

// Forbids `agent` from being at v at `time` (kVertex), or from moving
// u -> v between `time` and `time + 1` (kEdge).
struct Constraint {
  ConflictKind kind = ConflictKind::kVertex;
  int agent = 0;
  Vertex u = kNoVertex;  // kEdge only
  Vertex v = kNoVertex;
  Timestep time = 0;

  static Constraint vertex(int agent, Vertex v, Timestep t) { return {ConflictKind::kVertex, agent, kNoVertex, v, t}; }
  static Constraint edge(int agent, Vertex u, Vertex v, Timestep t) { return {ConflictKind::kEdge, agent, u, v, t}; }

  auto operator<=>(const Constraint&) const = default;
};

struct GoalGap {
  int agent = 0;
  Vertex goal = kNoVertex;
  bool operator==(const GoalGap&) const = default;
};

struct ValidationReport {
  std::vector<Collision> collisions;  // sorted by (time, first, second, kind)
  std::vector<GoalGap> gaps;
  bool valid() const { return collisions.empty() && gaps.empty(); }
};

// Throws StructuralError if some path does not begin at its start or makes a
// move that is neither a wait nor an edge.
void check_structure(const Instance& instance, std::span<const Path> paths);

// Every vertex and edge collision over t = 0..max path length, with shorter
// paths parked at their final vertex.
std::vector<Collision> find_collisions(std::span<const Path> paths);

ValidationReport validate(const Instance& instance, const Solution& solution);

std::string to_string(const Collision& c);
std::string to_string(const Constraint& c);

}  // namespace mgmapf
