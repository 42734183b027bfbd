#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mgmapf/graph.hpp"

namespace mgmapf {

using Path = std::vector<Vertex>;

// A multi-goal MAPF instance: every agent starts on its own vertex and must
// visit each vertex of its goal set at least once (visits count from t = 1).
struct Instance {
  Graph graph;
  std::vector<Vertex> starts;
  std::vector<std::vector<Vertex>> goals;  // each sorted, unique, non-empty

  // generation metadata, carried through serialization
  int goals_per_agent = 0;
  std::uint64_t seed = 0;

  int agent_count() const { return static_cast<int>(starts.size()); }

  // throws InvalidInstance when an invariant is broken
  void check() const;
};

Instance make_instance(Graph graph, std::vector<Vertex> starts, std::vector<std::vector<Vertex>> goals);

struct Plan {
  Path path;               // path[t] for t = 0..len
  Timestep completion_time = 0;

  Timestep length() const { return path.empty() ? 0 : static_cast<Timestep>(path.size()) - 1; }
};

struct Solution {
  std::vector<Plan> plans;
  std::int64_t soc = 0;
  Timestep makespan = 0;
};

// Cost of one agent: the smallest t_c such that every goal occurs in
// path[1..t_c]. Throws IncompletePlan when some goal is never visited.
Timestep agent_cost(std::span<const Vertex> path, std::span<const Vertex> goals);

std::int64_t sum_of_costs(const Solution& solution);
Timestep makespan(const Solution& solution);

// Builds plans with completion times from raw paths and fills soc/makespan.
Solution make_solution(const Instance& instance, std::vector<Path> paths);

// Position of a path at time t with the stay-at-last-vertex padding.
inline Vertex position_at(std::span<const Vertex> path, Timestep t) {
  if (path.empty()) return kNoVertex;
  auto i = static_cast<std::size_t>(t);
  return i < path.size() ? path[i] : path.back();
}

}  // namespace mgmapf
