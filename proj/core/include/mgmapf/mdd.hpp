#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "mgmapf/distance.hpp"
#include "mgmapf/instance.hpp"

namespace mgmapf {

// Time expansion of one agent over t = 0..horizon, keeping v^t only when v is
// reachable by t and some walk from the start covering the goals and v fits
// in the horizon (checked with the MST bound). Dead ends are pruned backward.
class Mdd {
 public:
  Timestep horizon() const { return static_cast<Timestep>(levels_.size()) - 1; }

  // vertices present at level t, ascending
  std::span<const Vertex> level(Timestep t) const { return levels_[static_cast<std::size_t>(t)]; }
  bool contains(Vertex v, Timestep t) const;

  // successors of v^t at level t + 1 (v itself for a wait), ascending
  std::span<const Vertex> successors(Vertex v, Timestep t) const;
  bool has_edge(Vertex u, Vertex v, Timestep t) const;

  std::size_t node_count() const;
  std::size_t edge_count() const;

 private:
  friend Mdd build_mdd(const Instance&, int, Timestep, DistanceOracle&);

  std::size_t slot(Vertex v, Timestep t) const;

  std::vector<std::vector<Vertex>> levels_;
  // successor lists parallel to levels_
  std::vector<std::vector<std::vector<Vertex>>> out_;
};

// Throws InfeasibleAgent when a goal is unreachable from the start.
Mdd build_mdd(const Instance& instance, int agent, Timestep horizon, DistanceOracle& distances);

struct MddStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
};
inline MddStats mdd_stats(const Mdd& mdd) { return {mdd.node_count(), mdd.edge_count()}; }

// one line per level: `t: v v v`
void dump_mdd(std::ostream& out, const Mdd& mdd);

}  // namespace mgmapf
