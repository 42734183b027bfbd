#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <span>
#include <unordered_set>
#include <vector>

#include "mgmapf/distance.hpp"
#include "mgmapf/instance.hpp"
#include "mgmapf/solve.hpp"
#include "mgmapf/validate.hpp"

namespace mgmapf {

// The constraints of one agent, hashed for O(1) lookups.
class AgentConstraints {
 public:
  AgentConstraints() = default;
  AgentConstraints(std::span<const Constraint> constraints, int agent);

  bool vertex_blocked(Vertex v, Timestep t) const;
  bool edge_blocked(Vertex u, Vertex v, Timestep t) const;
  // move from u at t to v at t+1 (u == v is a wait)
  bool move_allowed(Vertex u, Vertex v, Timestep t) const {
    return !vertex_blocked(v, t + 1) && (u == v || !edge_blocked(u, v, t));
  }

  // Last timestep whose position or incoming move is constrained; 0 if none.
  // Beyond it the time expansion is stationary.
  Timestep latest() const { return latest_; }
  bool empty() const { return vertex_.empty() && edge_.empty(); }

 private:
  std::unordered_set<std::uint64_t> vertex_;
  std::unordered_set<std::uint64_t> edge_;
  Timestep latest_ = 0;
};

struct Segment {
  Path path;  // path.front() is the origin at the departure time
  Timestep arrival = 0;
};

// Time-expanded A* from (from, from_time) to `to`. next() yields paths in
// strictly increasing arrival time (arrival > from_time). Once an arrival at
// or after latest() + 1 has been produced, later arrivals are dominated by
// waiting and the stream ends.
class SegmentSearch {
 public:
  SegmentSearch(const Graph& graph, DistanceOracle& distances, const AgentConstraints& constraints, Vertex from,
                Timestep from_time, Vertex to, std::optional<Timestep> horizon = std::nullopt);

  std::optional<Segment> next();
  std::int64_t expansions() const { return expansions_; }

 private:
  struct Node {
    Vertex v;
    Timestep t;
    std::int32_t parent;
  };
  struct Entry {
    int f;
    int h;
    std::int64_t seq;
    std::int32_t node;
    bool operator>(const Entry& o) const {
      if (f != o.f) return f > o.f;
      if (h != o.h) return h > o.h;
      return seq > o.seq;
    }
  };

  void push(Vertex v, Timestep t, std::int32_t parent);

  const Graph* graph_;
  const AgentConstraints* constraints_;
  std::span<const int> to_dist_;
  Vertex to_;
  Timestep from_time_;
  Timestep horizon_;
  Timestep last_arrival_ = -1;
  bool done_ = false;
  std::vector<Node> nodes_;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open_;
  std::unordered_set<std::uint64_t> seen_;
  std::int64_t seq_ = 0;
  std::int64_t expansions_ = 0;
};

// Convenience wrapper draining a SegmentSearch.
std::vector<Segment> segment_search(const Graph& graph, DistanceOracle& distances, const AgentConstraints& constraints,
                                    Vertex from, Timestep from_time, Vertex to,
                                    std::optional<Timestep> horizon = std::nullopt);

struct PlannerCounters {
  std::int64_t ordering_expansions = 0;
  std::int64_t ordering_generated = 0;
  std::int64_t segment_expansions = 0;
};

// Thrown from inside a search when its deadline fires.
struct SearchTimeout {};

// A* over goal orderings: nodes are (vertex, arrival, visited goals), edges
// are constraint-respecting segments to an unvisited goal, h is the
// metric-closure MST over the remaining goals. Returns a plan of minimal
// completion time whose path also avoids every constraint after completion,
// or nullopt when none exists.
std::optional<Plan> plan_agent(const Instance& instance, int agent, std::span<const Constraint> constraints,
                               DistanceOracle& distances, PlannerCounters* counters = nullptr,
                               DeadlineProbe* probe = nullptr);

// Three-level Hamiltonian CBS. Sum-of-costs optimal.
SolveResult solve_hcbs(const Instance& instance, const SolveOptions& options = {});

}  // namespace mgmapf
