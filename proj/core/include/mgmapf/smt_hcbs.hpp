#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "mgmapf/distance.hpp"
#include "mgmapf/mdd.hpp"
#include "mgmapf/sat.hpp"
#include "mgmapf/solve.hpp"
#include "mgmapf/validate.hpp"

namespace mgmapf {

// Collisions already refined into the formula; kept across cost levels.
using ConflictSet = std::set<Collision>;

// Propositional variables of H(SoC), indexed by (agent, vertex/edge, time).
// Lookups return 0 for nodes or edges pruned from the agent's MDD.
class VarMap {
 public:
  int x(int agent, Vertex v, Timestep t) const;
  int e(int agent, Vertex u, Vertex v, Timestep t) const;
  int visited(int agent, int goal_index, Timestep t) const;
  int done(int agent, Timestep t) const;

  Timestep horizon() const { return horizon_; }
  int agent_count() const { return static_cast<int>(x_.size()); }
  // literals counted by the cost bound
  const std::vector<sat::Lit>& late_literals() const { return late_; }

 private:
  friend class SmtHcbs;
  Timestep horizon_ = 0;
  std::vector<std::unordered_map<std::uint64_t, int>> x_;
  std::vector<std::unordered_map<std::uint64_t, int>> e_;
  std::vector<std::vector<std::vector<int>>> visited_;  // [agent][goal][t]
  std::vector<std::vector<int>> done_;                  // [agent][t]
  std::vector<sat::Lit> late_;
};

struct Encoding {
  sat::Solver solver;
  VarMap vars;
  std::vector<Mdd> mdds;
  std::int64_t soc = 0;
  std::int64_t slack = 0;  // SoC - Σ LB_i
  bool infeasible = false; // some goal has no copy in its agent's MDD
};

struct SmtOptions {
  SolveOptions solve;
  std::optional<std::filesystem::path> dump_dir;  // h_soc<K>_iter<J>.cnf per SAT call
};

enum class FixedStatus : std::uint8_t { kSolved, kUnsat, kTimeout };

struct FixedOutcome {
  FixedStatus status = FixedStatus::kUnsat;
  std::optional<Solution> solution;
  int iterations = 0;  // SAT calls
  int refinements = 0; // clauses added by this call
};

// Lazy-refinement compilation solver: encodes an incomplete model H(SoC)
// over per-agent MDDs without inter-agent collision constraints, adds one
// binary clause per collision found in extracted plans, and raises SoC from
// the sum of individual optima until a collision-free plan appears.
class SmtHcbs {
 public:
  explicit SmtHcbs(const Instance& instance, SmtOptions options = {});

  // exact unconstrained optimum of each agent
  const std::vector<Timestep>& lower_bounds();
  std::int64_t lower_bound_soc();
  // t_M = max_i LB_i + (SoC - Σ LB_i)
  Timestep horizon_for(std::int64_t soc);

  Encoding encode(std::int64_t soc, const ConflictSet& conflicts);
  // Adds the refinement clause of `c` if both literals exist. Returns whether a clause was added.
  static bool add_refinement(Encoding& enc, const Collision& c);
  std::vector<Path> extract(const Encoding& enc) const;

  FixedOutcome solve_fixed(std::int64_t soc, ConflictSet& conflicts);
  SolveResult solve();

  SearchStats& stats() { return stats_; }

 private:
  const Instance* instance_;
  SmtOptions options_;
  DistanceOracle distances_;
  std::optional<std::vector<Timestep>> lower_bounds_;
  SearchStats stats_;
};

SolveResult solve_smt_hcbs(const Instance& instance, const SmtOptions& options = {});

}  // namespace mgmapf
