#include <doctest.h>

#include <deque>
#include <map>
#include <random>

#include "fixtures.hpp"
#include "mgmapf/errors.hpp"
#include "mgmapf/oracle.hpp"

using namespace mgmapf;
using namespace mgmapf::testing;

namespace {

// breadth-first search over (vertex, visited mask) for one agent
int single_agent_optimum(const Instance& inst) {
  const auto& goals = inst.goals[0];
  const unsigned full = (1u << goals.size()) - 1;
  std::map<std::pair<Vertex, unsigned>, int> seen;
  std::deque<std::pair<Vertex, unsigned>> queue{{inst.starts[0], 0u}};
  seen[queue.front()] = 0;
  while (!queue.empty()) {
    auto [v, mask] = queue.front();
    queue.pop_front();
    const int d = seen[{v, mask}];
    std::vector<Vertex> next{v};
    for (Vertex w : inst.graph.neighbors(v)) next.push_back(w);
    for (Vertex w : next) {
      unsigned m = mask;
      for (std::size_t i = 0; i < goals.size(); ++i)
        if (goals[i] == w) m |= 1u << i;
      if (m == full) return d + 1;
      if (seen.emplace(std::pair{w, m}, d + 1).second) queue.emplace_back(w, m);
    }
  }
  return -1;
}

}  // namespace

TEST_CASE("oracle examples") {
  SolveResult single = solve_optimal(make_instance(f1_path(), {0}, {{3}}));
  REQUIRE(single.solved());
  CHECK(single.solution->soc == 3);

  SolveResult rot = solve_optimal(make_instance(f3_grid(), {0, 3}, {{3}, {0}}));
  REQUIRE(rot.solved());
  CHECK(rot.solution->soc == 4);

  SolveResult star = solve_optimal(make_instance(f2_star(), {0}, {{1, 2, 3}}));
  REQUIRE(star.solved());
  CHECK(star.solution->soc == 5);
}

TEST_CASE("swap on a path has no solution") {
  Instance swap = make_instance(f1_path(), {0, 3}, {{3}, {0}});
  OracleOptions capped;
  capped.soc_cap = 50;
  CHECK(solve_optimal(swap, capped).status == SolveStatus::kNoSolutionWithinCap);
  SolveResult open = solve_optimal(swap);
  CHECK(open.status == SolveStatus::kNoSolutionWithinCap);
  CHECK(open.stats.get("settled_states") > 0);
}

TEST_CASE("oracle matches single-agent search") {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    Graph g = trial % 2 ? random_connected_grid(rng, 12) : random_connected_graph(rng, 3 + static_cast<int>(rng() % 8), 3);
    Instance inst = random_instance(rng, g, 1, 1 + static_cast<int>(rng() % 3));
    SolveResult r = solve_optimal(inst);
    REQUIRE(r.solved());
    CHECK(r.solution->soc == single_agent_optimum(inst));
  }
}

TEST_CASE("oracle solutions are valid and bounded below by individual optima") {
  std::mt19937_64 rng(66);
  int solved = 0;
  for (int trial = 0; trial < 60; ++trial) {
    Graph g = random_connected_grid(rng, 10);
    const int agents = std::min(g.vertex_count(), 2 + static_cast<int>(rng() % 2));
    Instance inst = random_instance(rng, g, agents, 1 + static_cast<int>(rng() % 2));
    OracleOptions opt;
    opt.state_limit = 2'000'000;
    SolveResult r = solve_optimal(inst, opt);
    if (!r.solved()) continue;
    ++solved;
    CHECK(validate(inst, *r.solution).valid());
    std::int64_t lower = 0;
    for (int a = 0; a < inst.agent_count(); ++a)
      lower += single_agent_optimum(make_instance(inst.graph, {inst.starts[a]}, {inst.goals[a]}));
    CHECK(r.solution->soc >= lower);
  }
  CHECK(solved > 30);
}

TEST_CASE("oracle limits") {
  Instance inst = make_instance(f4_grid(), {0, 2, 6, 8}, {{8, 4, 2}, {6, 0, 4}, {2, 8, 1}, {0, 6, 5}});
  OracleOptions tiny;
  tiny.state_limit = 10;
  CHECK(solve_optimal(inst, tiny).status == SolveStatus::kStateLimit);
  OracleOptions late;
  late.deadline = Deadline::after_seconds(0.0);
  CHECK(solve_optimal(inst, late).status == SolveStatus::kTimeout);
}
