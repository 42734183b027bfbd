#include <benchmark/benchmark.h>

#include <random>

#include "mgmapf/distance.hpp"
#include "mgmapf/hcbs.hpp"
#include "mgmapf/mdd.hpp"
#include "mgmapf/sat.hpp"
#include "mgmapf/smt_hcbs.hpp"

using namespace mgmapf;

namespace {

Graph open_grid(int side) {
  return Graph::from_grid(side, side, std::vector<bool>(static_cast<std::size_t>(side * side), true));
}

// k agents on the top row, goals spread along the diagonal and far corner
Instance spread_instance(int side, int agents, int goals) {
  Graph g = open_grid(side);
  std::vector<Vertex> starts;
  std::vector<std::vector<Vertex>> goal_sets;
  std::mt19937_64 rng(17);
  for (int a = 0; a < agents; ++a) {
    starts.push_back(g.vertex_at(0, a));
    std::vector<Vertex> gs;
    while (static_cast<int>(gs.size()) < goals) {
      Vertex v = static_cast<Vertex>(rng() % static_cast<unsigned>(g.vertex_count()));
      if (std::find(gs.begin(), gs.end(), v) == gs.end()) gs.push_back(v);
    }
    goal_sets.push_back(gs);
  }
  return make_instance(std::move(g), starts, goal_sets);
}

}  // namespace

static void BM_DistanceTables(benchmark::State& state) {
  Graph g = open_grid(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    DistanceOracle d(g);
    for (Vertex v = 0; v < g.vertex_count(); v += 7) benchmark::DoNotOptimize(d.table(v).data());
  }
}
BENCHMARK(BM_DistanceTables)->Arg(16)->Arg(32);

static void BM_MstLowerBound(benchmark::State& state) {
  Graph g = open_grid(32);
  DistanceOracle d(g);
  std::mt19937_64 rng(3);
  std::vector<Vertex> terms;
  for (int i = 0; i < state.range(0); ++i) terms.push_back(static_cast<Vertex>(rng() % 1024));
  for (Vertex t : terms) d.table(t);
  d.table(0);
  for (auto _ : state) benchmark::DoNotOptimize(mst_lower_bound(d, 0, terms));
}
BENCHMARK(BM_MstLowerBound)->Arg(4)->Arg(8)->Arg(16);

static void BM_SegmentSearch(benchmark::State& state) {
  Graph g = open_grid(16);
  DistanceOracle d(g);
  std::vector<Constraint> cs;
  for (Timestep t = 1; t < 30; t += 2) cs.push_back(Constraint::vertex(0, g.vertex_at(8, 8), t));
  AgentConstraints c(cs, 0);
  for (auto _ : state) {
    auto segs = segment_search(g, d, c, g.vertex_at(0, 0), 0, g.vertex_at(15, 15));
    benchmark::DoNotOptimize(segs.size());
  }
}
BENCHMARK(BM_SegmentSearch);

static void BM_PlanAgent(benchmark::State& state) {
  Instance inst = spread_instance(16, 1, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    DistanceOracle d(inst.graph);
    benchmark::DoNotOptimize(plan_agent(inst, 0, {}, d));
  }
}
BENCHMARK(BM_PlanAgent)->Arg(2)->Arg(4)->Arg(6);

static void BM_BuildMdd(benchmark::State& state) {
  Instance inst = spread_instance(16, 1, 4);
  DistanceOracle d(inst.graph);
  auto lb = plan_agent(inst, 0, {}, d)->completion_time;
  for (auto _ : state) benchmark::DoNotOptimize(build_mdd(inst, 0, lb + static_cast<Timestep>(state.range(0)), d));
}
BENCHMARK(BM_BuildMdd)->Arg(0)->Arg(4);

static void BM_Random3Sat(benchmark::State& state) {
  const int vars = static_cast<int>(state.range(0));
  std::mt19937_64 rng(5);
  std::vector<std::vector<sat::Lit>> cnf;
  for (int i = 0; i < vars * 42 / 10; ++i) {
    std::vector<sat::Lit> c;
    for (int j = 0; j < 3; ++j) {
      int v = 1 + static_cast<int>(rng() % static_cast<unsigned>(vars));
      c.push_back(rng() % 2 ? sat::Lit::pos(v) : sat::Lit::neg(v));
    }
    cnf.push_back(c);
  }
  for (auto _ : state) {
    sat::Solver s;
    s.new_vars(vars);
    for (const auto& c : cnf) s.add_clause(c);
    benchmark::DoNotOptimize(s.solve());
  }
}
BENCHMARK(BM_Random3Sat)->Arg(50)->Arg(100)->Arg(150);

static void BM_Hcbs(benchmark::State& state) {
  Instance inst = spread_instance(8, static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(solve_hcbs(inst));
}
BENCHMARK(BM_Hcbs)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_SmtHcbs(benchmark::State& state) {
  Instance inst = spread_instance(8, static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(solve_smt_hcbs(inst));
}
BENCHMARK(BM_SmtHcbs)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
