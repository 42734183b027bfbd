#include "fixtures.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <stdexcept>

#include "mgmapf/oracle.hpp"

namespace mgmapf::testing {

Graph f1_path() {
  std::vector<std::pair<Vertex, Vertex>> e{{0, 1}, {1, 2}, {2, 3}};
  return Graph::from_edges(4, e);
}

Graph f2_star() {
  std::vector<std::pair<Vertex, Vertex>> e{{0, 1}, {0, 2}, {0, 3}};
  return Graph::from_edges(4, e);
}

Graph f3_grid() { return Graph::from_grid(2, 2, std::vector<bool>(4, true)); }

Graph f4_grid() { return Graph::from_grid(3, 3, std::vector<bool>(9, true)); }

bool connected(const Graph& g) {
  if (g.vertex_count() == 0) return false;
  std::vector<bool> seen(static_cast<std::size_t>(g.vertex_count()), false);
  std::deque<Vertex> q{0};
  seen[0] = true;
  int count = 1;
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop_front();
    for (Vertex v : g.neighbors(u))
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        q.push_back(v);
      }
  }
  return count == g.vertex_count();
}

Graph random_connected_graph(std::mt19937_64& rng, int vertices, int extra_edges) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex v = 1; v < vertices; ++v) {
    std::uniform_int_distribution<Vertex> parent(0, v - 1);
    edges.emplace_back(parent(rng), v);
  }
  if (vertices > 1) {
    std::uniform_int_distribution<Vertex> any(0, vertices - 1);
    for (int i = 0; i < extra_edges; ++i) {
      Vertex a = any(rng), b = any(rng);
      if (a != b) edges.emplace_back(a, b);
    }
  }
  return Graph::from_edges(vertices, edges);
}

Graph random_connected_grid(std::mt19937_64& rng, int max_cells) {
  for (;;) {
    std::uniform_int_distribution<int> side(2, 4);
    int h = side(rng), w = side(rng);
    if (h * w > max_cells + 2) continue;
    std::bernoulli_distribution blocked(0.15);
    std::vector<bool> pass(static_cast<std::size_t>(h * w));
    int open = 0;
    for (std::size_t i = 0; i < pass.size(); ++i) {
      pass[i] = !blocked(rng);
      open += pass[i];
    }
    if (open < 3 || open > max_cells) continue;
    Graph g = Graph::from_grid(h, w, pass);
    if (connected(g)) return g;
  }
}

int brute_covering_walk(DistanceOracle& d, Vertex u, std::span<const Vertex> terminals) {
  std::vector<Vertex> order(terminals.begin(), terminals.end());
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());
  int best = kUnreachable;
  do {
    long cost = 0;
    Vertex at = u;
    for (Vertex v : order) {
      int step = d.dist(at, v);
      if (step == kUnreachable) return kUnreachable;
      cost += step;
      at = v;
    }
    best = std::min<long>(best, cost);
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

std::vector<Collision> naive_collisions(std::span<const Path> paths) {
  std::vector<Collision> out;
  Timestep horizon = 0;
  for (const auto& p : paths) horizon = std::max(horizon, static_cast<Timestep>(p.size()) - 1);
  for (int i = 0; i < static_cast<int>(paths.size()); ++i)
    for (int j = i + 1; j < static_cast<int>(paths.size()); ++j)
      for (Timestep t = 0; t <= horizon; ++t) {
        Vertex a = position_at(paths[i], t), b = position_at(paths[j], t);
        if (a == b) out.push_back({t, i, j, ConflictKind::kVertex, kNoVertex, a});
        if (t == horizon) continue;
        Vertex a2 = position_at(paths[i], t + 1), b2 = position_at(paths[j], t + 1);
        if (a != a2 && a == b2 && b == a2) out.push_back({t, i, j, ConflictKind::kEdge, a, a2});
      }
  std::sort(out.begin(), out.end());
  return out;
}

bool brute_sat(int vars, const std::vector<std::vector<sat::Lit>>& clauses) {
  for (std::uint32_t bits = 0; bits < (1u << vars); ++bits) {
    bool all = true;
    for (const auto& c : clauses) {
      bool any = false;
      for (auto l : c) any = any || (((bits >> (l.var() - 1)) & 1u) != static_cast<std::uint32_t>(l.negative()));
      if (!any) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

Instance random_instance(std::mt19937_64& rng, const Graph& g, int agents, int goals_per_agent) {
  std::vector<Vertex> vertices(static_cast<std::size_t>(g.vertex_count()));
  std::iota(vertices.begin(), vertices.end(), 0);
  std::shuffle(vertices.begin(), vertices.end(), rng);
  std::vector<Vertex> starts(vertices.begin(), vertices.begin() + agents);
  std::vector<std::vector<Vertex>> goals;
  std::uniform_int_distribution<Vertex> any(0, g.vertex_count() - 1);
  for (int a = 0; a < agents; ++a) {
    std::vector<Vertex> set;
    int want = std::min(goals_per_agent, g.vertex_count());
    while (static_cast<int>(set.size()) < want) {
      Vertex v = any(rng);
      if (std::find(set.begin(), set.end(), v) == set.end()) set.push_back(v);
    }
    goals.push_back(std::move(set));
  }
  return make_instance(g, std::move(starts), std::move(goals));
}

std::vector<SuiteCase> solvable_suite(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<SuiteCase> out;
  const std::vector<Graph> fixtures{f1_path(), f2_star(), f3_grid(), f4_grid()};
  OracleOptions oracle;
  oracle.state_limit = 3'000'000;
  while (static_cast<int>(out.size()) < count) {
    std::uniform_int_distribution<int> pick(0, 9);
    const int kind = pick(rng);
    Graph g = kind < 4 ? fixtures[static_cast<std::size_t>(kind)] : random_connected_grid(rng, 12);
    std::uniform_int_distribution<int> agents_d(1, std::min(3, g.vertex_count() - 1));
    std::uniform_int_distribution<int> goals_d(1, 3);
    Instance inst = random_instance(rng, g, agents_d(rng), goals_d(rng));
    auto res = solve_optimal(inst, oracle);
    if (!res.solved()) continue;
    std::int64_t soc = res.solution->soc;
    out.push_back({std::move(inst), std::move(*res.solution), soc});
  }
  return out;
}

}  // namespace mgmapf::testing
