#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "mgmapf/distance.hpp"
#include "mgmapf/instance.hpp"
#include "mgmapf/sat.hpp"
#include "mgmapf/solve.hpp"
#include "mgmapf/validate.hpp"

namespace mgmapf::testing {

// F1: path v1 - v2 - v3 - v4 (ids 0..3)
Graph f1_path();
// F2: star, centre c = 0 and leaves l1, l2, l3 = 1, 2, 3
Graph f2_star();
// F3: open 2x2 grid, nw = 0, ne = 1, sw = 2, se = 3
Graph f3_grid();
// F4: open 3x3 grid, row-major ids 0..8
Graph f4_grid();

Graph random_connected_graph(std::mt19937_64& rng, int vertices, int extra_edges);
// connected grid with at most max_cells passable cells
Graph random_connected_grid(std::mt19937_64& rng, int max_cells);
bool connected(const Graph& g);

// cheapest walk from u visiting every terminal, by trying every order
int brute_covering_walk(DistanceOracle& d, Vertex u, std::span<const Vertex> terminals);

// all pairwise collisions by direct comparison, O(k^2 T)
std::vector<Collision> naive_collisions(std::span<const Path> paths);

// truth-table satisfiability over vars 1..n
bool brute_sat(int vars, const std::vector<std::vector<sat::Lit>>& clauses);

Instance random_instance(std::mt19937_64& rng, const Graph& g, int agents, int goals_per_agent);

struct SuiteCase {
  Instance instance;
  Solution optimum;
  std::int64_t soc;
};

// instances (graphs <= 12 vertices, <= 3 agents, <= 3 goals) that the joint
// oracle solves; unsolvable draws are discarded
std::vector<SuiteCase> solvable_suite(int count, std::uint64_t seed);

}  // namespace mgmapf::testing
