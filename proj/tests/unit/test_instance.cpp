#include <doctest.h>

#include <random>
#include <sstream>

#include "../support/fixtures.hpp"
#include "mgmapf/errors.hpp"
#include "mgmapf/io.hpp"
#include "mgmapf/oracle.hpp"
#include "mgmapf/validate.hpp"

using namespace mgmapf;
using namespace mgmapf::testing;

namespace {

std::string octile(int h, int w, const std::string& body) {
  return "type octile\nheight " + std::to_string(h) + "\nwidth " + std::to_string(w) + "\nmap\n" + body;
}

std::string empty_map(int n) {
  std::string body;
  for (int r = 0; r < n; ++r) body += std::string(static_cast<std::size_t>(n), '.') + "\n";
  return octile(n, n, body);
}

}  // namespace

TEST_CASE("parse_map builds one vertex per passable cell") {
  Graph g = parse_map(octile(2, 2, "..\n.@\n"));
  CHECK(g.vertex_count() == 3);
  CHECK(g.edge_count() == 2);
  CHECK(g.adjacent(g.vertex_at(0, 0), g.vertex_at(0, 1)));
  CHECK(g.adjacent(g.vertex_at(0, 0), g.vertex_at(1, 0)));
  CHECK(g.vertex_at(1, 1) == kNoVertex);

  Graph one = parse_map(octile(1, 1, ".\n"));
  CHECK(one.vertex_count() == 1);
  CHECK(one.edge_count() == 0);

  Graph e16 = parse_map(empty_map(16));
  CHECK(e16.vertex_count() == 256);
  CHECK(e16.edge_count() == 2 * 16 * 15);
}

TEST_CASE("parse_map cell classes") {
  Graph g = parse_map(octile(1, 8, ".GS@OTW.\n"));
  CHECK(g.vertex_count() == 4);
  CHECK(g.edge_count() == 2);
}

TEST_CASE("parse_map errors name the line") {
  auto line_of = [](const std::string& text) {
    try {
      parse_map(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("type octile\nheight 2\nwidth 2\nmap\n..\n...\n") == 6);
  CHECK(line_of("type octile\nheight 1\nwidth 2\nmap\n.x\n") == 5);
  CHECK(line_of("type octile\nheight two\nwidth 2\nmap\n..\n") == 2);
  CHECK(line_of("type hex\nheight 1\nwidth 1\nmap\n.\n") == 1);
  CHECK(line_of("height 1\nwidth 1\nmap\n.\n") == 3);
  CHECK(line_of("type octile\nheight 2\nwidth 1\nmap\n.\n") == 6);
}

TEST_CASE("render_map round-trips the grid body") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    std::uniform_int_distribution<int> side(1, 9);
    int h = side(rng), w = side(rng);
    std::string body;
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) body += (rng() % 4 == 0) ? '@' : '.';
      body += '\n';
    }
    Graph g = parse_map(octile(h, w, body));
    CHECK(render_map(g) == body);
    CHECK(parse_map(octile(h, w, render_map(g))) == g);
  }
}

TEST_CASE("parse_scen") {
  auto entries = parse_scen("version 1\n0\tempty-16-16.map\t16\t16\t4\t2\t5\t2\t1.0\n");
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].map_name == "empty-16-16.map");
  CHECK(entries[0].start_x == 4);
  CHECK(entries[0].start_y == 2);
  CHECK(entries[0].goal_x == 5);
  CHECK(entries[0].goal_y == 2);
  CHECK(entries[0].optimal_length == doctest::Approx(1.0));

  CHECK(parse_scen("version 1\n").empty());

  try {
    parse_scen("version 1\n0\tm.map\t16\t16\t4\t2\t5\t2\t1.0\n0\tm.map\t16\t16\t4\t2\t5\t2\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_scen("0\tm.map\t16\t16\t4\t2\t5\t2\t1.0\n"), ParseError);

  std::ostringstream os;
  write_scen(os, entries);
  auto again = parse_scen(os.str());
  REQUIRE(again.size() == 1);
  CHECK(again[0].goal_x == 5);
}

TEST_CASE("generate_instance") {
  Graph g = parse_map(empty_map(4));
  std::vector<ScenEntry> scen;
  for (int i = 0; i < 4; ++i) scen.push_back({0, "m", 4, 4, i, 0, 3 - i, 3, 3.0});

  SUBCASE("deterministic in the seed") {
    Instance a = generate_instance(g, scen, 1, 1, 7);
    Instance b = generate_instance(g, scen, 1, 1, 7);
    CHECK(instance_to_string(a) == instance_to_string(b));
    REQUIRE(a.goals[0].size() == 1);
    CHECK(g.cell(a.goals[0][0])->row == 3);
  }
  SUBCASE("starts come from the scenario in order") {
    Instance a = generate_instance(g, std::vector<ScenEntry>(scen.begin(), scen.begin() + 2), 2, 1, 3);
    CHECK(a.starts[0] == g.vertex_at(0, 0));
    CHECK(a.starts[1] == g.vertex_at(0, 1));
  }
  SUBCASE("goal sets are distinct draws") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Instance a = generate_instance(g, scen, 4, 4, seed);
      for (const auto& goals : a.goals) CHECK(goals.size() == 4);
    }
  }
  SUBCASE("errors") {
    std::vector<ScenEntry> two{scen[0], {0, "m", 4, 4, 1, 0, 0, 3, 3.0}};
    CHECK_THROWS_AS(generate_instance(g, two, 1, 3, 1), Error);
    CHECK_THROWS_AS(generate_instance(g, two, 3, 1, 1), Error);
  }
}

TEST_CASE("instance and solution text formats") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    Graph g = i % 2 ? random_connected_grid(rng, 12) : random_connected_graph(rng, 7, 3);
    Instance inst = random_instance(rng, g, 2, 2);
    inst.seed = 99;
    Instance back = read_instance(instance_to_string(inst));
    CHECK(instance_to_string(back) == instance_to_string(inst));
    CHECK(back.graph == inst.graph);
  }
  Instance inst = make_instance(f1_path(), {0}, {{3}});
  Solution s = make_solution(inst, {{0, 1, 2, 3}});
  CHECK(solution_to_string(s) == "agent 0: 0 1 2 3 | cost=3\n");
  std::istringstream in(solution_to_string(s) + "soc=3\n");
  Solution back = read_solution(in);
  CHECK(back.soc == 3);
  CHECK(back.plans[0].path == s.plans[0].path);
}

TEST_CASE("agent_cost") {
  // F1: v1..v4 = 0..3
  CHECK(agent_cost(Path{0, 1, 2}, std::vector<Vertex>{2}) == 2);
  CHECK(agent_cost(Path{0, 0}, std::vector<Vertex>{0}) == 1);
  CHECK(agent_cost(Path{0, 1, 0, 2}, std::vector<Vertex>{1, 2}) == 3);
  CHECK_THROWS_AS(agent_cost(Path{0}, std::vector<Vertex>{0}), IncompletePlan);
  CHECK_THROWS_AS(agent_cost(Path{0, 1}, std::vector<Vertex>{3}), IncompletePlan);
}

TEST_CASE("padding after completion never changes cost") {
  std::mt19937_64 rng(3);
  Graph g = f4_grid();
  for (int i = 0; i < 200; ++i) {
    Path p{static_cast<Vertex>(rng() % 9)};
    for (int t = 0; t < 8; ++t) {
      auto nb = g.neighbors(p.back());
      p.push_back(rng() % 3 == 0 ? p.back() : nb[rng() % nb.size()]);
    }
    std::vector<Vertex> goals{p[3], p[5]};
    std::sort(goals.begin(), goals.end());
    goals.erase(std::unique(goals.begin(), goals.end()), goals.end());
    Timestep c = agent_cost(p, goals);
    Path padded = p;
    padded.insert(padded.end(), 4, p.back());
    CHECK(agent_cost(padded, goals) == c);
  }
}

TEST_CASE("sum_of_costs and makespan") {
  Instance one = make_instance(f1_path(), {0}, {{3}});
  Solution s = make_solution(one, {{0, 1, 2, 3}});
  CHECK(sum_of_costs(s) == 3);
  CHECK(makespan(s) == 3);

  Instance two = make_instance(f4_grid(), {0, 8}, {{1}, {4}});
  Solution s2 = make_solution(two, {{0, 0, 1}, {8, 7, 6, 3, 4}});
  CHECK(s2.soc == 2 + 4);
  CHECK(s2.makespan == 4);
}

TEST_CASE("validate") {
  SUBCASE("planted vertex collision") {
    Graph g = f4_grid();
    Instance inst = make_instance(g, {4, 2}, {{5}, {5}});
    auto report = validate(inst, make_solution(inst, {{4, 5}, {2, 5}}));
    REQUIRE(report.collisions.size() == 1);
    CHECK(report.collisions[0] == Collision{1, 0, 1, ConflictKind::kVertex, kNoVertex, 5});
  }
  SUBCASE("edge swap") {
    Instance inst = make_instance(f1_path(), {1, 2}, {{2}, {1}});
    auto report = validate(inst, make_solution(inst, {{1, 2}, {2, 1}}));
    REQUIRE(report.collisions.size() == 1);
    CHECK(report.collisions[0] == Collision{0, 0, 1, ConflictKind::kEdge, 1, 2});
  }
  SUBCASE("2x2 rotation is valid") {
    Instance inst = make_instance(f3_grid(), {0, 3}, {{3}, {0}});
    auto opt = solve_optimal(inst);
    REQUIRE(opt.solved());
    CHECK(opt.solution->soc == 4);
    auto report = validate(inst, make_solution(inst, {{0, 1, 3}, {3, 2, 0}}));
    CHECK(report.valid());
  }
  SUBCASE("parked agent still collides") {
    Instance inst = make_instance(f1_path(), {1, 3}, {{2}, {1}});
    auto report = validate(inst, make_solution(inst, {{1, 2}, {3, 3, 2, 1}}));
    REQUIRE_FALSE(report.collisions.empty());
    CHECK(report.collisions[0].time == 2);
    CHECK(report.collisions[0].v == 2);
  }
  SUBCASE("coverage gaps and structural errors") {
    Instance inst = make_instance(f1_path(), {0}, {{2, 3}});
    Solution s;
    s.plans.push_back({{0, 1, 2}, 2});
    auto report = validate(inst, s);
    REQUIRE(report.gaps.size() == 1);
    CHECK(report.gaps[0] == GoalGap{0, 3});

    s.plans[0] = {{0, 2, 3}, 2};
    try {
      validate(inst, s);
      FAIL("expected a structural error");
    } catch (const StructuralError& e) {
      CHECK(e.agent() == 0);
      CHECK(e.time() == 1);
    }
    s.plans[0] = {{1, 2, 3}, 2};
    CHECK_THROWS_AS(validate(inst, s), StructuralError);
  }
}

TEST_CASE("find_collisions agrees with the naive checker") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    Graph g = random_connected_grid(rng, 12);
    const int k = 2 + static_cast<int>(rng() % 3);
    std::vector<Path> paths;
    for (int a = 0; a < k; ++a) {
      Path p{static_cast<Vertex>(rng() % static_cast<unsigned>(g.vertex_count()))};
      const int len = static_cast<int>(rng() % 7);
      for (int t = 0; t < len; ++t) {
        auto nb = g.neighbors(p.back());
        p.push_back(nb.empty() || rng() % 3 == 0 ? p.back() : nb[rng() % nb.size()]);
      }
      paths.push_back(std::move(p));
    }
    CHECK(find_collisions(paths) == naive_collisions(paths));
  }
}

TEST_CASE("instance invariants are enforced") {
  CHECK_THROWS_AS(make_instance(f1_path(), {0, 0}, {{1}, {2}}), InvalidInstance);
  CHECK_THROWS_AS(make_instance(f1_path(), {0}, {{}}), InvalidInstance);
  CHECK_THROWS_AS(make_instance(f1_path(), {0}, {{9}}), InvalidInstance);
  CHECK_THROWS_AS(make_instance(f2_star(), {0, 1, 2, 3, 3}, {{1}, {1}, {1}, {1}, {1}}), InvalidInstance);
}
