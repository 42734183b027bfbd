#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mgmapf/instance.hpp"

namespace mgmapf {

// movingai octile .map reader; throws ParseError with the offending line
Graph parse_map(std::istream& in);
Graph parse_map(std::string_view text);
Graph load_map(const std::filesystem::path& file);

// grid body only, '.' for passable and '@' for blocked
std::string render_map(const Graph& grid);

struct ScenEntry {
  int bucket = 0;
  std::string map_name;
  int map_width = 0;
  int map_height = 0;
  int start_x = 0;  // column
  int start_y = 0;  // row
  int goal_x = 0;
  int goal_y = 0;
  double optimal_length = 0.0;
};

// movingai scenario (version 1) reader; entries keep file order
std::vector<ScenEntry> parse_scen(std::istream& in);
std::vector<ScenEntry> parse_scen(std::string_view text);
std::vector<ScenEntry> load_scen(const std::filesystem::path& file);
void write_scen(std::ostream& out, const std::vector<ScenEntry>& entries);

// Starts are the first `agents` scenario starts; each agent draws
// `goals_per_agent` distinct vertices uniformly from the multiset of all
// scenario goal cells. Deterministic in (graph, scen, agents, goals, seed).
Instance generate_instance(const Graph& grid, const std::vector<ScenEntry>& scen, int agents, int goals_per_agent,
                           std::uint64_t seed);

void write_instance(std::ostream& out, const Instance& instance);
std::string instance_to_string(const Instance& instance);
Instance read_instance(std::istream& in);
Instance read_instance(std::string_view text);
Instance load_instance(const std::filesystem::path& file);

// one line per agent: `agent <i>: v0 v1 ... | cost=<c>`
void write_solution(std::ostream& out, const Solution& solution);
std::string solution_to_string(const Solution& solution);
// lines that do not start with `agent` are ignored
Solution read_solution(std::istream& in);
Solution load_solution(const std::filesystem::path& file);

}  // namespace mgmapf
