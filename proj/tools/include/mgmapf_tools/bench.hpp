#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mgmapf/instance.hpp"
#include "mgmapf/io.hpp"
#include "mgmapf/solve.hpp"

namespace mgmapf::tools {

enum class Algo { kHcbs, kSmt, kOracle };

std::string to_string(Algo a);
Algo parse_algo(const std::string& name);

SolveResult run_algo(Algo algo, const Instance& instance, double timeout_seconds,
                     const std::optional<std::filesystem::path>& dump_dir = std::nullopt);

struct BenchConfig {
  std::filesystem::path map;
  std::filesystem::path scen;
  std::vector<int> agents;
  int goals = 1;
  int instances = 25;
  double timeout = 300.0;
  std::vector<Algo> algos{Algo::kHcbs, Algo::kSmt};
  std::uint64_t seed = 0;
  int jobs = 1;
  bool timing = true;

  void check() const;
};

struct BenchRow {
  Algo algo;
  int agents = 0;
  int goals = 0;
  int attempted = 0;
  int solved = 0;
  std::vector<double> ms;  // solved runs only
  std::vector<std::int64_t> socs;
};

// Seed of the i-th instance at a given agent count. Every algorithm sees the
// same instances.
std::uint64_t instance_seed(std::uint64_t base, int agents, int index);

std::vector<BenchRow> run_bench(const BenchConfig& config, const Graph& grid, const std::vector<ScenEntry>& scen);

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows, bool timing);

}  // namespace mgmapf::tools
