#include "mgmapf_tools/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>

#include "mgmapf/distance.hpp"
#include "mgmapf/errors.hpp"
#include "mgmapf/io.hpp"
#include "mgmapf/validate.hpp"
#include "mgmapf_tools/bench.hpp"

namespace mgmapf::tools {
namespace {

std::uint64_t default_seed() {
  const char* env = std::getenv("MGMAPF_SEED");
  if (env == nullptr || *env == '\0') return 0;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(env, &used);
    if (used == std::string(env).size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(std::string("MGMAPF_SEED is not an unsigned integer: ") + env);
}

const std::map<std::string, Algo> kAlgoNames{{"hcbs", Algo::kHcbs}, {"smt", Algo::kSmt}, {"oracle", Algo::kOracle}};

struct InstanceSource {
  std::string instance;
  std::string map;
  std::string scen;
  int agents = 1;
  int goals = 1;
  std::optional<std::uint64_t> seed;

  void attach(CLI::App& cmd) {
    auto* inst = cmd.add_option("--instance", instance, "instance file")->check(CLI::ExistingFile);
    auto* m = cmd.add_option("--map", map, "movingai map")->check(CLI::ExistingFile)->excludes(inst);
    auto* s = cmd.add_option("--scen", scen, "movingai scenario")->check(CLI::ExistingFile)->excludes(inst);
    m->needs(s);
    s->needs(m);
    cmd.add_option("--agents", agents, "number of agents")->check(CLI::PositiveNumber);
    cmd.add_option("--goals", goals, "goals per agent")->check(CLI::PositiveNumber);
    cmd.add_option("--seed", seed, "goal sampling seed (default $MGMAPF_SEED or 0)");
  }

  Instance load() const {
    if (!instance.empty()) return load_instance(instance);
    if (map.empty()) throw CLI::RequiredError("--instance or --map/--scen");
    return generate_instance(load_map(map), load_scen(scen), agents, goals, seed ? *seed : default_seed());
  }
};

int cmd_solve(const std::string& algo_name, const InstanceSource& src, double timeout, const std::string& dump_cnf,
              bool stats, std::ostream& out) {
  const Algo algo = parse_algo(algo_name);
  const Instance instance = src.load();
  std::optional<std::filesystem::path> dump;
  if (!dump_cnf.empty()) {
    std::filesystem::create_directories(dump_cnf);
    dump = dump_cnf;
  }
  SolveResult r = run_algo(algo, instance, timeout, dump);
  out << "status=" << to_string(r.status) << '\n';
  if (r.solved()) {
    write_solution(out, *r.solution);
    out << "soc=" << r.solution->soc << '\n' << "makespan=" << r.solution->makespan << '\n';
  }
  if (stats)
    write_stats(out, r.stats);
  else
    out << "wall_ms=" << std::fixed << std::setprecision(3) << r.stats.wall_ms << '\n';
  switch (r.status) {
    case SolveStatus::kSolved:
      return kExitOk;
    case SolveStatus::kTimeout:
      return kExitTimeout;
    default:
      return kExitError;
  }
}

int cmd_validate(const std::string& instance_file, const std::string& solution_file, std::ostream& out) {
  const Instance instance = load_instance(instance_file);
  const Solution solution = load_solution(solution_file);
  ValidationReport report;
  try {
    report = validate(instance, solution);
  } catch (const StructuralError& e) {
    out << "structural: " << e.what() << '\n' << "invalid\n";
    return kExitError;
  }
  for (const Collision& c : report.collisions) out << to_string(c) << '\n';
  for (const GoalGap& g : report.gaps) out << "gap: agent " << g.agent << " never visits " << g.goal << '\n';
  if (report.valid()) out << "valid soc=" << solution.soc << '\n';
  else out << "invalid\n";
  return report.valid() ? kExitOk : kExitError;
}

// Random scenario on a grid: distinct start cells, goals anywhere reachable.
int cmd_gen_scen(const std::string& map_file, int count, std::uint64_t seed, std::ostream& out) {
  const Graph grid = load_map(map_file);
  if (count > grid.vertex_count()) throw Error("more entries than passable cells");
  std::mt19937_64 rng(seed);
  std::vector<Vertex> cells(static_cast<std::size_t>(grid.vertex_count()));
  for (Vertex v = 0; v < grid.vertex_count(); ++v) cells[static_cast<std::size_t>(v)] = v;
  // Fisher-Yates with a portable index draw
  auto below = [&](std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do x = rng();
    while (x >= limit);
    return x % n;
  };
  for (std::size_t i = cells.size(); i > 1; --i) std::swap(cells[i - 1], cells[below(i)]);

  DistanceOracle dist(grid);
  const std::string name = std::filesystem::path(map_file).filename().string();
  std::vector<ScenEntry> entries;
  for (int i = 0; i < count; ++i) {
    const Vertex s = cells[static_cast<std::size_t>(i)];
    Vertex g;
    do g = static_cast<Vertex>(below(static_cast<std::uint64_t>(grid.vertex_count())));
    while (dist.dist(s, g) == kUnreachable);
    const Cell sc = *grid.cell(s), gc = *grid.cell(g);
    entries.push_back({0, name, grid.width(), grid.height(), sc.col, sc.row, gc.col, gc.row,
                       static_cast<double>(dist.dist(s, g))});
  }
  write_scen(out, entries);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-goal multi-agent path finding solvers", "mgmapf"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "solve one instance");
  std::string algo = "hcbs";
  InstanceSource solve_src;
  double timeout = 300.0;
  std::string dump_cnf;
  bool stats = false;
  solve->add_option("--algo", algo, "hcbs, smt or oracle")->check(CLI::IsMember(kAlgoNames));
  solve_src.attach(*solve);
  solve->add_option("--timeout", timeout, "seconds")->check(CLI::PositiveNumber);
  solve->add_option("--dump-cnf", dump_cnf, "directory for DIMACS dumps (smt)");
  solve->add_flag("--stats", stats, "print search counters");

  auto* bench = app.add_subcommand("bench", "success rate and runtime sweep, CSV on stdout");
  BenchConfig config;
  std::string bench_map, bench_scen;
  std::vector<std::string> bench_algos{"hcbs", "smt"};
  std::optional<std::uint64_t> bench_seed;
  bool no_timing = false;
  bench->add_option("--map", bench_map, "movingai map")->required()->check(CLI::ExistingFile);
  bench->add_option("--scen", bench_scen, "movingai scenario")->required()->check(CLI::ExistingFile);
  bench->add_option("--agents", config.agents, "agent counts, comma separated")->required()->delimiter(',')
      ->check(CLI::PositiveNumber);
  bench->add_option("--goals", config.goals, "goals per agent")->check(CLI::PositiveNumber);
  bench->add_option("--instances", config.instances, "instances per agent count")->check(CLI::PositiveNumber);
  bench->add_option("--timeout", config.timeout, "seconds per solve")->check(CLI::PositiveNumber);
  bench->add_option("--algos", bench_algos, "comma separated")->delimiter(',')->check(CLI::IsMember(kAlgoNames));
  bench->add_option("--seed", bench_seed, "seed base (default $MGMAPF_SEED or 0)");
  bench->add_option("--jobs", config.jobs, "parallel solves")->check(CLI::PositiveNumber);
  bench->add_flag("--no-timing", no_timing, "leave the runtime columns empty");

  auto* val = app.add_subcommand("validate", "check a solution against an instance");
  std::string val_instance, val_solution;
  val->add_option("--instance", val_instance)->required()->check(CLI::ExistingFile);
  val->add_option("--solution", val_solution)->required()->check(CLI::ExistingFile);

  auto* gen = app.add_subcommand("generate", "write an instance sampled from a map and scenario");
  InstanceSource gen_src;
  gen_src.attach(*gen);

  auto* gen_scen = app.add_subcommand("gen-scen", "write a random scenario for a map");
  std::string scen_map;
  int scen_count = 100;
  std::uint64_t scen_seed = 0;
  gen_scen->add_option("--map", scen_map)->required()->check(CLI::ExistingFile);
  gen_scen->add_option("--count", scen_count)->check(CLI::PositiveNumber);
  gen_scen->add_option("--seed", scen_seed);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n' << app.help();
    return kExitUsage;
  }

  try {
    if (*solve) return cmd_solve(algo, solve_src, timeout, dump_cnf, stats, out);
    if (*bench) {
      config.map = bench_map;
      config.scen = bench_scen;
      config.algos.clear();
      for (const auto& a : bench_algos) config.algos.push_back(parse_algo(a));
      config.seed = bench_seed ? *bench_seed : default_seed();
      config.timing = !no_timing;
      const auto rows = run_bench(config, load_map(config.map), load_scen(config.scen));
      write_csv(out, rows, config.timing);
      return kExitOk;
    }
    if (*val) return cmd_validate(val_instance, val_solution, out);
    if (*gen) {
      write_instance(out, gen_src.load());
      return kExitOk;
    }
    if (*gen_scen) return cmd_gen_scen(scen_map, scen_count, scen_seed, out);
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n' << app.help();
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitUsage;
}

}  // namespace mgmapf::tools
