#include "mgmapf_tools/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <thread>

#include "mgmapf/errors.hpp"
#include "mgmapf/hcbs.hpp"
#include "mgmapf/oracle.hpp"
#include "mgmapf/smt_hcbs.hpp"

namespace mgmapf::tools {

std::string to_string(Algo a) {
  switch (a) {
    case Algo::kHcbs:
      return "hcbs";
    case Algo::kSmt:
      return "smt";
    case Algo::kOracle:
      return "oracle";
  }
  return "?";
}

Algo parse_algo(const std::string& name) {
  if (name == "hcbs") return Algo::kHcbs;
  if (name == "smt") return Algo::kSmt;
  if (name == "oracle") return Algo::kOracle;
  throw Error("unknown algorithm '" + name + "'");
}

SolveResult run_algo(Algo algo, const Instance& instance, double timeout_seconds,
                     const std::optional<std::filesystem::path>& dump_dir) {
  const Deadline deadline = Deadline::after_seconds(timeout_seconds);
  const auto t0 = std::chrono::steady_clock::now();
  SolveResult r;
  switch (algo) {
    case Algo::kHcbs: {
      SolveOptions opt;
      opt.deadline = deadline;
      r = solve_hcbs(instance, opt);
      break;
    }
    case Algo::kSmt: {
      SmtOptions opt;
      opt.solve.deadline = deadline;
      opt.dump_dir = dump_dir;
      r = solve_smt_hcbs(instance, opt);
      break;
    }
    case Algo::kOracle: {
      OracleOptions opt;
      opt.deadline = deadline;
      r = solve_optimal(instance, opt);
      break;
    }
  }
  r.stats.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  // a solve that ran past the limit counts as a failure
  if (r.solved() && r.stats.wall_ms > timeout_seconds * 1000.0) {
    r.status = SolveStatus::kTimeout;
    r.solution.reset();
  }
  return r;
}

void BenchConfig::check() const {
  if (agents.empty()) throw Error("agent sweep is empty");
  if (std::any_of(agents.begin(), agents.end(), [](int k) { return k < 1; })) throw Error("agent counts must be >= 1");
  if (goals < 1) throw Error("goals per agent must be >= 1");
  if (instances < 1) throw Error("instances per point must be >= 1");
  if (!(timeout > 0)) throw Error("timeout must be positive");
  if (algos.empty()) throw Error("no algorithms selected");
  if (jobs < 1) throw Error("jobs must be >= 1");
}

std::uint64_t instance_seed(std::uint64_t base, int agents, int index) {
  return base + 1'000'003ULL * static_cast<std::uint64_t>(agents) + static_cast<std::uint64_t>(index);
}

std::vector<BenchRow> run_bench(const BenchConfig& config, const Graph& grid, const std::vector<ScenEntry>& scen) {
  config.check();

  struct Job {
    std::size_t row;
    const Instance* instance;
  };
  std::vector<Instance> instances;
  instances.reserve(config.agents.size() * static_cast<std::size_t>(config.instances));
  for (int k : config.agents)
    for (int i = 0; i < config.instances; ++i)
      instances.push_back(generate_instance(grid, scen, k, config.goals, instance_seed(config.seed, k, i)));

  std::vector<BenchRow> rows;
  std::vector<Job> jobs;
  std::size_t next_instance = 0;
  for (int k : config.agents) {
    for (Algo a : config.algos) {
      rows.push_back({a, k, config.goals, config.instances, 0, {}, {}});
      for (int i = 0; i < config.instances; ++i)
        jobs.push_back({rows.size() - 1, &instances[next_instance + static_cast<std::size_t>(i)]});
    }
    next_instance += static_cast<std::size_t>(config.instances);
  }

  std::vector<SolveResult> results(jobs.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (std::size_t j; (j = cursor.fetch_add(1)) < jobs.size();)
      results[j] = run_algo(rows[jobs[j].row].algo, *jobs[j].instance, config.timeout);
  };
  const int threads = std::min<int>(config.jobs, static_cast<int>(jobs.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t j = 0; j < jobs.size(); ++j) {
    if (!results[j].solved()) continue;
    BenchRow& row = rows[jobs[j].row];
    ++row.solved;
    row.ms.push_back(results[j].stats.wall_ms);
    row.socs.push_back(results[j].solution->soc);
  }
  return rows;
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows, bool timing) {
  out << "algo,agents,goals,attempted,solved,success_rate,mean_ms,median_ms,mean_soc\n";
  const auto flags = out.flags();
  out << std::fixed << std::setprecision(3);
  for (const BenchRow& r : rows) {
    out << to_string(r.algo) << ',' << r.agents << ',' << r.goals << ',' << r.attempted << ',' << r.solved << ','
        << static_cast<double>(r.solved) / r.attempted << ',';
    if (timing && r.solved > 0)
      out << std::accumulate(r.ms.begin(), r.ms.end(), 0.0) / r.solved << ',' << median(r.ms) << ',';
    else
      out << ",,";
    if (r.solved > 0)
      out << static_cast<double>(std::accumulate(r.socs.begin(), r.socs.end(), std::int64_t{0})) / r.solved;
    out << '\n';
  }
  out.flags(flags);
}

}  // namespace mgmapf::tools
