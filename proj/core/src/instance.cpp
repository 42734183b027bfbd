#include "mgmapf/instance.hpp"

#include <algorithm>
#include <set>

#include "mgmapf/errors.hpp"

namespace mgmapf {

void Instance::check() const {
  const int k = agent_count();
  if (static_cast<int>(goals.size()) != k) throw InvalidInstance("goal list count differs from agent count");
  if (k > graph.vertex_count()) throw InvalidInstance("more agents than vertices");
  std::set<Vertex> seen;
  for (int i = 0; i < k; ++i) {
    if (!graph.contains(starts[i])) throw InvalidInstance("start of agent " + std::to_string(i) + " is not a vertex");
    if (!seen.insert(starts[i]).second)
      throw InvalidInstance("agents share start vertex " + std::to_string(starts[i]));
    if (goals[i].empty()) throw InvalidInstance("agent " + std::to_string(i) + " has no goals");
    if (!std::is_sorted(goals[i].begin(), goals[i].end()) ||
        std::adjacent_find(goals[i].begin(), goals[i].end()) != goals[i].end())
      throw InvalidInstance("goal set of agent " + std::to_string(i) + " is not sorted and unique");
    for (Vertex g : goals[i])
      if (!graph.contains(g)) throw InvalidInstance("goal " + std::to_string(g) + " is not a vertex");
  }
}

Instance make_instance(Graph graph, std::vector<Vertex> starts, std::vector<std::vector<Vertex>> goals) {
  Instance inst;
  inst.graph = std::move(graph);
  inst.starts = std::move(starts);
  for (auto& g : goals) {
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    inst.goals_per_agent = std::max(inst.goals_per_agent, static_cast<int>(g.size()));
  }
  inst.goals = std::move(goals);
  inst.check();
  return inst;
}

Timestep agent_cost(std::span<const Vertex> path, std::span<const Vertex> goals) {
  Timestep cost = 0;
  for (Vertex g : goals) {
    auto it = path.size() > 1 ? std::find(path.begin() + 1, path.end(), g) : path.end();
    if (it == path.end()) throw IncompletePlan("goal " + std::to_string(g) + " is never visited at t >= 1");
    cost = std::max(cost, static_cast<Timestep>(it - path.begin()));
  }
  return cost;
}

std::int64_t sum_of_costs(const Solution& solution) {
  std::int64_t soc = 0;
  for (const auto& p : solution.plans) soc += p.completion_time;
  return soc;
}

Timestep makespan(const Solution& solution) {
  Timestep m = 0;
  for (const auto& p : solution.plans) m = std::max(m, p.length());
  return m;
}

Solution make_solution(const Instance& instance, std::vector<Path> paths) {
  if (static_cast<int>(paths.size()) != instance.agent_count()) throw Error("path count differs from agent count");
  Solution s;
  s.plans.reserve(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    Plan p;
    p.completion_time = agent_cost(paths[i], instance.goals[i]);
    p.path = std::move(paths[i]);
    s.plans.push_back(std::move(p));
  }
  s.soc = sum_of_costs(s);
  s.makespan = makespan(s);
  return s;
}

}  // namespace mgmapf
