#include "mgmapf/validate.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "mgmapf/errors.hpp"

namespace mgmapf {

void check_structure(const Instance& instance, std::span<const Path> paths) {
  if (static_cast<int>(paths.size()) != instance.agent_count())
    throw StructuralError(static_cast<int>(paths.size()), 0, "plan count differs from agent count");
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const auto& path = paths[i];
    const int agent = static_cast<int>(i);
    if (path.empty() || path[0] != instance.starts[i]) throw StructuralError(agent, 0, "plan does not begin at start");
    for (std::size_t t = 1; t < path.size(); ++t) {
      if (!instance.graph.contains(path[t]))
        throw StructuralError(agent, static_cast<int>(t), "unknown vertex " + std::to_string(path[t]));
      if (!instance.graph.valid_move(path[t - 1], path[t]))
        throw StructuralError(agent, static_cast<int>(t),
                              "invalid move " + std::to_string(path[t - 1]) + " -> " + std::to_string(path[t]));
    }
  }
}

std::vector<Collision> find_collisions(std::span<const Path> paths) {
  std::vector<Collision> out;
  const int k = static_cast<int>(paths.size());
  Timestep horizon = 0;
  for (const auto& p : paths) horizon = std::max(horizon, static_cast<Timestep>(p.size()) - 1);

  std::unordered_map<Vertex, std::vector<int>> occupants;
  for (Timestep t = 0; t <= horizon; ++t) {
    occupants.clear();
    for (int i = 0; i < k; ++i) occupants[position_at(paths[i], t)].push_back(i);
    for (const auto& [v, agents] : occupants)
      for (std::size_t x = 0; x < agents.size(); ++x)
        for (std::size_t y = x + 1; y < agents.size(); ++y)
          out.push_back({t, agents[x], agents[y], ConflictKind::kVertex, kNoVertex, v});

    if (t == horizon) break;
    // an agent moving u -> v swaps with whoever sits at v at t and u at t+1
    for (int i = 0; i < k; ++i) {
      Vertex u = position_at(paths[i], t), v = position_at(paths[i], t + 1);
      if (u == v) continue;
      auto it = occupants.find(v);
      if (it == occupants.end()) continue;
      for (int j : it->second)
        if (j > i && position_at(paths[j], t + 1) == u)
          out.push_back({t, i, j, ConflictKind::kEdge, u, v});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

ValidationReport validate(const Instance& instance, const Solution& solution) {
  std::vector<Path> paths;
  paths.reserve(solution.plans.size());
  for (const auto& p : solution.plans) paths.push_back(p.path);
  check_structure(instance, paths);

  ValidationReport report;
  report.collisions = find_collisions(paths);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const auto& path = paths[i];
    auto end = static_cast<std::size_t>(std::max<Timestep>(0, solution.plans[i].completion_time)) + 1;
    end = std::min(end, path.size());
    for (Vertex g : instance.goals[i])
      if (end <= 1 || std::find(path.begin() + 1, path.begin() + static_cast<std::ptrdiff_t>(end), g) ==
                          path.begin() + static_cast<std::ptrdiff_t>(end))
        report.gaps.push_back({static_cast<int>(i), g});
  }
  return report;
}

std::string to_string(const Collision& c) {
  std::ostringstream os;
  if (c.kind == ConflictKind::kVertex)
    os << "vertex collision agents " << c.first << "," << c.second << " at v" << c.v << " t=" << c.time;
  else
    os << "edge collision agents " << c.first << "," << c.second << " on v" << c.u << "-v" << c.v << " t=" << c.time;
  return os.str();
}

std::string to_string(const Constraint& c) {
  std::ostringstream os;
  if (c.kind == ConflictKind::kVertex)
    os << "(a" << c.agent << ", v" << c.v << ", " << c.time << ")";
  else
    os << "(a" << c.agent << ", v" << c.u << "->v" << c.v << ", " << c.time << ")";
  return os.str();
}

}  // namespace mgmapf
