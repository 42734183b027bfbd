#include "mgmapf/mdd.hpp"

#include <algorithm>
#include <ostream>

#include "mgmapf/errors.hpp"

namespace mgmapf {

std::size_t Mdd::slot(Vertex v, Timestep t) const {
  if (t < 0 || t > horizon()) return static_cast<std::size_t>(-1);
  const auto& lvl = levels_[static_cast<std::size_t>(t)];
  auto it = std::lower_bound(lvl.begin(), lvl.end(), v);
  if (it == lvl.end() || *it != v) return static_cast<std::size_t>(-1);
  return static_cast<std::size_t>(it - lvl.begin());
}

bool Mdd::contains(Vertex v, Timestep t) const { return slot(v, t) != static_cast<std::size_t>(-1); }

std::span<const Vertex> Mdd::successors(Vertex v, Timestep t) const {
  auto s = slot(v, t);
  if (s == static_cast<std::size_t>(-1) || t >= horizon()) return {};
  return out_[static_cast<std::size_t>(t)][s];
}

bool Mdd::has_edge(Vertex u, Vertex v, Timestep t) const {
  auto succ = successors(u, t);
  return std::binary_search(succ.begin(), succ.end(), v);
}

std::size_t Mdd::node_count() const {
  std::size_t n = 0;
  for (const auto& l : levels_) n += l.size();
  return n;
}

std::size_t Mdd::edge_count() const {
  std::size_t n = 0;
  for (const auto& lvl : out_)
    for (const auto& succ : lvl) n += succ.size();
  return n;
}

Mdd build_mdd(const Instance& instance, int agent, Timestep horizon, DistanceOracle& distances) {
  if (horizon < 0) throw Error("negative MDD horizon");
  const Graph& graph = instance.graph;
  const Vertex start = instance.starts.at(static_cast<std::size_t>(agent));
  const auto& goals = instance.goals[static_cast<std::size_t>(agent)];
  const auto from_start = distances.table(start);
  for (Vertex g : goals)
    if (from_start[static_cast<std::size_t>(g)] == kUnreachable)
      throw InfeasibleAgent("goal " + std::to_string(g) + " of agent " + std::to_string(agent) + " is unreachable");

  // the covering-walk test does not depend on t, evaluate it once per vertex
  std::vector<bool> fits(static_cast<std::size_t>(graph.vertex_count()), false);
  std::vector<Vertex> terminals(goals.begin(), goals.end());
  terminals.push_back(kNoVertex);
  for (Vertex v = 0; v < graph.vertex_count(); ++v) {
    if (from_start[static_cast<std::size_t>(v)] == kUnreachable) continue;
    terminals.back() = v;
    fits[static_cast<std::size_t>(v)] = mst_lower_bound(distances, start, terminals) <= horizon;
  }

  const auto levels = static_cast<std::size_t>(horizon) + 1;
  std::vector<std::vector<Vertex>> cand(levels);
  for (std::size_t t = 0; t < levels; ++t)
    for (Vertex v = 0; v < graph.vertex_count(); ++v)
      if (fits[static_cast<std::size_t>(v)] && from_start[static_cast<std::size_t>(v)] <= static_cast<int>(t))
        cand[t].push_back(v);
  auto present = [](const std::vector<Vertex>& lvl, Vertex v) { return std::binary_search(lvl.begin(), lvl.end(), v); };

  // backward: drop nodes with no continuation to the last level
  for (std::size_t t = levels - 1; t-- > 0;) {
    std::vector<Vertex> kept;
    for (Vertex u : cand[t]) {
      bool alive = present(cand[t + 1], u);
      for (Vertex w : graph.neighbors(u)) alive = alive || present(cand[t + 1], w);
      if (alive) kept.push_back(u);
    }
    cand[t] = std::move(kept);
  }

  // forward: keep what the start node reaches
  Mdd mdd;
  mdd.levels_.resize(levels);
  mdd.out_.resize(levels - 1);
  if (present(cand[0], start)) mdd.levels_[0] = {start};
  for (std::size_t t = 0; t + 1 < levels; ++t) {
    std::vector<Vertex> reached;
    for (Vertex u : mdd.levels_[t]) {
      std::vector<Vertex> succ;
      if (present(cand[t + 1], u)) succ.push_back(u);
      for (Vertex w : graph.neighbors(u))
        if (present(cand[t + 1], w)) succ.push_back(w);
      std::sort(succ.begin(), succ.end());
      reached.insert(reached.end(), succ.begin(), succ.end());
      mdd.out_[t].push_back(std::move(succ));
    }
    std::sort(reached.begin(), reached.end());
    reached.erase(std::unique(reached.begin(), reached.end()), reached.end());
    mdd.levels_[t + 1] = std::move(reached);
  }
  return mdd;
}

void dump_mdd(std::ostream& out, const Mdd& mdd) {
  for (Timestep t = 0; t <= mdd.horizon(); ++t) {
    out << t << ':';
    for (Vertex v : mdd.level(t)) out << ' ' << v;
    out << '\n';
  }
}

}  // namespace mgmapf
