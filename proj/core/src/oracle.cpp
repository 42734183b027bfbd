#include "mgmapf/oracle.hpp"

#include <bit>
#include <unordered_map>
#include <vector>

#include "mgmapf/errors.hpp"

namespace mgmapf {
namespace {

struct Layout {
  int pos_bits = 0;
  std::vector<int> offset;  // per agent, position field; mask follows
  std::vector<int> goal_count;

  Layout(const Instance& inst) {
    pos_bits = std::max(1, static_cast<int>(std::bit_width(static_cast<unsigned>(inst.graph.vertex_count() - 1))));
    int bits = 0;
    for (int a = 0; a < inst.agent_count(); ++a) {
      offset.push_back(bits);
      goal_count.push_back(static_cast<int>(inst.goals[static_cast<std::size_t>(a)].size()));
      bits += pos_bits + goal_count.back();
    }
    if (bits > 64) throw Error("joint state needs " + std::to_string(bits) + " bits; oracle supports 64");
  }

  Vertex pos(std::uint64_t s, int a) const {
    return static_cast<Vertex>((s >> offset[a]) & ((1ull << pos_bits) - 1));
  }
  std::uint64_t mask(std::uint64_t s, int a) const {
    return (s >> (offset[a] + pos_bits)) & ((1ull << goal_count[a]) - 1);
  }
  std::uint64_t full(int a) const { return (1ull << goal_count[a]) - 1; }
  std::uint64_t field(int a, Vertex v, std::uint64_t m) const {
    return (static_cast<std::uint64_t>(v) | (m << pos_bits)) << offset[a];
  }
};

}  // namespace

SolveResult solve_optimal(const Instance& instance, const OracleOptions& options) {
  const auto started = Deadline::Clock::now();
  SolveResult result;
  result.status = SolveStatus::kNoSolutionWithinCap;
  const int k = instance.agent_count();
  const Graph& graph = instance.graph;
  const Layout layout(instance);

  // goal bit of vertex v for agent a, or -1
  std::vector<std::vector<int>> goal_bit(static_cast<std::size_t>(k),
                                         std::vector<int>(static_cast<std::size_t>(graph.vertex_count()), -1));
  for (int a = 0; a < k; ++a)
    for (std::size_t i = 0; i < instance.goals[a].size(); ++i) goal_bit[a][instance.goals[a][i]] = static_cast<int>(i);

  struct Info {
    std::int64_t g;
    std::uint64_t parent;
    bool closed;
  };
  std::unordered_map<std::uint64_t, Info> info;
  std::vector<std::vector<std::uint64_t>> buckets;
  auto push = [&](std::uint64_t s, std::int64_t g, std::uint64_t parent) {
    auto [it, fresh] = info.try_emplace(s, Info{g, parent, false});
    if (!fresh) {
      if (it->second.closed || it->second.g <= g) return;
      it->second.g = g;
      it->second.parent = parent;
    }
    if (buckets.size() <= static_cast<std::size_t>(g)) buckets.resize(static_cast<std::size_t>(g) + 1);
    buckets[static_cast<std::size_t>(g)].push_back(s);
  };

  std::uint64_t root = 0;
  for (int a = 0; a < k; ++a) root |= layout.field(a, instance.starts[a], 0);
  push(root, 0, root);

  DeadlineProbe probe(options.deadline, 1024);
  std::vector<Vertex> cur(static_cast<std::size_t>(k)), next(static_cast<std::size_t>(k));
  std::vector<std::uint64_t> masks(static_cast<std::size_t>(k));
  std::int64_t settled = 0;
  std::optional<std::uint64_t> goal;
  bool stopped = false;

  for (std::size_t g = 0; g < buckets.size() && !goal && !stopped; ++g) {
    if (options.soc_cap && static_cast<std::int64_t>(g) > *options.soc_cap) break;
    for (std::size_t bi = 0; bi < buckets[g].size(); ++bi) {
      const std::uint64_t s = buckets[g][bi];
      Info& in = info.at(s);
      if (in.closed || in.g != static_cast<std::int64_t>(g)) continue;
      in.closed = true;
      if (++settled > static_cast<std::int64_t>(options.state_limit)) {
        result.status = SolveStatus::kStateLimit;
        stopped = true;
        break;
      }
      if (probe.expired()) {
        result.status = SolveStatus::kTimeout;
        stopped = true;
        break;
      }

      int unfinished = 0;
      for (int a = 0; a < k; ++a) {
        cur[a] = layout.pos(s, a);
        masks[a] = layout.mask(s, a);
        if (masks[a] != layout.full(a)) ++unfinished;
      }
      if (unfinished == 0) {
        goal = s;
        break;
      }

      // all collision-free joint moves, agent by agent
      auto expand = [&](auto&& self, int a, std::uint64_t acc) -> void {
        if (a == k) {
          push(acc, static_cast<std::int64_t>(g) + unfinished, s);
          return;
        }
        auto try_move = [&](Vertex to) {
          for (int b = 0; b < a; ++b)
            if (next[b] == to || (next[b] == cur[a] && cur[b] == to)) return;
          next[a] = to;
          std::uint64_t m = masks[a];
          if (int bit = goal_bit[a][to]; bit >= 0) m |= 1ull << bit;
          self(self, a + 1, acc | layout.field(a, to, m));
        };
        try_move(cur[a]);
        for (Vertex w : graph.neighbors(cur[a])) try_move(w);
      };
      expand(expand, 0, 0);
    }
  }

  if (goal) {
    std::vector<std::uint64_t> chain;
    for (std::uint64_t s = *goal;; s = info.at(s).parent) {
      chain.push_back(s);
      if (s == root) break;
    }
    std::vector<Path> paths(static_cast<std::size_t>(k));
    for (auto it = chain.rbegin(); it != chain.rend(); ++it)
      for (int a = 0; a < k; ++a) paths[a].push_back(layout.pos(*it, a));
    Solution sol = make_solution(instance, std::move(paths));
    if (sol.soc != info.at(*goal).g) throw Error("internal error: oracle step costs disagree with plan costs");
    result.solution = std::move(sol);
    result.status = SolveStatus::kSolved;
  }

  result.stats.add("settled_states", settled);
  result.stats.add("generated_states", static_cast<std::int64_t>(info.size()));
  result.stats.wall_ms = std::chrono::duration<double, std::milli>(Deadline::Clock::now() - started).count();
  return result;
}

}  // namespace mgmapf
