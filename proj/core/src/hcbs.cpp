#include "mgmapf/hcbs.hpp"

#include <algorithm>
#include <cassert>
#include <memory>
#include <unordered_map>

#include "mgmapf/errors.hpp"

namespace mgmapf {
namespace {

std::uint64_t pack_vt(Vertex v, Timestep t) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)) << 32) | static_cast<std::uint32_t>(t);
}

std::uint64_t pack_edge(Vertex u, Vertex v, Timestep t) {
  constexpr std::uint64_t kMask = (1ull << 21) - 1;
  return ((static_cast<std::uint64_t>(u) & kMask) << 42) | ((static_cast<std::uint64_t>(v) & kMask) << 21) |
         (static_cast<std::uint64_t>(t) & kMask);
}

}  // namespace

AgentConstraints::AgentConstraints(std::span<const Constraint> constraints, int agent) {
  for (const auto& c : constraints) {
    if (c.agent != agent) continue;
    if (c.kind == ConflictKind::kVertex) {
      vertex_.insert(pack_vt(c.v, c.time));
      latest_ = std::max(latest_, c.time);
    } else {
      edge_.insert(pack_edge(c.u, c.v, c.time));
      latest_ = std::max(latest_, c.time + 1);
    }
  }
}

bool AgentConstraints::vertex_blocked(Vertex v, Timestep t) const {
  return !vertex_.empty() && vertex_.contains(pack_vt(v, t));
}

bool AgentConstraints::edge_blocked(Vertex u, Vertex v, Timestep t) const {
  return !edge_.empty() && edge_.contains(pack_edge(u, v, t));
}

SegmentSearch::SegmentSearch(const Graph& graph, DistanceOracle& distances, const AgentConstraints& constraints,
                             Vertex from, Timestep from_time, Vertex to, std::optional<Timestep> horizon)
    : graph_(&graph),
      constraints_(&constraints),
      to_dist_(distances.table(to)),
      to_(to),
      from_time_(from_time),
      horizon_(horizon.value_or(std::max(from_time, constraints.latest()) + graph.vertex_count() + 1)) {
  if (to_dist_[static_cast<std::size_t>(from)] == kUnreachable || constraints.vertex_blocked(from, from_time)) {
    done_ = true;
    return;
  }
  push(from, from_time, -1);
}

void SegmentSearch::push(Vertex v, Timestep t, std::int32_t parent) {
  const int h = to_dist_[static_cast<std::size_t>(v)];
  if (t + h > horizon_) return;
  if (!seen_.insert(pack_vt(v, t)).second) return;
  nodes_.push_back({v, t, parent});
  open_.push({t + h, h, seq_++, static_cast<std::int32_t>(nodes_.size() - 1)});
}

std::optional<Segment> SegmentSearch::next() {
  while (!done_ && !open_.empty()) {
    const Entry e = open_.top();
    open_.pop();
    const Node n = nodes_[static_cast<std::size_t>(e.node)];
    ++expansions_;

    if (n.t < horizon_) {
      if (constraints_->move_allowed(n.v, n.v, n.t)) push(n.v, n.t + 1, e.node);
      for (Vertex w : graph_->neighbors(n.v))
        if (constraints_->move_allowed(n.v, w, n.t)) push(w, n.t + 1, e.node);
    }

    if (n.v == to_ && n.t > from_time_ && n.t > last_arrival_) {
      last_arrival_ = n.t;
      if (n.t >= constraints_->latest() + 1) done_ = true;
      Segment seg;
      seg.arrival = n.t;
      seg.path.resize(static_cast<std::size_t>(n.t - from_time_) + 1);
      for (std::int32_t i = e.node; i >= 0; i = nodes_[static_cast<std::size_t>(i)].parent) {
        const Node& p = nodes_[static_cast<std::size_t>(i)];
        seg.path[static_cast<std::size_t>(p.t - from_time_)] = p.v;
      }
      return seg;
    }
  }
  done_ = true;
  return std::nullopt;
}

std::vector<Segment> segment_search(const Graph& graph, DistanceOracle& distances, const AgentConstraints& constraints,
                                    Vertex from, Timestep from_time, Vertex to, std::optional<Timestep> horizon) {
  SegmentSearch search(graph, distances, constraints, from, from_time, to, horizon);
  std::vector<Segment> out;
  while (auto seg = search.next()) out.push_back(std::move(*seg));
  return out;
}

namespace {

// Moves from (v, t) that keep the agent clear of every constraint up to
// latest(); empty when nothing is needed, nullopt when impossible.
std::optional<Path> safe_extension(const Graph& graph, const AgentConstraints& constraints, Vertex v, Timestep t) {
  const Timestep end = constraints.latest();
  if (t >= end) return Path{};
  const auto n = static_cast<std::size_t>(graph.vertex_count());
  const auto span = static_cast<std::size_t>(end - t);
  // parent[k][w]: predecessor of w at time t + k + 1
  std::vector<std::vector<Vertex>> parent(span, std::vector<Vertex>(n, kNoVertex));
  std::vector<Vertex> layer{v};
  for (std::size_t k = 0; k < span && !layer.empty(); ++k) {
    const Timestep now = t + static_cast<Timestep>(k);
    std::vector<Vertex> next;
    auto visit = [&](Vertex from, Vertex to) {
      if (parent[k][to] != kNoVertex || !constraints.move_allowed(from, to, now)) return;
      parent[k][to] = from;
      next.push_back(to);
    };
    for (Vertex u : layer) {
      visit(u, u);
      for (Vertex w : graph.neighbors(u)) visit(u, w);
    }
    layer = std::move(next);
  }
  if (layer.empty()) return std::nullopt;

  Vertex last = parent[span - 1][v] != kNoVertex ? v : *std::min_element(layer.begin(), layer.end());
  Path out(span);
  for (std::size_t k = span; k-- > 0;) {
    out[k] = last;
    last = parent[k][last];
  }
  return out;
}

struct OrderKey {
  Vertex v;
  Timestep t;
  std::uint64_t mask;
  bool operator==(const OrderKey&) const = default;
};

struct OrderKeyHash {
  std::size_t operator()(const OrderKey& k) const {
    std::uint64_t h = pack_vt(k.v, k.t) * 0x9E3779B97F4A7C15ull;
    return static_cast<std::size_t>(h ^ (k.mask + 0x7F4A7C159E3779B9ull + (h << 6) + (h >> 2)));
  }
};

}  // namespace

std::optional<Plan> plan_agent(const Instance& instance, int agent, std::span<const Constraint> constraints,
                               DistanceOracle& distances, PlannerCounters* counters, DeadlineProbe* probe) {
  const Graph& graph = instance.graph;
  const auto& goals = instance.goals.at(static_cast<std::size_t>(agent));
  const int m = static_cast<int>(goals.size());
  if (m > 40) throw Error("at most 40 goals per agent are supported");
  const std::uint64_t full = (1ull << m) - 1;
  const AgentConstraints cons(constraints, agent);

  std::unordered_map<Vertex, int> goal_bit;
  for (int i = 0; i < m; ++i) goal_bit[goals[i]] = i;

  std::unordered_map<std::uint64_t, int> h_cache;
  std::vector<Vertex> remaining;
  auto heuristic = [&](Vertex v, std::uint64_t mask) {
    const std::uint64_t key = (static_cast<std::uint64_t>(v) << 40) | mask;
    auto it = h_cache.find(key);
    if (it != h_cache.end()) return it->second;
    remaining.clear();
    for (int i = 0; i < m; ++i)
      if (!(mask >> i & 1)) remaining.push_back(goals[i]);
    const int h = mst_lower_bound(distances, v, remaining);
    h_cache.emplace(key, h);
    return h;
  };

  struct Node {
    Vertex v;
    Timestep t;
    std::uint64_t mask;
    std::int32_t parent;
    Path segment;  // positions at t_parent + 1 .. t
  };
  struct Entry {
    int f;
    int h;
    std::int64_t seq;
    std::int32_t node;
    bool operator>(const Entry& o) const {
      if (f != o.f) return f > o.f;
      if (h != o.h) return h > o.h;
      return seq > o.seq;
    }
  };

  std::vector<Node> nodes;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::unordered_set<OrderKey, OrderKeyHash> seen;
  std::int64_t seq = 0;

  auto push = [&](Node node) {
    if (!seen.insert({node.v, node.t, node.mask}).second) return;
    const int h = heuristic(node.v, node.mask);
    nodes.push_back(std::move(node));
    const Node& n = nodes.back();
    open.push({n.t + h, h, seq++, static_cast<std::int32_t>(nodes.size() - 1)});
    if (counters) ++counters->ordering_generated;
  };

  const Vertex start = instance.starts.at(static_cast<std::size_t>(agent));
  push({start, 0, 0, -1, {}});

  while (!open.empty()) {
    if (probe && probe->expired()) throw SearchTimeout{};
    const Entry e = open.top();
    open.pop();
    if (counters) ++counters->ordering_expansions;
    const Node cur = nodes[static_cast<std::size_t>(e.node)];

    if (cur.mask == full) {
      auto ext = safe_extension(graph, cons, cur.v, cur.t);
      if (!ext) continue;
      Path path(static_cast<std::size_t>(cur.t) + 1);
      for (std::int32_t i = e.node; i >= 0; i = nodes[static_cast<std::size_t>(i)].parent) {
        const Node& n = nodes[static_cast<std::size_t>(i)];
        for (std::size_t k = 0; k < n.segment.size(); ++k)
          path[static_cast<std::size_t>(n.t) - n.segment.size() + 1 + k] = n.segment[k];
      }
      path[0] = start;
      path.insert(path.end(), ext->begin(), ext->end());
      Plan plan;
      plan.completion_time = agent_cost(path, goals);
      assert(plan.completion_time == cur.t);
      while (static_cast<Timestep>(path.size()) - 1 > plan.completion_time && path.back() == path[path.size() - 2])
        path.pop_back();
      plan.path = std::move(path);
      return plan;
    }

    for (int i = 0; i < m; ++i) {
      if (cur.mask >> i & 1) continue;
      SegmentSearch search(graph, distances, cons, cur.v, cur.t, goals[i]);
      while (auto seg = search.next()) {
        std::uint64_t mask = cur.mask;
        for (std::size_t k = 1; k < seg->path.size(); ++k) {
          auto it = goal_bit.find(seg->path[k]);
          if (it != goal_bit.end()) mask |= 1ull << it->second;
        }
        Path tail(seg->path.begin() + 1, seg->path.end());
        push({goals[i], seg->arrival, mask, e.node, std::move(tail)});
      }
      if (counters) counters->segment_expansions += search.expansions();
    }
  }
  return std::nullopt;
}

SolveResult solve_hcbs(const Instance& instance, const SolveOptions& options) {
  const auto started = Deadline::Clock::now();
  SolveResult result;
  DistanceOracle distances(instance.graph);
  DeadlineProbe probe(options.deadline, 64);
  PlannerCounters pc;
  const int k = instance.agent_count();

  struct CtNode {
    std::vector<Constraint> constraints;
    std::vector<std::shared_ptr<const Plan>> plans;
    std::int64_t soc = 0;
  };
  struct Entry {
    std::int64_t soc;
    std::size_t constraints;
    std::int64_t seq;
    std::size_t node;
    bool operator>(const Entry& o) const {
      if (soc != o.soc) return soc > o.soc;
      if (constraints != o.constraints) return constraints > o.constraints;
      return seq > o.seq;
    }
  };

  std::vector<std::unique_ptr<CtNode>> nodes;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::int64_t seq = 0;
  auto within_cap = [&](std::int64_t soc) { return !options.cost_cap || soc <= *options.cost_cap; };
  auto push = [&](std::unique_ptr<CtNode> node) {
    result.stats.add("ct_generated");
    open.push({node->soc, node->constraints.size(), seq++, nodes.size()});
    nodes.push_back(std::move(node));
  };

  result.status = SolveStatus::kNoSolutionWithinCap;
  try {
    auto root = std::make_unique<CtNode>();
    bool feasible = true;
    for (int a = 0; a < k && feasible; ++a) {
      result.stats.add("low_level_calls");
      auto plan = plan_agent(instance, a, {}, distances, &pc, &probe);
      if (!plan) {
        feasible = false;
        break;
      }
      root->soc += plan->completion_time;
      root->plans.push_back(std::make_shared<const Plan>(std::move(*plan)));
    }
    if (feasible && within_cap(root->soc)) push(std::move(root));

    [[maybe_unused]] std::int64_t last_key = 0;
    while (!open.empty()) {
      if (options.deadline.expired()) throw SearchTimeout{};
      const Entry e = open.top();
      open.pop();
      assert(e.soc >= last_key);
      last_key = e.soc;
      std::unique_ptr<CtNode> node = std::move(nodes[e.node]);
      result.stats.add("ct_expanded");

      std::vector<Path> paths;
      paths.reserve(static_cast<std::size_t>(k));
      for (const auto& p : node->plans) paths.push_back(p->path);
      const auto collisions = find_collisions(paths);
      if (collisions.empty()) {
        Solution s;
        for (const auto& p : node->plans) s.plans.push_back(*p);
        s.soc = sum_of_costs(s);
        s.makespan = makespan(s);
        result.solution = std::move(s);
        result.status = SolveStatus::kSolved;
        break;
      }

      const Collision& c = collisions.front();
      for (int side = 0; side < 2; ++side) {
        const int a = side == 0 ? c.first : c.second;
        Constraint added = c.kind == ConflictKind::kVertex ? Constraint::vertex(a, c.v, c.time)
                           : side == 0                     ? Constraint::edge(a, c.u, c.v, c.time)
                                                           : Constraint::edge(a, c.v, c.u, c.time);
        auto child = std::make_unique<CtNode>();
        child->constraints = node->constraints;
        child->constraints.push_back(added);
        result.stats.add("low_level_calls");
        auto plan = plan_agent(instance, a, child->constraints, distances, &pc, &probe);
        if (!plan) continue;
        child->plans = node->plans;
        child->soc = node->soc - child->plans[a]->completion_time + plan->completion_time;
        child->plans[a] = std::make_shared<const Plan>(std::move(*plan));
        if (within_cap(child->soc)) push(std::move(child));
      }
    }
  } catch (const SearchTimeout&) {
    result.status = SolveStatus::kTimeout;
  }

  result.stats.add("ordering_expansions", pc.ordering_expansions);
  result.stats.add("ordering_generated", pc.ordering_generated);
  result.stats.add("segment_expansions", pc.segment_expansions);
  result.stats.wall_ms = std::chrono::duration<double, std::milli>(Deadline::Clock::now() - started).count();
  return result;
}

}  // namespace mgmapf
