#include "mgmapf/smt_hcbs.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "mgmapf/errors.hpp"
#include "mgmapf/hcbs.hpp"

namespace mgmapf {
namespace {

using sat::Lit;

std::uint64_t key_vt(Vertex v, Timestep t) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)) << 32) | static_cast<std::uint32_t>(t);
}

std::uint64_t key_edge(Vertex u, Vertex v, Timestep t) {
  constexpr std::uint64_t kMask = (1ull << 21) - 1;
  return ((static_cast<std::uint64_t>(u) & kMask) << 42) | ((static_cast<std::uint64_t>(v) & kMask) << 21) |
         (static_cast<std::uint64_t>(t) & kMask);
}

int lookup(const std::unordered_map<std::uint64_t, int>& m, std::uint64_t key) {
  auto it = m.find(key);
  return it == m.end() ? 0 : it->second;
}

}  // namespace

int VarMap::x(int agent, Vertex v, Timestep t) const { return lookup(x_.at(static_cast<std::size_t>(agent)), key_vt(v, t)); }

int VarMap::e(int agent, Vertex u, Vertex v, Timestep t) const {
  return lookup(e_.at(static_cast<std::size_t>(agent)), key_edge(u, v, t));
}

int VarMap::visited(int agent, int goal_index, Timestep t) const {
  return visited_.at(static_cast<std::size_t>(agent)).at(static_cast<std::size_t>(goal_index)).at(static_cast<std::size_t>(t));
}

int VarMap::done(int agent, Timestep t) const {
  return done_.at(static_cast<std::size_t>(agent)).at(static_cast<std::size_t>(t));
}

SmtHcbs::SmtHcbs(const Instance& instance, SmtOptions options)
    : instance_(&instance), options_(std::move(options)), distances_(instance.graph) {}

const std::vector<Timestep>& SmtHcbs::lower_bounds() {
  if (!lower_bounds_) {
    std::vector<Timestep> lb;
    DeadlineProbe probe(options_.solve.deadline, 64);
    for (int a = 0; a < instance_->agent_count(); ++a) {
      auto plan = plan_agent(*instance_, a, {}, distances_, nullptr, &probe);
      if (!plan) throw InfeasibleAgent("agent " + std::to_string(a) + " cannot cover its goals");
      lb.push_back(plan->completion_time);
    }
    lower_bounds_ = std::move(lb);
  }
  return *lower_bounds_;
}

std::int64_t SmtHcbs::lower_bound_soc() {
  const auto& lb = lower_bounds();
  return std::accumulate(lb.begin(), lb.end(), std::int64_t{0});
}

Timestep SmtHcbs::horizon_for(std::int64_t soc) {
  const auto& lb = lower_bounds();
  const std::int64_t slack = soc - lower_bound_soc();
  return static_cast<Timestep>(*std::max_element(lb.begin(), lb.end()) + slack);
}

Encoding SmtHcbs::encode(std::int64_t soc, const ConflictSet& conflicts) {
  const std::int64_t base = lower_bound_soc();
  if (soc < base) throw Error("SoC " + std::to_string(soc) + " is below the lower bound " + std::to_string(base));
  const auto& lb = lower_bounds();
  const Timestep horizon = horizon_for(soc);
  const int k = instance_->agent_count();

  Encoding enc;
  enc.soc = soc;
  enc.slack = soc - base;
  auto& s = enc.solver;
  auto& vm = enc.vars;
  vm.horizon_ = horizon;
  vm.x_.resize(static_cast<std::size_t>(k));
  vm.e_.resize(static_cast<std::size_t>(k));
  vm.visited_.resize(static_cast<std::size_t>(k));
  vm.done_.resize(static_cast<std::size_t>(k));

  for (int a = 0; a < k; ++a) {
    enc.mdds.push_back(build_mdd(*instance_, a, horizon, distances_));
    const Mdd& mdd = enc.mdds.back();
    auto& xs = vm.x_[static_cast<std::size_t>(a)];
    auto& es = vm.e_[static_cast<std::size_t>(a)];

    for (Timestep t = 0; t <= horizon; ++t)
      for (Vertex v : mdd.level(t)) xs.emplace(key_vt(v, t), s.new_var());
    for (Timestep t = 0; t < horizon; ++t)
      for (Vertex u : mdd.level(t))
        for (Vertex v : mdd.successors(u, t)) es.emplace(key_edge(u, v, t), s.new_var());

    const Vertex start = instance_->starts[static_cast<std::size_t>(a)];
    if (!mdd.contains(start, 0)) {
      enc.infeasible = true;
      return enc;
    }
    s.add_clause({Lit::pos(vm.x(a, start, 0))});

    std::vector<Lit> lits;
    for (Timestep t = 0; t <= horizon; ++t) {
      lits.clear();
      for (Vertex v : mdd.level(t)) lits.push_back(Lit::pos(vm.x(a, v, t)));
      s.add_at_most(lits, 1);
      if (t == horizon) break;
      for (Vertex u : mdd.level(t)) {
        const int xu = vm.x(a, u, t);
        // a present agent leaves through exactly one edge
        lits.clear();
        lits.push_back(Lit::neg(xu));
        for (Vertex v : mdd.successors(u, t)) lits.push_back(Lit::pos(vm.e(a, u, v, t)));
        s.add_clause(lits);
        lits.erase(lits.begin());
        s.add_at_most(lits, 1);
        for (Vertex v : mdd.successors(u, t)) {
          const int e = vm.e(a, u, v, t);
          s.add_clause({Lit::neg(e), Lit::pos(xu)});
          s.add_clause({Lit::neg(e), Lit::pos(vm.x(a, v, t + 1))});
        }
      }
    }

    // every goal has a copy at some t >= 1
    const auto& goals = instance_->goals[static_cast<std::size_t>(a)];
    for (Vertex g : goals) {
      lits.clear();
      for (Timestep t = 1; t <= horizon; ++t)
        if (int x = vm.x(a, g, t)) lits.push_back(Lit::pos(x));
      if (lits.empty()) {
        enc.infeasible = true;
        return enc;
      }
      s.add_clause(lits);
    }

    // visited[g][t] <=> visited[g][t-1] or X_g^t, from t = 1
    auto& visited = vm.visited_[static_cast<std::size_t>(a)];
    visited.assign(goals.size(), std::vector<int>(static_cast<std::size_t>(horizon) + 1, 0));
    for (std::size_t gi = 0; gi < goals.size(); ++gi) {
      for (Timestep t = 1; t <= horizon; ++t) {
        const int var = s.new_var();
        visited[gi][static_cast<std::size_t>(t)] = var;
        const int x = vm.x(a, goals[gi], t);
        const int prev = t > 1 ? visited[gi][static_cast<std::size_t>(t - 1)] : 0;
        lits.clear();
        lits.push_back(Lit::neg(var));
        if (prev) {
          s.add_clause({Lit::neg(prev), Lit::pos(var)});
          lits.push_back(Lit::pos(prev));
        }
        if (x) {
          s.add_clause({Lit::neg(x), Lit::pos(var)});
          lits.push_back(Lit::pos(x));
        }
        s.add_clause(lits);
      }
    }

    // done[t] <=> all goals visited by t
    auto& done = vm.done_[static_cast<std::size_t>(a)];
    done.assign(static_cast<std::size_t>(horizon) + 1, 0);
    for (Timestep t = 1; t <= horizon; ++t) {
      const int d = s.new_var();
      done[static_cast<std::size_t>(t)] = d;
      lits.clear();
      lits.push_back(Lit::pos(d));
      for (std::size_t gi = 0; gi < goals.size(); ++gi) {
        const int v = visited[gi][static_cast<std::size_t>(t)];
        s.add_clause({Lit::neg(d), Lit::pos(v)});
        lits.push_back(Lit::neg(v));
      }
      s.add_clause(lits);
      if (t > 1) s.add_clause({Lit::neg(done[static_cast<std::size_t>(t - 1)]), Lit::pos(d)});
    }
    s.add_clause({Lit::pos(done[static_cast<std::size_t>(horizon)])});

    const Timestep from = std::max<Timestep>(1, lb[static_cast<std::size_t>(a)]);
    for (Timestep t = from; t < horizon; ++t) vm.late_.push_back(Lit::neg(done[static_cast<std::size_t>(t)]));
  }

  s.add_at_most(vm.late_, static_cast<int>(enc.slack));
  for (const auto& c : conflicts) add_refinement(enc, c);
  return enc;
}

bool SmtHcbs::add_refinement(Encoding& enc, const Collision& c) {
  const VarMap& vm = enc.vars;
  int p = 0, q = 0;
  if (c.kind == ConflictKind::kVertex) {
    p = vm.x(c.first, c.v, c.time);
    q = vm.x(c.second, c.v, c.time);
  } else {
    p = vm.e(c.first, c.u, c.v, c.time);
    q = vm.e(c.second, c.v, c.u, c.time);
  }
  if (!p || !q) return false;
  enc.solver.add_clause({Lit::neg(p), Lit::neg(q)});
  return true;
}

std::vector<Path> SmtHcbs::extract(const Encoding& enc) const {
  const auto& s = enc.solver;
  const VarMap& vm = enc.vars;
  std::vector<Path> paths;
  for (int a = 0; a < vm.agent_count(); ++a) {
    const Mdd& mdd = enc.mdds[static_cast<std::size_t>(a)];
    Path path;
    for (Timestep t = 0; t <= vm.horizon(); ++t) {
      Vertex at = kNoVertex;
      for (Vertex v : mdd.level(t))
        if (s.model_value(vm.x(a, v, t))) {
          if (at != kNoVertex) throw Error("internal error: agent " + std::to_string(a) + " at two vertices");
          at = v;
        }
      if (at == kNoVertex) throw Error("internal error: agent " + std::to_string(a) + " missing at t=" + std::to_string(t));
      if (!path.empty() && !instance_->graph.valid_move(path.back(), at))
        throw Error("internal error: extracted move is not an edge");
      path.push_back(at);
    }
    paths.push_back(std::move(path));
  }
  return paths;
}

FixedOutcome SmtHcbs::solve_fixed(std::int64_t soc, ConflictSet& conflicts) {
  FixedOutcome out;
  Encoding enc = encode(soc, conflicts);
  stats_.add("formulas");
  if (enc.infeasible) return out;

  for (int iter = 0;; ++iter) {
    if (options_.dump_dir) {
      std::ofstream f(*options_.dump_dir / ("h_soc" + std::to_string(soc) + "_iter" + std::to_string(iter) + ".cnf"));
      enc.solver.export_dimacs(f);
    }
    ++out.iterations;
    stats_.add("sat_calls");
    const auto before = enc.solver.stats();
    const auto verdict = enc.solver.solve({}, options_.solve.deadline);
    stats_.add("sat_conflicts", enc.solver.stats().conflicts - before.conflicts);
    stats_.add("sat_decisions", enc.solver.stats().decisions - before.decisions);
    if (verdict == sat::Result::kUnknown) {
      out.status = FixedStatus::kTimeout;
      return out;
    }
    if (verdict == sat::Result::kUnsat) {
      out.status = FixedStatus::kUnsat;
      return out;
    }

    auto paths = extract(enc);
    const auto collisions = find_collisions(paths);
    if (collisions.empty()) {
      out.status = FixedStatus::kSolved;
      out.solution = make_solution(*instance_, std::move(paths));
      return out;
    }
    int added = 0;
    for (const auto& c : collisions) {
      if (!conflicts.insert(c).second) continue;
      if (add_refinement(enc, c)) ++added;
    }
    if (added == 0) throw Error("internal error: refinement made no progress");
    out.refinements += added;
    stats_.add("refinement_clauses", added);
    if (options_.solve.deadline.expired()) {
      out.status = FixedStatus::kTimeout;
      return out;
    }
  }
}

SolveResult SmtHcbs::solve() {
  const auto started = Deadline::Clock::now();
  SolveResult result;
  result.status = SolveStatus::kNoSolutionWithinCap;
  ConflictSet conflicts;
  std::int64_t soc = 0;
  try {
    soc = lower_bound_soc();
  } catch (const SearchTimeout&) {
    result.status = SolveStatus::kTimeout;
    result.stats = stats_;
    return result;
  }
  stats_.add("lower_bound_soc", soc);
  for (;; ++soc) {
    if (options_.solve.cost_cap && soc > *options_.solve.cost_cap) break;
    if (options_.solve.deadline.expired()) {
      result.status = SolveStatus::kTimeout;
      break;
    }
    stats_.counters["last_soc"] = soc;
    auto fixed = solve_fixed(soc, conflicts);
    if (fixed.status == FixedStatus::kSolved) {
      result.status = SolveStatus::kSolved;
      result.solution = std::move(fixed.solution);
      break;
    }
    if (fixed.status == FixedStatus::kTimeout) {
      result.status = SolveStatus::kTimeout;
      break;
    }
  }
  stats_.counters["recorded_conflicts"] = static_cast<std::int64_t>(conflicts.size());
  result.stats = stats_;
  result.stats.wall_ms = std::chrono::duration<double, std::milli>(Deadline::Clock::now() - started).count();
  return result;
}

SolveResult solve_smt_hcbs(const Instance& instance, const SmtOptions& options) {
  SmtHcbs solver(instance, options);
  return solver.solve();
}

}  // namespace mgmapf
