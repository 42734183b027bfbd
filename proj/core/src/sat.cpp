#include "mgmapf/sat.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "mgmapf/errors.hpp"

namespace mgmapf::sat {
namespace {

constexpr double kVarDecay = 0.95;
constexpr double kClauseDecay = 0.999;
constexpr int kRestartUnit = 100;

// Luby sequence 1 1 2 1 1 2 4 ... scaled by powers of y
double luby(double y, int x) {
  int size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return std::pow(y, seq);
}

enum class SearchOutcome { kSat, kUnsat, kAssumptionConflict, kRestart, kTimeout };

}  // namespace

int Solver::new_var() {
  const int v = var_count();
  assigns_.push_back(kUndef);
  polarity_.push_back(true);
  level_.push_back(0);
  reason_.push_back(kNoReason);
  activity_.push_back(0.0);
  seen_.push_back(0);
  watches_.emplace_back();
  watches_.emplace_back();
  heap_index_.push_back(-1);
  heap_insert(v);
  return v + 1;
}

int Solver::new_vars(int n) {
  const int first = var_count() + 1;
  for (int i = 0; i < n; ++i) new_var();
  return first;
}

bool Solver::add_clause(std::span<const Lit> lits) {
  std::vector<Lit> norm(lits.begin(), lits.end());
  for (Lit l : norm)
    if (l.var() < 1 || l.var() > var_count()) throw Error("clause uses undeclared variable " + std::to_string(l.var()));
  std::sort(norm.begin(), norm.end());
  norm.erase(std::unique(norm.begin(), norm.end()), norm.end());
  for (std::size_t i = 1; i < norm.size(); ++i)
    if (norm[i].var() == norm[i - 1].var()) return ok_;  // tautology
  originals_.push_back(norm);
  if (!ok_) return false;

  cancel_until(0);
  std::vector<int> codes;
  for (Lit l : norm) {
    const auto v = value(l.code());
    if (v == kTrue) return true;
    if (v == kUndef) codes.push_back(l.code());
  }
  if (codes.empty()) {
    ok_ = false;
  } else if (codes.size() == 1) {
    enqueue(codes[0], kNoReason);
    if (propagate() != kNoReason) ok_ = false;
  } else {
    attach(std::move(codes), false);
  }
  return ok_;
}

void Solver::add_at_most(std::span<const Lit> lits, int bound) {
  if (bound < 0) throw Error("negative cardinality bound");
  const auto n = static_cast<int>(lits.size());
  if (bound >= n) return;
  if (bound == 0) {
    for (Lit l : lits) add_clause({~l});
    return;
  }
  if (bound == 1 && n <= 6) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) add_clause({~lits[i], ~lits[j]});
    return;
  }
  // sequential counter: s(i, j) <=> at least j + 1 of lits[0..i] are true
  const int first = new_vars((n - 1) * bound);
  auto s = [&](int i, int j) { return Lit::pos(first + i * bound + j); };
  add_clause({~lits[0], s(0, 0)});
  for (int j = 1; j < bound; ++j) add_clause({~s(0, j)});
  for (int i = 1; i < n - 1; ++i) {
    add_clause({~lits[i], s(i, 0)});
    add_clause({~s(i - 1, 0), s(i, 0)});
    for (int j = 1; j < bound; ++j) {
      add_clause({~lits[i], ~s(i - 1, j - 1), s(i, j)});
      add_clause({~s(i - 1, j), s(i, j)});
    }
    add_clause({~lits[i], ~s(i - 1, bound - 1)});
  }
  add_clause({~lits[n - 1], ~s(n - 2, bound - 1)});
}

void Solver::enqueue(int lit, CRef reason) {
  const auto v = static_cast<std::size_t>(lit >> 1);
  assigns_[v] = (lit & 1) ? kFalse : kTrue;
  level_[v] = decision_level();
  reason_[v] = reason;
  trail_.push_back(lit);
}

Solver::CRef Solver::attach(std::vector<int> lits, bool learnt) {
  const auto cref = static_cast<CRef>(clauses_.size());
  watches_[static_cast<std::size_t>(lits[0])].push_back({cref, lits[1]});
  watches_[static_cast<std::size_t>(lits[1])].push_back({cref, lits[0]});
  clauses_.push_back({std::move(lits), learnt, false, 0.0});
  if (learnt) learnts_.push_back(cref);
  return cref;
}

Solver::CRef Solver::propagate() {
  CRef conflict = kNoReason;
  while (qhead_ < trail_.size()) {
    const int false_lit = trail_[qhead_++] ^ 1;
    auto& ws = watches_[static_cast<std::size_t>(false_lit)];
    ++stats_.propagations;
    std::size_t i = 0, j = 0;
    while (i < ws.size()) {
      const Watcher w = ws[i];
      if (value(w.blocker) == kTrue) {
        ws[j++] = ws[i++];
        continue;
      }
      Clause& c = clauses_[w.cref];
      ++i;
      if (c.deleted) continue;
      auto& lits = c.lits;
      if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
      const int first = lits[0];
      if (first != w.blocker && value(first) == kTrue) {
        ws[j++] = {w.cref, first};
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < lits.size(); ++k)
        if (value(lits[k]) != kFalse) {
          std::swap(lits[1], lits[k]);
          watches_[static_cast<std::size_t>(lits[1])].push_back({w.cref, first});
          moved = true;
          break;
        }
      if (moved) continue;
      ws[j++] = {w.cref, first};
      if (value(first) == kFalse) {
        conflict = w.cref;
        qhead_ = trail_.size();
        while (i < ws.size()) ws[j++] = ws[i++];
      } else {
        enqueue(first, w.cref);
      }
    }
    ws.resize(j);
    if (conflict != kNoReason) break;
  }
  return conflict;
}

bool Solver::redundant(int lit) const {
  const CRef r = reason_[static_cast<std::size_t>(lit >> 1)];
  if (r == kNoReason) return false;
  const auto& lits = clauses_[r].lits;
  for (std::size_t k = 1; k < lits.size(); ++k) {
    const auto v = static_cast<std::size_t>(lits[k] >> 1);
    if (!seen_[v] && level_[v] > 0) return false;
  }
  return true;
}

void Solver::analyze(CRef conflict, std::vector<int>& learnt, int& backtrack_level) {
  learnt.clear();
  learnt.push_back(-1);
  int open_paths = 0;
  int p = -1;
  auto index = static_cast<std::ptrdiff_t>(trail_.size()) - 1;
  do {
    Clause& c = clauses_[conflict];
    if (c.learnt) bump_clause(c);
    for (std::size_t j = (p == -1 ? 0 : 1); j < c.lits.size(); ++j) {
      const int q = c.lits[j];
      const auto v = static_cast<std::size_t>(q >> 1);
      if (seen_[v] || level_[v] == 0) continue;
      bump_var(static_cast<int>(v));
      seen_[v] = 1;
      if (level_[v] >= decision_level())
        ++open_paths;
      else
        learnt.push_back(q);
    }
    while (!seen_[static_cast<std::size_t>(trail_[static_cast<std::size_t>(index--)] >> 1)]) {
    }
    p = trail_[static_cast<std::size_t>(index + 1)];
    conflict = reason_[static_cast<std::size_t>(p >> 1)];
    seen_[static_cast<std::size_t>(p >> 1)] = 0;
    --open_paths;
  } while (open_paths > 0);
  learnt[0] = p ^ 1;

  // drop literals implied by the rest of the clause
  const std::vector<int> before = learnt;
  std::size_t kept = 1;
  for (std::size_t i = 1; i < learnt.size(); ++i)
    if (!redundant(learnt[i])) learnt[kept++] = learnt[i];
  learnt.resize(kept);
  for (int q : before) seen_[static_cast<std::size_t>(q >> 1)] = 0;

  backtrack_level = 0;
  if (learnt.size() > 1) {
    std::size_t max_i = 1;
    for (std::size_t i = 2; i < learnt.size(); ++i)
      if (level_[static_cast<std::size_t>(learnt[i] >> 1)] > level_[static_cast<std::size_t>(learnt[max_i] >> 1)])
        max_i = i;
    std::swap(learnt[1], learnt[max_i]);
    backtrack_level = level_[static_cast<std::size_t>(learnt[1] >> 1)];
  }
}

void Solver::cancel_until(int level) {
  if (decision_level() <= level) return;
  const auto stop = static_cast<std::size_t>(trail_lim_[static_cast<std::size_t>(level)]);
  for (std::size_t c = trail_.size(); c-- > stop;) {
    const int lit = trail_[c];
    const auto v = static_cast<std::size_t>(lit >> 1);
    assigns_[v] = kUndef;
    reason_[v] = kNoReason;
    polarity_[v] = lit & 1;
    if (heap_index_[v] < 0) heap_insert(static_cast<int>(v));
  }
  trail_.resize(stop);
  qhead_ = stop;
  trail_lim_.resize(static_cast<std::size_t>(level));
}

void Solver::bump_var(int v) {
  auto& a = activity_[static_cast<std::size_t>(v)];
  a += var_inc_;
  if (a > 1e100) {
    for (auto& x : activity_) x *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_index_[static_cast<std::size_t>(v)] >= 0) heap_up(static_cast<std::size_t>(heap_index_[static_cast<std::size_t>(v)]));
}

void Solver::bump_clause(Clause& c) {
  c.activity += clause_inc_;
  if (c.activity > 1e20) {
    for (CRef r : learnts_) clauses_[r].activity *= 1e-20;
    clause_inc_ *= 1e-20;
  }
}

void Solver::reduce_learnts() {
  std::vector<CRef> order = learnts_;
  std::stable_sort(order.begin(), order.end(),
                   [&](CRef a, CRef b) { return clauses_[a].activity < clauses_[b].activity; });
  auto locked = [&](CRef r) {
    const int first = clauses_[r].lits[0];
    return value(first) == kTrue && reason_[static_cast<std::size_t>(first >> 1)] == r;
  };
  const std::size_t half = order.size() / 2;
  for (std::size_t i = 0; i < half; ++i) {
    Clause& c = clauses_[order[i]];
    if (c.lits.size() > 2 && !locked(order[i])) {
      c.deleted = true;
      c.lits.clear();
      c.lits.shrink_to_fit();
    }
  }
  std::erase_if(learnts_, [&](CRef r) { return clauses_[r].deleted; });
  max_learnts_ *= 1.1;
}

bool Solver::heap_less(int a, int b) const {
  const double x = activity_[static_cast<std::size_t>(a)], y = activity_[static_cast<std::size_t>(b)];
  return x > y || (x == y && a < b);
}

void Solver::heap_insert(int v) {
  heap_index_[static_cast<std::size_t>(v)] = static_cast<int>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_.size() - 1);
}

void Solver::heap_up(std::size_t i) {
  const int v = heap_[i];
  while (i > 0) {
    const std::size_t parent = (i - 1) / 2;
    if (!heap_less(v, heap_[parent])) break;
    heap_[i] = heap_[parent];
    heap_index_[static_cast<std::size_t>(heap_[i])] = static_cast<int>(i);
    i = parent;
  }
  heap_[i] = v;
  heap_index_[static_cast<std::size_t>(v)] = static_cast<int>(i);
}

void Solver::heap_down(std::size_t i) {
  const int v = heap_[i];
  for (;;) {
    std::size_t child = 2 * i + 1;
    if (child >= heap_.size()) break;
    if (child + 1 < heap_.size() && heap_less(heap_[child + 1], heap_[child])) ++child;
    if (!heap_less(heap_[child], v)) break;
    heap_[i] = heap_[child];
    heap_index_[static_cast<std::size_t>(heap_[i])] = static_cast<int>(i);
    i = child;
  }
  heap_[i] = v;
  heap_index_[static_cast<std::size_t>(v)] = static_cast<int>(i);
}

int Solver::heap_pop() {
  const int top = heap_.front();
  heap_index_[static_cast<std::size_t>(top)] = -1;
  heap_.front() = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_index_[static_cast<std::size_t>(heap_.front())] = 0;
    heap_down(0);
  }
  return top;
}

int Solver::pick_branch() {
  while (!heap_.empty()) {
    const int v = heap_pop();
    if (assigns_[static_cast<std::size_t>(v)] == kUndef) return 2 * v + (polarity_[static_cast<std::size_t>(v)] ? 1 : 0);
  }
  return -1;
}

bool Solver::verify_model() const {
  for (const auto& clause : originals_) {
    bool sat = false;
    for (Lit l : clause) sat = sat || model_value(l);
    if (!sat) return false;
  }
  return true;
}

Result Solver::solve(std::span<const Lit> assumptions, const Deadline& deadline) {
  ++stats_.solves;
  model_.clear();
  for (Lit a : assumptions)
    if (a.var() < 1 || a.var() > var_count()) throw Error("assumption uses undeclared variable");
  if (!ok_) return Result::kUnsat;
  cancel_until(0);
  if (propagate() != kNoReason) {
    ok_ = false;
    return Result::kUnsat;
  }
  max_learnts_ = std::max(max_learnts_, std::max(1000.0, static_cast<double>(clauses_.size()) / 3.0));

  std::vector<int> learnt;
  SearchOutcome outcome = SearchOutcome::kRestart;
  for (int restart = 0; outcome == SearchOutcome::kRestart; ++restart) {
    const auto budget = static_cast<std::int64_t>(luby(2.0, restart) * kRestartUnit);
    std::int64_t conflicts = 0;
    for (;;) {
      const CRef conflict = propagate();
      if (conflict != kNoReason) {
        ++stats_.conflicts;
        ++conflicts;
        if (decision_level() == 0) {
          ok_ = false;
          outcome = SearchOutcome::kUnsat;
          break;
        }
        int backtrack = 0;
        analyze(conflict, learnt, backtrack);
        cancel_until(backtrack);
        if (learnt.size() == 1) {
          enqueue(learnt[0], kNoReason);
        } else {
          const CRef r = attach(learnt, true);
          bump_clause(clauses_[r]);
          enqueue(learnt[0], r);
        }
        ++stats_.learned;
        var_inc_ /= kVarDecay;
        clause_inc_ /= kClauseDecay;
        if (stats_.conflicts % 128 == 0 && deadline.expired()) {
          outcome = SearchOutcome::kTimeout;
          break;
        }
        continue;
      }

      if (conflicts >= budget) {
        ++stats_.restarts;
        cancel_until(0);
        outcome = SearchOutcome::kRestart;
        break;
      }
      if (static_cast<double>(learnts_.size()) >= max_learnts_ + static_cast<double>(trail_.size())) reduce_learnts();

      int next = -1;
      while (decision_level() < static_cast<int>(assumptions.size())) {
        const int p = assumptions[static_cast<std::size_t>(decision_level())].code();
        if (value(p) == kTrue) {
          trail_lim_.push_back(static_cast<int>(trail_.size()));
        } else if (value(p) == kFalse) {
          outcome = SearchOutcome::kAssumptionConflict;
          break;
        } else {
          next = p;
          break;
        }
      }
      if (outcome == SearchOutcome::kAssumptionConflict) break;
      if (next == -1) {
        next = pick_branch();
        if (next == -1) {
          outcome = SearchOutcome::kSat;
          break;
        }
        ++stats_.decisions;
      }
      trail_lim_.push_back(static_cast<int>(trail_.size()));
      enqueue(next, kNoReason);
    }
  }

  Result result = Result::kUnknown;
  if (outcome == SearchOutcome::kSat) {
    model_.resize(assigns_.size());
    for (std::size_t v = 0; v < assigns_.size(); ++v) model_[v] = assigns_[v] == kTrue;
    if (!verify_model()) throw Error("internal error: model does not satisfy the clause set");
    result = Result::kSat;
  } else if (outcome == SearchOutcome::kUnsat || outcome == SearchOutcome::kAssumptionConflict) {
    result = Result::kUnsat;
  }
  cancel_until(0);
  return result;
}

void Solver::export_dimacs(std::ostream& out) const {
  out << "p cnf " << var_count() << ' ' << originals_.size() << '\n';
  for (const auto& clause : originals_) {
    for (Lit l : clause) out << l.dimacs() << ' ';
    out << "0\n";
  }
  if (!out) throw Error("DIMACS write failed");
}

Solver read_dimacs(std::istream& in) {
  Solver solver;
  std::string tok;
  std::vector<Lit> clause;
  int declared = 0;
  while (in >> tok) {
    if (tok == "c") {
      std::getline(in, tok);
      continue;
    }
    if (tok == "p") {
      std::string fmt;
      int clauses = 0;
      if (!(in >> fmt >> declared >> clauses) || fmt != "cnf") throw Error("bad DIMACS problem line");
      solver.new_vars(declared);
      continue;
    }
    int d = 0;
    try {
      d = std::stoi(tok);
    } catch (const std::exception&) {
      throw Error("bad DIMACS token '" + tok + "'");
    }
    if (d == 0) {
      solver.add_clause(clause);
      clause.clear();
      continue;
    }
    while (std::abs(d) > solver.var_count()) solver.new_var();
    clause.push_back(Lit::from_dimacs(d));
  }
  if (!clause.empty()) throw Error("DIMACS clause missing terminating 0");
  return solver;
}

}  // namespace mgmapf::sat
