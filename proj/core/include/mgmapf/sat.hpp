#pragma once

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <vector>

#include "mgmapf/solve.hpp"

namespace mgmapf::sat {

// Literal over a variable numbered from 1 (DIMACS convention).
class Lit {
 public:
  constexpr Lit() = default;
  static constexpr Lit pos(int var) { return Lit(2 * (var - 1)); }
  static constexpr Lit neg(int var) { return Lit(2 * (var - 1) + 1); }
  static constexpr Lit from_dimacs(int d) { return d > 0 ? pos(d) : neg(-d); }

  constexpr int var() const { return code_ / 2 + 1; }
  constexpr bool negative() const { return code_ & 1; }
  constexpr int dimacs() const { return negative() ? -var() : var(); }
  constexpr Lit operator~() const { return Lit(code_ ^ 1); }
  constexpr int code() const { return code_; }

  constexpr auto operator<=>(const Lit&) const = default;

 private:
  constexpr explicit Lit(int code) : code_(code) {}
  int code_ = 0;
};

enum class Result : std::uint8_t { kSat, kUnsat, kUnknown };

struct SolverStats {
  std::int64_t decisions = 0;
  std::int64_t propagations = 0;
  std::int64_t conflicts = 0;
  std::int64_t learned = 0;
  std::int64_t restarts = 0;
  std::int64_t solves = 0;
};

// Incremental CDCL solver. Clauses may be added between solve() calls; every
// SAT answer is checked against all added clauses before it is returned.
class Solver {
 public:
  Solver() = default;

  int new_var();
  // first of `n` fresh consecutive variables
  int new_vars(int n);
  int var_count() const { return static_cast<int>(assigns_.size()); }

  // Drops tautologies and duplicate literals. Returns false once the clause
  // set is known unsatisfiable at the root (for instance an empty clause).
  bool add_clause(std::span<const Lit> lits);
  bool add_clause(std::initializer_list<Lit> lits) { return add_clause(std::span<const Lit>(lits.begin(), lits.size())); }

  // Σ lits ≤ bound. Pairwise clauses for bound 1 over at most six literals,
  // sequential counter (fresh auxiliaries) otherwise.
  void add_at_most(std::span<const Lit> lits, int bound);

  Result solve(std::span<const Lit> assumptions = {}, const Deadline& deadline = {});

  // model of the last SAT answer
  bool model_value(int var) const { return model_.at(static_cast<std::size_t>(var - 1)); }
  bool model_value(Lit l) const { return model_value(l.var()) != l.negative(); }
  const std::vector<bool>& model() const { return model_; }

  bool permanently_unsat() const { return !ok_; }
  std::size_t clause_count() const { return originals_.size(); }
  const std::vector<std::vector<Lit>>& clauses() const { return originals_; }
  const SolverStats& stats() const { return stats_; }

  // `p cnf <vars> <clauses>` then one 0-terminated clause per line
  void export_dimacs(std::ostream& out) const;

 private:
  using CRef = std::uint32_t;
  static constexpr CRef kNoReason = static_cast<CRef>(-1);
  static constexpr std::int8_t kTrue = 0, kFalse = 1, kUndef = 2;

  struct Clause {
    std::vector<int> lits;  // literal codes
    bool learnt = false;
    bool deleted = false;
    double activity = 0.0;
  };
  struct Watcher {
    CRef cref;
    int blocker;
  };

  std::int8_t value(int lit) const {
    std::int8_t a = assigns_[static_cast<std::size_t>(lit >> 1)];
    return a == kUndef ? kUndef : static_cast<std::int8_t>(a ^ (lit & 1));
  }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  void enqueue(int lit, CRef reason);
  CRef propagate();
  void analyze(CRef conflict, std::vector<int>& learnt, int& backtrack_level);
  bool redundant(int lit) const;
  void cancel_until(int level);
  CRef attach(std::vector<int> lits, bool learnt);
  void reduce_learnts();
  int pick_branch();
  void bump_var(int v);
  void bump_clause(Clause& c);
  bool verify_model() const;

  // heap of unassigned variables by (activity desc, index asc)
  bool heap_less(int a, int b) const;
  void heap_insert(int v);
  void heap_up(std::size_t i);
  void heap_down(std::size_t i);
  int heap_pop();

  bool ok_ = true;
  std::vector<std::vector<Lit>> originals_;
  std::vector<Clause> clauses_;
  std::vector<CRef> learnts_;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<std::int8_t> assigns_;
  std::vector<bool> polarity_;  // saved phase, true = negative
  std::vector<int> level_;
  std::vector<CRef> reason_;
  std::vector<double> activity_;
  std::vector<int> trail_;
  std::vector<int> trail_lim_;
  std::size_t qhead_ = 0;
  std::vector<int> heap_;
  std::vector<int> heap_index_;
  std::vector<char> seen_;
  double var_inc_ = 1.0;
  double clause_inc_ = 1.0;
  double max_learnts_ = 0.0;
  std::vector<bool> model_;
  SolverStats stats_;
};

// DIMACS CNF reader (comments and the problem line are accepted)
Solver read_dimacs(std::istream& in);

}  // namespace mgmapf::sat
