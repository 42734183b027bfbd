#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "mgmapf/instance.hpp"

namespace mgmapf {

// Cooperative wall-clock limit polled inside solver loops.
class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  Deadline() = default;  // never expires
  static Deadline after(std::chrono::duration<double> budget) {
    Deadline d;
    d.at_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(budget);
    return d;
  }
  static Deadline after_seconds(double seconds) { return after(std::chrono::duration<double>(seconds)); }

  bool expired() const { return at_ && Clock::now() >= *at_; }
  bool unlimited() const { return !at_; }

 private:
  std::optional<Clock::time_point> at_;
};

enum class SolveStatus : std::uint8_t {
  kSolved,
  kTimeout,
  kNoSolutionWithinCap,  // also: search space exhausted
  kStateLimit,
};

std::string to_string(SolveStatus s);

// Ordered counters rendered as a `key=value` block. Only deterministic
// counters go in `counters`; wall time is reported separately.
struct SearchStats {
  std::map<std::string, std::int64_t> counters;
  double wall_ms = 0.0;

  void add(const std::string& key, std::int64_t delta = 1) { counters[key] += delta; }
  std::int64_t get(const std::string& key) const {
    auto it = counters.find(key);
    return it == counters.end() ? 0 : it->second;
  }
};

void write_stats(std::ostream& out, const SearchStats& stats, bool with_time = true);

struct SolveResult {
  SolveStatus status = SolveStatus::kNoSolutionWithinCap;
  std::optional<Solution> solution;
  SearchStats stats;

  bool solved() const { return status == SolveStatus::kSolved; }
};

struct SolveOptions {
  std::optional<std::int64_t> cost_cap;
  Deadline deadline;
};

// Polls the clock once every `period` calls.
class DeadlineProbe {
 public:
  explicit DeadlineProbe(const Deadline& deadline, std::uint32_t period = 256) : deadline_(&deadline), period_(period) {}
  bool expired() {
    if (deadline_->unlimited()) return false;
    if (++count_ % period_ != 0) return fired_;
    fired_ = fired_ || deadline_->expired();
    return fired_;
  }

 private:
  const Deadline* deadline_;
  std::uint32_t period_;
  std::uint32_t count_ = 0;
  bool fired_ = false;
};

}  // namespace mgmapf
