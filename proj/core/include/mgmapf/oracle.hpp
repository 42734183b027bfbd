#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "mgmapf/instance.hpp"
#include "mgmapf/solve.hpp"

namespace mgmapf {

struct OracleOptions {
  std::optional<std::int64_t> soc_cap;
  std::size_t state_limit = 20'000'000;  // settled joint states before giving up
  Deadline deadline;
};

// Uniform-cost search over joint states (positions, per-agent visited goals).
// Each joint step costs the number of agents still missing a goal; finished
// agents keep moving for free. Returns a minimal-SoC solution, or
// kNoSolutionWithinCap once the cap is passed or the space is exhausted.
// Throws Error when the joint state does not pack into 64 bits.
SolveResult solve_optimal(const Instance& instance, const OracleOptions& options = {});

}  // namespace mgmapf
