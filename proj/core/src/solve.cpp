#include "mgmapf/solve.hpp"

#include <iomanip>
#include <ostream>

namespace mgmapf {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kSolved:
      return "solved";
    case SolveStatus::kTimeout:
      return "timeout";
    case SolveStatus::kNoSolutionWithinCap:
      return "no_solution_within_cap";
    case SolveStatus::kStateLimit:
      return "state_limit";
  }
  return "unknown";
}

void write_stats(std::ostream& out, const SearchStats& stats, bool with_time) {
  for (const auto& [key, value] : stats.counters) out << key << '=' << value << '\n';
  if (with_time) out << "wall_ms=" << std::fixed << std::setprecision(3) << stats.wall_ms << '\n';
}

}  // namespace mgmapf
