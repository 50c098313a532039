#pragma once

#include <functional>

#include "macsim/mac_engine.hpp"

namespace macsim {

struct EnumerateOptions {
  int max_depth = 12;          // schedule length cap (<0: unbounded)
  bool include_crashes = false;
  bool include_crash_subsets = false;  // branch over delivery keep-masks
  std::uint64_t state_limit = 200'000'000;  // hard stop on visited schedules
};

// Depth-first enumeration of every schedule (adversary choice sequence) up to
// the cap. Calls `leaf` at each maximal point: every path end (depth cap, all
// nodes halted, or nothing enabled). Returns the number of leaves, or
// nullopt-like -1 when the state limit tripped.
std::int64_t enumerate_schedules(const ExperimentConfig& cfg, const AutomatonFactory& factory,
                                 const EnumerateOptions& opt,
                                 const std::function<void(const MacSim&)>& leaf);

// Memoized reachable-state exploration (collapses converging schedules).
// Calls `terminal` once per reachable terminal state. Returns the number of
// distinct states visited.
std::int64_t enumerate_reachable(const ExperimentConfig& cfg, const AutomatonFactory& factory,
                                 const EnumerateOptions& opt,
                                 const std::function<void(const MacSim&)>& terminal);

}  // namespace macsim
