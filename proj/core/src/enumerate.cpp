#include "macsim/enumerate.hpp"

#include <unordered_set>

namespace macsim {

namespace {

std::vector<Event> branch_events(const MacSim& sim, const EnumerateOptions& opt) {
  std::vector<Event> events = sim.enabled_events();
  std::vector<Event> out;
  out.reserve(events.size());
  for (const Event& e : events) {
    if (e.kind != EventKind::Crash) {
      out.push_back(e);
      continue;
    }
    if (!opt.include_crashes) continue;
    if (!opt.include_crash_subsets) {
      out.push_back(e);  // keep-all mask
      continue;
    }
    // count pending deliveries of the crashing node's unacked broadcast
    int pending = 0;
    for (const Event& d : events) {
      if (d.kind == EventKind::Deliver) {
        // deliveries of broadcasts sent by the crashing node
        RedactedEvent r = sim.redact(d);
        if (r.sender == e.node) ++pending;
      }
    }
    if (pending > 16) pending = 16;  // keep the subset fan-out bounded
    std::uint32_t subsets = std::uint32_t{1} << pending;
    for (std::uint32_t mask = 0; mask < subsets; ++mask) {
      Event crash = e;
      crash.arg = mask;
      out.push_back(crash);
    }
  }
  return out;
}

struct DfsDriver {
  const EnumerateOptions& opt;
  const std::function<void(const MacSim&)>& leaf;
  std::int64_t leaves = 0;
  std::uint64_t visited = 0;
  bool tripped = false;

  void go(const MacSim& sim, int depth) {
    if (tripped) return;
    if (++visited > opt.state_limit) {
      tripped = true;
      return;
    }
    if (sim.done() || (opt.max_depth >= 0 && depth >= opt.max_depth)) {
      leaf(sim);
      ++leaves;
      return;
    }
    std::vector<Event> events = branch_events(sim, opt);
    if (events.empty()) {
      leaf(sim);
      ++leaves;
      return;
    }
    for (const Event& e : events) {
      MacSim child(sim);
      child.apply_event(e);
      go(child, depth + 1);
      if (tripped) return;
    }
  }
};

struct MemoDriver {
  const EnumerateOptions& opt;
  const std::function<void(const MacSim&)>& terminal;
  std::unordered_set<std::uint64_t> seen;
  bool tripped = false;

  void go(const MacSim& sim, int depth) {
    if (tripped) return;
    if (!seen.insert(sim.fingerprint()).second) return;
    if (seen.size() > opt.state_limit) {
      tripped = true;
      return;
    }
    if (sim.done()) {
      terminal(sim);
      return;
    }
    if (opt.max_depth >= 0 && depth >= opt.max_depth) return;
    for (const Event& e : branch_events(sim, opt)) {
      MacSim child(sim);
      child.apply_event(e);
      go(child, depth + 1);
      if (tripped) return;
    }
  }
};

}  // namespace

std::int64_t enumerate_schedules(const ExperimentConfig& cfg, const AutomatonFactory& factory,
                                 const EnumerateOptions& opt,
                                 const std::function<void(const MacSim&)>& leaf) {
  MacSim root(cfg, factory);
  DfsDriver driver{opt, leaf};
  driver.go(root, 0);
  return driver.tripped ? -1 : driver.leaves;
}

std::int64_t enumerate_reachable(const ExperimentConfig& cfg, const AutomatonFactory& factory,
                                 const EnumerateOptions& opt,
                                 const std::function<void(const MacSim&)>& terminal) {
  MacSim root(cfg, factory);
  MemoDriver driver{opt, terminal};
  driver.go(root, 0);
  return driver.tripped ? -1 : static_cast<std::int64_t>(driver.seen.size());
}

}  // namespace macsim
