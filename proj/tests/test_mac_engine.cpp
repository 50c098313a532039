#include <doctest.h>

#include <algorithm>

#include "macsim/adversary.hpp"
#include "macsim/json_io.hpp"
#include "macsim/mac_engine.hpp"
#include "macsim/runner.hpp"

using namespace macsim;

namespace {

// Broadcasts `sends` messages tagged with a running number, records every
// received number; optionally holds the lock between two segments.
class Probe final : public MacAutomaton {
 public:
  explicit Probe(int sends, bool lock_once = false) : sends_(sends), lock_once_(lock_once) {}

  SegmentOutcome step(Hooks&) override {
    if (lock_once_ && !locked_ && !lock_done_) {
      locked_ = true;
      lock_done_ = true;
      return SegmentOutcome::yield();
    }
    if (locked_) {
      locked_ = false;
      return SegmentOutcome::yield();
    }
    if (sent_ < sends_) {
      Payload m;
      m.tag = MsgTag::Value;
      m.bit = 1;
      m.phase = ++sent_;
      return SegmentOutcome::broadcast(std::move(m));
    }
    return SegmentOutcome::halt();
  }

  void on_message(const Payload& m, Hooks&) override { received.push_back(m.phase); }
  bool locked() const override { return locked_; }
  std::unique_ptr<MacAutomaton> clone() const override { return std::make_unique<Probe>(*this); }
  void fingerprint(std::uint64_t& h) const override {
    h = splitmix64(h ^ static_cast<std::uint64_t>(sent_));
  }

  std::vector<std::int64_t> received;

 private:
  int sends_;
  bool lock_once_;
  int sent_ = 0;
  bool locked_ = false;
  bool lock_done_ = false;
};

ExperimentConfig probe_config(int n, int f = 0) {
  ExperimentConfig cfg;
  cfg.protocol = Protocol::AdoptCommit;  // irrelevant: factory overrides
  cfg.n = n;
  cfg.f = f;
  cfg.record = RecordLevel::Full;
  return cfg;
}

AutomatonFactory probe_factory(int sends, int lock_node = -1) {
  return [=](NodeId i) -> std::unique_ptr<MacAutomaton> {
    return std::make_unique<Probe>(sends, i == lock_node);
  };
}

bool has_event(const std::vector<Event>& events, EventKind kind, NodeId node, BcastId bid) {
  return std::any_of(events.begin(), events.end(), [&](const Event& e) {
    return e.kind == kind && e.node == node && e.bid == bid;
  });
}

}  // namespace

TEST_CASE("broadcast enables deliveries to all live nodes, ack after the last") {
  MacSim sim(probe_config(2), probe_factory(1));
  // only segments enabled at first
  for (const Event& e : sim.enabled_events()) CHECK(e.kind == EventKind::Segment);
  sim.apply_event(Event{EventKind::Segment, 0, -1, 0});  // node 0 broadcasts
  auto events = sim.enabled_events();
  CHECK(has_event(events, EventKind::Deliver, 0, 0));
  CHECK(has_event(events, EventKind::Deliver, 1, 0));
  CHECK(!has_event(events, EventKind::Ack, 0, 0));
  sim.apply_event(Event{EventKind::Deliver, 0, 0, 0});
  CHECK(!has_event(sim.enabled_events(), EventKind::Ack, 0, 0));
  sim.apply_event(Event{EventKind::Deliver, 1, 0, 0});
  CHECK(has_event(sim.enabled_events(), EventKind::Ack, 0, 0));
  sim.apply_event(Event{EventKind::Ack, 0, 0, 0});
  // both probes saw the message, node 0 resumes (its segment is enabled)
  CHECK(dynamic_cast<const Probe&>(sim.automaton(1)).received ==
        std::vector<std::int64_t>{1});
  CHECK(has_event(sim.enabled_events(), EventKind::Segment, 0, -1));
}

TEST_CASE("broadcast after a crash targets only live nodes") {
  MacSim sim(probe_config(3, 1), probe_factory(1));
  sim.apply_event(Event{EventKind::Crash, 2, -1, ~0u});
  sim.apply_event(Event{EventKind::Segment, 0, -1, 0});
  auto events = sim.enabled_events();
  CHECK(has_event(events, EventKind::Deliver, 0, 0));
  CHECK(has_event(events, EventKind::Deliver, 1, 0));
  CHECK(!has_event(events, EventKind::Deliver, 2, 0));
  sim.apply_event(Event{EventKind::Deliver, 0, 0, 0});
  sim.apply_event(Event{EventKind::Deliver, 1, 0, 0});
  CHECK(has_event(sim.enabled_events(), EventKind::Ack, 0, 0));
}

TEST_CASE("crash mid-broadcast: adversary-chosen delivery subset, ack never fires") {
  MacSim sim(probe_config(3, 1), probe_factory(1));
  sim.apply_event(Event{EventKind::Segment, 0, -1, 0});
  // keep only the delivery to node 1 (remaining sorted: 0,1,2 -> bit 1)
  sim.apply_event(Event{EventKind::Crash, 0, -1, 0b010});
  auto events = sim.enabled_events();
  CHECK(!has_event(events, EventKind::Deliver, 0, 0));
  CHECK(has_event(events, EventKind::Deliver, 1, 0));
  CHECK(!has_event(events, EventKind::Deliver, 2, 0));
  sim.apply_event(Event{EventKind::Deliver, 1, 0, 0});
  // all kept deliveries applied, but the sender crashed: no ack, ever
  CHECK(!has_event(sim.enabled_events(), EventKind::Ack, 0, 0));
  CHECK(dynamic_cast<const Probe&>(sim.automaton(1)).received ==
        std::vector<std::int64_t>{1});
  CHECK(dynamic_cast<const Probe&>(sim.automaton(2)).received.empty());
}

TEST_CASE("receiver crash drops its pending delivery and unblocks the ack") {
  MacSim sim(probe_config(3, 1), probe_factory(1));
  sim.apply_event(Event{EventKind::Segment, 1, -1, 0});
  sim.apply_event(Event{EventKind::Deliver, 0, 0, 0});
  sim.apply_event(Event{EventKind::Deliver, 1, 0, 0});
  CHECK(!has_event(sim.enabled_events(), EventKind::Ack, 1, 0));
  sim.apply_event(Event{EventKind::Crash, 2, -1, ~0u});
  CHECK(!has_event(sim.enabled_events(), EventKind::Deliver, 2, 0));
  CHECK(has_event(sim.enabled_events(), EventKind::Ack, 1, 0));
}

TEST_CASE("applying a non-enabled event is an engine fault") {
  MacSim sim(probe_config(2), probe_factory(1));
  CHECK_THROWS_AS(sim.apply_event(Event{EventKind::Deliver, 0, 0, 0}), EngineFault);
  CHECK_THROWS_AS(sim.apply_event(Event{EventKind::Ack, 0, 0, 0}), EngineFault);
  CHECK_THROWS_AS(sim.apply_event(Event{EventKind::Crash, 0, -1, 0}), EngineFault);  // f = 0
  sim.apply_event(Event{EventKind::Segment, 0, -1, 0});
  CHECK_THROWS_AS(sim.apply_event(Event{EventKind::Deliver, 2, 0, 0}), EngineFault);
}

TEST_CASE("deliveries to a locked node are deferred and drained at unlock") {
  // node 1 takes the lock for one segment; node 0 broadcasts twice meanwhile
  MacSim sim(probe_config(2), probe_factory(2, 1));
  sim.apply_event(Event{EventKind::Segment, 1, -1, 0});  // node 1 locks
  sim.apply_event(Event{EventKind::Segment, 0, -1, 0});  // node 0 broadcasts #1
  sim.apply_event(Event{EventKind::Deliver, 1, 0, 0});   // deferred
  const auto& p1 = dynamic_cast<const Probe&>(sim.automaton(1));
  CHECK(p1.received.empty());  // handler did not run under the lock
  sim.apply_event(Event{EventKind::Deliver, 0, 0, 0});
  sim.apply_event(Event{EventKind::Ack, 0, 0, 0});  // delivery counted despite deferral
  sim.apply_event(Event{EventKind::Segment, 1, -1, 0});  // node 1 unlocks -> drain
  CHECK(p1.received == std::vector<std::int64_t>{1});
}

TEST_CASE("identical (config, seed) yields byte-identical traces") {
  ExperimentConfig cfg;
  cfg.protocol = Protocol::Rbc;
  cfg.n = 3;
  cfg.seed = 1234;
  cfg.adversary = "random";
  cfg.record = RecordLevel::Full;
  Trace a = run(cfg);
  Trace b = run(cfg);
  CHECK(trace_to_jsonl(cfg, a) == trace_to_jsonl(cfg, b));
  CHECK(a.counters.events == b.counters.events);
}

TEST_CASE("run() terminates with a timeout verdict when the budget runs out") {
  ExperimentConfig cfg;
  cfg.protocol = Protocol::Rbc;
  cfg.n = 3;
  cfg.seed = 5;
  cfg.event_budget = 10;
  Trace t = run(cfg);
  CHECK(t.verdict == RunVerdict::Timeout);
  CHECK(t.counters.events == 10);
}
