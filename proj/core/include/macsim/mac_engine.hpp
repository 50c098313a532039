#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "macsim/automaton.hpp"
#include "macsim/config.hpp"
#include "macsim/trace.hpp"

namespace macsim {

// A schedulable atomic occurrence. `arg` carries the crash keep-mask: bit k
// set keeps the k-th pending delivery of the crashing node's unacked
// broadcast (delivery subset chosen explicitly per crash event).
struct Event {
  EventKind kind{};
  NodeId node = -1;  // Deliver: receiver; Ack: sender; Crash/Segment/Tick: target
  BcastId bid = -1;
  std::uint32_t arg = 0;

  bool operator==(const Event&) const = default;
};

// What the message-oblivious adversary is allowed to see of an enabled event:
// the skeleton only, never payload content or message type.
struct RedactedEvent {
  EventKind kind{};
  NodeId node = -1;
  NodeId sender = -1;
  std::int32_t seq = -1;
};

using AutomatonFactory = std::function<std::unique_ptr<MacAutomaton>(NodeId)>;

// Deterministic single-run simulator of the abstract MAC layer. One event per
// logical clock tick; apply_event is a pure transition of the engine state.
class MacSim {
 public:
  MacSim(const ExperimentConfig& cfg, const AutomatonFactory& factory);
  MacSim(const MacSim& other);
  MacSim& operator=(const MacSim&) = delete;

  // Exact enabled set in canonical order (deliveries, acks, segments,
  // crashes). Crash events are listed with arg = keep-all mask; callers that
  // model delivery subsets substitute their own mask before applying.
  std::vector<Event> enabled_events() const;
  bool is_enabled(const Event& e) const;
  void apply_event(const Event& e);  // EngineFault if e is not enabled

  bool done() const;
  std::uint64_t events_applied() const { return trace_.counters.events; }
  Clock now() const { return now_; }

  int n() const { return cfg_.n; }
  bool alive(NodeId i) const { return nodes_[static_cast<std::size_t>(i)].alive; }
  bool halted(NodeId i) const { return nodes_[static_cast<std::size_t>(i)].halted; }
  int crashes_remaining() const { return crash_budget_; }
  const Trace& trace() const { return trace_; }
  Trace take_trace(RunVerdict v);

  // Fast-path accessors for the run loop (indexes into the enabled set
  // without materializing it).
  std::size_t enabled_count();
  Event enabled_at(std::size_t idx) const;
  RedactedEvent redact(const Event& e) const;

  std::uint64_t fingerprint() const;  // semantic state hash (enumeration memo)

  const MacAutomaton& automaton(NodeId i) const { return *nodes_[static_cast<std::size_t>(i)].aut; }

 private:
  struct NodeRt {
    bool alive = true;
    bool halted = false;
    bool locked = false;
    bool waiting_ack = false;
    bool started = false;  // has taken its first segment
    BcastId inflight = -1;
    std::int32_t seq = 0;
    std::vector<Payload> deferred;  // arrived while locked, drained at unlock
    std::vector<BcastId> pregate;   // deliveries withheld until started
    std::unique_ptr<MacAutomaton> aut;
  };

  struct BcastRt {
    NodeId sender = -1;
    std::int32_t seq = 0;
    Payload payload{};
    std::vector<NodeId> remaining;  // live targets not yet delivered
    bool acked = false;
    bool ack_dead = false;  // sender crashed before ack
  };

  class HooksImpl;
  friend class HooksImpl;

  void submit_broadcast(NodeId sender, Payload payload);
  void drain_queue(NodeId i);
  void deliver_payload(NodeId i, const Payload& p);
  void check_ack_ready(BcastId bid);
  void run_segment(NodeId i);
  bool segment_enabled(NodeId i) const;
  void rebuild_scan_lists() const;

  ExperimentConfig cfg_;
  Clock now_ = 0;
  int crash_budget_ = 0;
  std::vector<NodeRt> nodes_;
  std::vector<BcastRt> bcasts_;
  std::vector<HashRng> node_rngs_;

  // exact enabled pools, maintained incrementally
  std::vector<std::pair<BcastId, NodeId>> pending_delivers_;
  std::vector<BcastId> ready_acks_;

  Trace trace_;
};

// Drives one simulation to completion under an adversary. Identical
// (config, seed) yields a bit-identical trace.
class Adversary;
Trace run_mac(const ExperimentConfig& cfg, const AutomatonFactory& factory, Adversary& adv);

}  // namespace macsim
