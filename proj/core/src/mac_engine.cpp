#include "macsim/mac_engine.hpp"

#include <algorithm>

#include "macsim/adversary.hpp"

namespace macsim {

class MacSim::HooksImpl : public Hooks {
 public:
  HooksImpl(MacSim& sim, NodeId id) : sim_(sim), id_(id) {}
  double rand01() override { return sim_.node_rngs_[static_cast<std::size_t>(id_)].uniform01(); }
  void snapshot(std::int64_t phase, const Dyadic& value, TransKind entered_by) override {
    sim_.trace_.phases[static_cast<std::size_t>(id_)].push_back(
        PhaseEntry{phase, entered_by, value, -1, sim_.now_});
  }
  void snapshot_bit(std::int64_t phase, int bit, TransKind entered_by) override {
    sim_.trace_.phases[static_cast<std::size_t>(id_)].push_back(
        PhaseEntry{phase, entered_by, Dyadic{}, static_cast<std::int8_t>(bit), sim_.now_});
  }
  void mark(MarkKind kind, std::int64_t phase, int bit) override {
    if (sim_.cfg_.record != RecordLevel::CountersOnly)
      sim_.trace_.marks.push_back(
          Mark{kind, id_, phase, static_cast<std::int8_t>(bit), sim_.now_});
  }
  void history_inv(bool is_store, const std::string& value, std::int64_t seq) override {
    HistoryEvent h;
    h.time = sim_.now_;
    h.node = id_;
    h.is_store = is_store;
    h.is_inv = true;
    h.value = value;
    h.seq = seq;
    sim_.trace_.history.push_back(std::move(h));
  }
  void history_resp(bool is_store, const View& view) override {
    HistoryEvent h;
    h.time = sim_.now_;
    h.node = id_;
    h.is_store = is_store;
    h.is_inv = false;
    h.view = view;
    sim_.trace_.history.push_back(std::move(h));
  }

 private:
  MacSim& sim_;
  NodeId id_;
};

MacSim::MacSim(const ExperimentConfig& cfg, const AutomatonFactory& factory) : cfg_(cfg) {
  crash_budget_ = cfg.transport == Transport::Mac ? cfg.f : 0;
  nodes_.resize(static_cast<std::size_t>(cfg.n));
  node_rngs_.reserve(static_cast<std::size_t>(cfg.n));
  trace_.n = cfg.n;
  trace_.seed = cfg.seed;
  trace_.phases.resize(static_cast<std::size_t>(cfg.n));
  trace_.outputs.resize(static_cast<std::size_t>(cfg.n));
  trace_.crashed.assign(static_cast<std::size_t>(cfg.n), false);
  trace_.byzantine.assign(static_cast<std::size_t>(cfg.n), false);
  for (NodeId i = 0; i < cfg.n; ++i) {
    node_rngs_.emplace_back(cfg.seed, rng_stream::node(i));
    nodes_[static_cast<std::size_t>(i)].aut = factory(i);
  }
}

MacSim::MacSim(const MacSim& other)
    : cfg_(other.cfg_),
      now_(other.now_),
      crash_budget_(other.crash_budget_),
      bcasts_(other.bcasts_),
      node_rngs_(other.node_rngs_),
      pending_delivers_(other.pending_delivers_),
      ready_acks_(other.ready_acks_),
      trace_(other.trace_) {
  nodes_.reserve(other.nodes_.size());
  for (const auto& n : other.nodes_) {
    NodeRt copy;
    copy.alive = n.alive;
    copy.halted = n.halted;
    copy.locked = n.locked;
    copy.waiting_ack = n.waiting_ack;
    copy.started = n.started;
    copy.inflight = n.inflight;
    copy.seq = n.seq;
    copy.deferred = n.deferred;
    copy.pregate = n.pregate;
    copy.aut = n.aut->clone();
    nodes_.push_back(std::move(copy));
  }
}

bool MacSim::segment_enabled(NodeId i) const {
  const NodeRt& n = nodes_[static_cast<std::size_t>(i)];
  return n.alive && !n.halted && !n.waiting_ack;
}

std::vector<Event> MacSim::enabled_events() const {
  std::vector<Event> out;
  auto sorted_delivers = pending_delivers_;
  std::sort(sorted_delivers.begin(), sorted_delivers.end());
  for (auto [bid, rcv] : sorted_delivers)
    out.push_back(Event{EventKind::Deliver, rcv, bid, 0});
  auto sorted_acks = ready_acks_;
  std::sort(sorted_acks.begin(), sorted_acks.end());
  for (BcastId bid : sorted_acks)
    out.push_back(Event{EventKind::Ack, bcasts_[static_cast<std::size_t>(bid)].sender, bid, 0});
  for (NodeId i = 0; i < cfg_.n; ++i)
    if (segment_enabled(i)) out.push_back(Event{EventKind::Segment, i, -1, 0});
  if (crash_budget_ > 0) {
    for (NodeId i = 0; i < cfg_.n; ++i)
      if (nodes_[static_cast<std::size_t>(i)].alive)
        out.push_back(Event{EventKind::Crash, i, -1, ~std::uint32_t{0}});
  }
  return out;
}

std::size_t MacSim::enabled_count() {
  std::size_t cnt = pending_delivers_.size() + ready_acks_.size();
  for (NodeId i = 0; i < cfg_.n; ++i)
    if (segment_enabled(i)) ++cnt;
  if (crash_budget_ > 0) {
    for (NodeId i = 0; i < cfg_.n; ++i)
      if (nodes_[static_cast<std::size_t>(i)].alive) ++cnt;
  }
  return cnt;
}

Event MacSim::enabled_at(std::size_t idx) const {
  if (idx < pending_delivers_.size()) {
    auto [bid, rcv] = pending_delivers_[idx];
    return Event{EventKind::Deliver, rcv, bid, 0};
  }
  idx -= pending_delivers_.size();
  if (idx < ready_acks_.size()) {
    BcastId bid = ready_acks_[idx];
    return Event{EventKind::Ack, bcasts_[static_cast<std::size_t>(bid)].sender, bid, 0};
  }
  idx -= ready_acks_.size();
  for (NodeId i = 0; i < cfg_.n; ++i) {
    if (segment_enabled(i)) {
      if (idx == 0) return Event{EventKind::Segment, i, -1, 0};
      --idx;
    }
  }
  if (crash_budget_ > 0) {
    for (NodeId i = 0; i < cfg_.n; ++i) {
      if (nodes_[static_cast<std::size_t>(i)].alive) {
        if (idx == 0) return Event{EventKind::Crash, i, -1, ~std::uint32_t{0}};
        --idx;
      }
    }
  }
  throw EngineFault("enabled_at: index out of range");
}

RedactedEvent MacSim::redact(const Event& e) const {
  RedactedEvent r;
  r.kind = e.kind;
  r.node = e.node;
  if (e.kind == EventKind::Deliver || e.kind == EventKind::Ack) {
    const BcastRt& b = bcasts_[static_cast<std::size_t>(e.bid)];
    r.sender = b.sender;
    r.seq = b.seq;
  }
  return r;
}

bool MacSim::is_enabled(const Event& e) const {
  switch (e.kind) {
    case EventKind::Deliver: {
      if (e.bid < 0 || e.bid >= static_cast<BcastId>(bcasts_.size())) return false;
      const BcastRt& b = bcasts_[static_cast<std::size_t>(e.bid)];
      return std::find(b.remaining.begin(), b.remaining.end(), e.node) != b.remaining.end();
    }
    case EventKind::Ack: {
      if (e.bid < 0 || e.bid >= static_cast<BcastId>(bcasts_.size())) return false;
      const BcastRt& b = bcasts_[static_cast<std::size_t>(e.bid)];
      return !b.acked && !b.ack_dead && b.remaining.empty() &&
             nodes_[static_cast<std::size_t>(b.sender)].alive;
    }
    case EventKind::Segment:
      return e.node >= 0 && e.node < cfg_.n && segment_enabled(e.node);
    case EventKind::Crash:
      return crash_budget_ > 0 && e.node >= 0 && e.node < cfg_.n &&
             nodes_[static_cast<std::size_t>(e.node)].alive;
    case EventKind::Tick:
      return false;  // MAC transport has no ticks
  }
  return false;
}

void MacSim::submit_broadcast(NodeId sender, Payload payload) {
  NodeRt& nd = nodes_[static_cast<std::size_t>(sender)];
  if (!nd.alive) throw EngineFault("submit_broadcast from a crashed node");
  if (nd.waiting_ack) throw EngineFault("submit_broadcast while a broadcast is in flight");
  BcastId bid = static_cast<BcastId>(bcasts_.size());
  BcastRt b;
  b.sender = sender;
  b.seq = nd.seq++;
  b.payload = payload;
  for (NodeId j = 0; j < cfg_.n; ++j) {
    NodeRt& tgt = nodes_[static_cast<std::size_t>(j)];
    if (!tgt.alive) continue;
    b.remaining.push_back(j);
    if (cfg_.gate_start && !tgt.started) {
      tgt.pregate.push_back(bid);
    } else {
      pending_delivers_.emplace_back(bid, j);
    }
  }
  nd.waiting_ack = true;
  nd.inflight = bid;

  trace_.counters.broadcasts++;
  if (payload.origin == MsgOrigin::Original) {
    trace_.counters.originals++;
  } else if (payload.origin == MsgOrigin::FollowUp) {
    trace_.counters.followups++;
  } else {
    trace_.counters.adopt_commit_msgs++;
  }
  if (payload.tag == MsgTag::Coin) trace_.counters.coins++;
  if (payload.tag == MsgTag::Dummy) trace_.counters.dummies++;
  if (cfg_.record != RecordLevel::CountersOnly) {
    BroadcastSummary s;
    s.bid = bid;
    s.sender = sender;
    s.seq = b.seq;
    s.payload = payload;
    s.submitted = now_;
    trace_.broadcasts.push_back(std::move(s));
  }
  bcasts_.push_back(std::move(b));
}

void MacSim::deliver_payload(NodeId i, const Payload& p) {
  NodeRt& nd = nodes_[static_cast<std::size_t>(i)];
  if (nd.locked) {
    nd.deferred.push_back(p);
  } else {
    HooksImpl h(*this, i);
    nd.aut->on_message(p, h);
  }
}

void MacSim::drain_queue(NodeId i) {
  NodeRt& nd = nodes_[static_cast<std::size_t>(i)];
  HooksImpl h(*this, i);
  for (std::size_t k = 0; k < nd.deferred.size(); ++k) nd.aut->on_message(nd.deferred[k], h);
  nd.deferred.clear();
}

void MacSim::check_ack_ready(BcastId bid) {
  BcastRt& b = bcasts_[static_cast<std::size_t>(bid)];
  if (!b.acked && !b.ack_dead && b.remaining.empty() &&
      nodes_[static_cast<std::size_t>(b.sender)].alive) {
    ready_acks_.push_back(bid);
  }
}

void MacSim::run_segment(NodeId i) {
  NodeRt& nd = nodes_[static_cast<std::size_t>(i)];
  if (!nd.started) {
    nd.started = true;
    for (BcastId bid : nd.pregate) pending_delivers_.emplace_back(bid, i);
    nd.pregate.clear();
  }
  HooksImpl h(*this, i);
  bool was_locked = nd.locked;
  SegmentOutcome out = nd.aut->step(h);
  nd.locked = nd.aut->locked();
  switch (out.kind) {
    case SegmentOutcome::Kind::Broadcast:
      if (nd.locked) throw EngineFault("mac-broadcast while holding the lock");
      submit_broadcast(i, std::move(out.message));
      break;
    case SegmentOutcome::Kind::Yield:
      break;
    case SegmentOutcome::Kind::Output:
      out.out.present = true;
      out.out.at = now_;
      trace_.outputs[static_cast<std::size_t>(i)] = out.out;
      nd.halted = true;
      break;
    case SegmentOutcome::Kind::Halt:
      nd.halted = true;
      break;
  }
  if (was_locked && !nd.locked) drain_queue(i);
}

void MacSim::apply_event(const Event& e) {
  if (!is_enabled(e)) throw EngineFault("apply_event: event not enabled");
  now_++;
  trace_.counters.events++;
  std::int32_t aux = 0;

  switch (e.kind) {
    case EventKind::Deliver: {
      BcastRt& b = bcasts_[static_cast<std::size_t>(e.bid)];
      b.remaining.erase(std::find(b.remaining.begin(), b.remaining.end(), e.node));
      auto it = std::find(pending_delivers_.begin(), pending_delivers_.end(),
                          std::make_pair(e.bid, e.node));
      *it = pending_delivers_.back();
      pending_delivers_.pop_back();
      if (cfg_.record != RecordLevel::CountersOnly)
        trace_.broadcasts[static_cast<std::size_t>(e.bid)].delivered_count++;
      deliver_payload(e.node, b.payload);
      check_ack_ready(e.bid);
      break;
    }
    case EventKind::Ack: {
      BcastRt& b = bcasts_[static_cast<std::size_t>(e.bid)];
      b.acked = true;
      ready_acks_.erase(std::find(ready_acks_.begin(), ready_acks_.end(), e.bid));
      NodeRt& nd = nodes_[static_cast<std::size_t>(b.sender)];
      nd.waiting_ack = false;
      nd.inflight = -1;
      if (cfg_.record != RecordLevel::CountersOnly)
        trace_.broadcasts[static_cast<std::size_t>(e.bid)].acked = now_;
      break;
    }
    case EventKind::Segment: {
      NodeRt& nd = nodes_[static_cast<std::size_t>(e.node)];
      aux = static_cast<std::int32_t>((nd.deferred.size() << 2) | (nd.locked ? 2u : 0u));
      run_segment(e.node);
      break;
    }
    case EventKind::Crash: {
      NodeRt& nd = nodes_[static_cast<std::size_t>(e.node)];
      nd.alive = false;
      nd.halted = true;
      crash_budget_--;
      trace_.counters.crashes++;
      trace_.crashed[static_cast<std::size_t>(e.node)] = true;
      aux = static_cast<std::int32_t>(e.arg);

      // Crash-during-broadcast: the keep mask picks the delivery subset of
      // the unacked inflight broadcast; the ack is permanently disabled.
      if (nd.waiting_ack && nd.inflight >= 0) {
        BcastRt& b = bcasts_[static_cast<std::size_t>(nd.inflight)];
        if (!b.acked) {
          b.ack_dead = true;
          if (cfg_.record != RecordLevel::CountersOnly)
            trace_.broadcasts[static_cast<std::size_t>(nd.inflight)].sender_crashed_before_ack =
                true;
          std::vector<NodeId> sorted = b.remaining;
          std::sort(sorted.begin(), sorted.end());
          for (std::size_t k = 0; k < sorted.size(); ++k) {
            if (k < 32 && !((e.arg >> k) & 1u)) {
              NodeId tgt = sorted[k];
              b.remaining.erase(std::find(b.remaining.begin(), b.remaining.end(), tgt));
              auto it = std::find(pending_delivers_.begin(), pending_delivers_.end(),
                                  std::make_pair(nd.inflight, tgt));
              if (it != pending_delivers_.end()) {
                *it = pending_delivers_.back();
                pending_delivers_.pop_back();
              } else {
                auto& gate = nodes_[static_cast<std::size_t>(tgt)].pregate;
                gate.erase(std::find(gate.begin(), gate.end(), nd.inflight));
              }
            }
          }
          ready_acks_.erase(std::remove(ready_acks_.begin(), ready_acks_.end(), nd.inflight),
                            ready_acks_.end());
        }
      }

      // Withheld deliveries to the crashed node disappear with it.
      for (BcastId bid : nd.pregate) {
        BcastRt& b = bcasts_[static_cast<std::size_t>(bid)];
        b.remaining.erase(std::find(b.remaining.begin(), b.remaining.end(), e.node));
        check_ack_ready(bid);
      }
      nd.pregate.clear();
      // Drop the crashed node from every pending delivery obligation.
      for (std::size_t k = 0; k < pending_delivers_.size();) {
        if (pending_delivers_[k].second == e.node) {
          BcastId bid = pending_delivers_[k].first;
          BcastRt& b = bcasts_[static_cast<std::size_t>(bid)];
          b.remaining.erase(std::find(b.remaining.begin(), b.remaining.end(), e.node));
          pending_delivers_[k] = pending_delivers_.back();
          pending_delivers_.pop_back();
          check_ack_ready(bid);
        } else {
          ++k;
        }
      }
      // Acks of broadcasts whose sender just died never fire.
      ready_acks_.erase(std::remove_if(ready_acks_.begin(), ready_acks_.end(),
                                       [&](BcastId bid) {
                                         auto& b = bcasts_[static_cast<std::size_t>(bid)];
                                         if (b.sender == e.node) {
                                           b.ack_dead = true;
                                           return true;
                                         }
                                         return false;
                                       }),
                        ready_acks_.end());
      break;
    }
    case EventKind::Tick:
      throw EngineFault("Tick in MAC transport");
  }

  if (cfg_.record == RecordLevel::Full) {
    trace_.events.push_back(TraceEvent{now_, e.kind, e.node, e.bid, aux});
  }
}

bool MacSim::done() const {
  for (const auto& n : nodes_) {
    if (n.alive && !n.halted) return false;
  }
  return true;
}

Trace MacSim::take_trace(RunVerdict v) {
  trace_.verdict = v;
  trace_.final_clock = now_;
  return std::move(trace_);
}

std::uint64_t MacSim::fingerprint() const {
  std::uint64_t h = 0x123456789abcdef0ULL;
  auto mix = [&h](std::uint64_t x) { h = splitmix64(h ^ x); };
  for (const auto& n : nodes_) {
    mix((n.alive ? 1 : 0) | (n.halted ? 2 : 0) | (n.locked ? 4 : 0) | (n.waiting_ack ? 8 : 0));
    mix(static_cast<std::uint64_t>(n.inflight + 1));
    mix(n.deferred.size());
    for (const auto& p : n.deferred) {
      mix(static_cast<std::uint64_t>(p.tag));
      mix(static_cast<std::uint64_t>(p.bit + 1));
      mix(static_cast<std::uint64_t>(p.phase + 1));
      p.value.hash_into(h);
    }
    n.aut->fingerprint(h);
  }
  for (const auto& b : bcasts_) {
    if (b.acked && b.remaining.empty()) continue;  // fully settled records
    mix(static_cast<std::uint64_t>(b.sender));
    mix((b.acked ? 1 : 0) | (b.ack_dead ? 2 : 0));
    mix(b.remaining.size());
    for (NodeId t : b.remaining) mix(static_cast<std::uint64_t>(t));
    mix(static_cast<std::uint64_t>(b.payload.tag));
    mix(static_cast<std::uint64_t>(b.payload.bit + 1));
    mix(static_cast<std::uint64_t>(b.payload.phase + 1));
  }
  mix(static_cast<std::uint64_t>(crash_budget_));
  return h;
}

Trace run_mac(const ExperimentConfig& cfg, const AutomatonFactory& factory, Adversary& adv) {
  MacSim sim(cfg, factory);
  while (!sim.done()) {
    if (sim.events_applied() >= static_cast<std::uint64_t>(cfg.event_budget))
      return sim.take_trace(RunVerdict::Timeout);
    std::size_t count = sim.enabled_count();
    if (count == 0) return sim.take_trace(RunVerdict::Stalled);
    std::size_t pick = adv.choose(sim, count);
    Event e = sim.enabled_at(pick);
    if (e.kind == EventKind::Crash) e.arg = adv.crash_keep_mask(sim, e);
    sim.apply_event(e);
    adv.observe(sim.redact(e));
  }
  return sim.take_trace(RunVerdict::Completed);
}

}  // namespace macsim
