#include "macsim/lossy_engine.hpp"

#include <algorithm>

namespace macsim {

namespace {

struct Datagram {
  BcastId id = -1;
  NodeId sender = -1;
  NodeId receiver = -1;
  Payload payload{};
  Clock born = 0;
};

class LossySim {
 public:
  LossySim(const ExperimentConfig& cfg, const LossyFactory& factory,
           const std::vector<NodeId>& byz_nodes, ByzStrategy* byz)
      : cfg_(cfg),
        t_(cfg.lossy_period()),
        delta_(cfg.lossy_delta()),
        sched_(cfg.seed, rng_stream::adversary()),
        drops_(cfg.seed, rng_stream::node(0x7fff)),
        byz_(byz) {
    int n = cfg.n;
    trace_.n = n;
    trace_.seed = cfg.seed;
    trace_.phases.resize(static_cast<std::size_t>(n));
    trace_.outputs.resize(static_cast<std::size_t>(n));
    trace_.crashed.assign(static_cast<std::size_t>(n), false);
    trace_.byzantine.assign(static_cast<std::size_t>(n), false);
    nodes_.resize(static_cast<std::size_t>(n));
    for (NodeId b : byz_nodes) {
      nodes_[static_cast<std::size_t>(b)].byz = true;
      trace_.byzantine[static_cast<std::size_t>(b)] = true;
    }
    for (NodeId i = 0; i < n; ++i) {
      auto& nd = nodes_[static_cast<std::size_t>(i)];
      nd.last_tick = -t_;  // first tick is due immediately
      if (nd.byz) {
        nd.byz_rng = HashRng(cfg.seed, rng_stream::byz(i));
      } else {
        nd.aut = factory(i);
        trace_.phases[static_cast<std::size_t>(i)].push_back(
            PhaseEntry{0, TransKind::Input, nd.aut->output().value, -1, 0});
      }
    }
    last_delivery_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
    crash_budget_ = cfg.crash_hazard > 0 ? cfg.f : 0;
  }

  Trace run() {
    while (!done()) {
      if (trace_.counters.events >= static_cast<std::uint64_t>(cfg_.event_budget)) {
        finalize(RunVerdict::Timeout);
        return std::move(trace_);
      }
      step();
    }
    finalize(RunVerdict::Completed);
    return std::move(trace_);
  }

 private:
  struct NodeRt {
    bool alive = true;
    bool byz = false;
    std::unique_ptr<LossyAutomaton> aut;  // honest only
    HashRng byz_rng;
    ByzObservation obs;
    Clock last_tick = 0;
    Clock first_tick = -1;
    std::uint64_t ticks = 0;
    Clock commit_ready_since = -1;
  };

  class HooksImpl : public Hooks {
   public:
    HooksImpl(LossySim& sim, NodeId id) : sim_(sim), id_(id) {}
    double rand01() override { return 0.5; }  // lossy protocols draw no coins
    void snapshot(std::int64_t phase, const Dyadic& value, TransKind entered_by) override {
      sim_.trace_.phases[static_cast<std::size_t>(id_)].push_back(
          PhaseEntry{phase, entered_by, value, -1, sim_.now_});
    }
    void snapshot_bit(std::int64_t, int, TransKind) override {}
    void mark(MarkKind kind, std::int64_t phase, int bit) override {
      sim_.trace_.marks.push_back(Mark{kind, id_, phase, static_cast<std::int8_t>(bit), sim_.now_});
    }
    void history_inv(bool, const std::string&, std::int64_t) override {}
    void history_resp(bool, const View&) override {}
    void accept(NodeId sender, std::int64_t sender_phase, const Dyadic& value) override {
      if (sim_.cfg_.record == RecordLevel::CountersOnly) return;
      std::int64_t own_phase = 0;
      const auto& ph = sim_.trace_.phases[static_cast<std::size_t>(id_)];
      if (!ph.empty()) own_phase = ph.back().phase;
      sim_.trace_.accepted.push_back(AcceptedValue{id_, own_phase, sender, value, sender_phase});
    }

   private:
    LossySim& sim_;
    NodeId id_;
  };

  bool done() const {
    for (const auto& nd : nodes_) {
      if (nd.alive && !nd.byz && !nd.aut->decided()) return false;
    }
    return true;
  }

  void finalize(RunVerdict v) {
    for (NodeId i = 0; i < cfg_.n; ++i) {
      const auto& nd = nodes_[static_cast<std::size_t>(i)];
      if (!nd.byz && nd.aut->decided()) {
        Output out = nd.aut->output();
        out.at = now_;
        trace_.outputs[static_cast<std::size_t>(i)] = out;
      }
    }
    trace_.verdict = v;
    trace_.final_clock = now_;
  }

  Clock& pair_last(NodeId i, NodeId j) {
    return last_delivery_[static_cast<std::size_t>(i) * static_cast<std::size_t>(cfg_.n) +
                          static_cast<std::size_t>(j)];
  }

  void step() {
    // Engine-enforced fairness first: overdue ticks, then overdue pair
    // deliveries (Eventual Progress), then overdue commits. Forcing fires a
    // backlog margin early so the strict bounds hold even when many
    // obligations come due in the same window.
    const std::int64_t tick_due = std::max<std::int64_t>(1, t_ - cfg_.n);
    const std::int64_t pair_due = std::max<std::int64_t>(
        tick_due + 1, delta_ - static_cast<std::int64_t>(cfg_.n) * cfg_.n - cfg_.n);
    for (NodeId i = 0; i < cfg_.n; ++i) {
      const auto& nd = nodes_[static_cast<std::size_t>(i)];
      if (nd.alive && now_ - nd.last_tick >= tick_due) {
        apply_tick(i, true);
        return;
      }
    }
    for (NodeId i = 0; i < cfg_.n; ++i) {
      const auto& si = nodes_[static_cast<std::size_t>(i)];
      if (!si.alive || si.byz || si.ticks == 0) continue;
      for (NodeId j = 0; j < cfg_.n; ++j) {
        if (i == j) continue;
        const auto& sj = nodes_[static_cast<std::size_t>(j)];
        if (!sj.alive || sj.byz) continue;
        if (now_ - std::max(pair_last(i, j), si.first_tick) >= pair_due) {
          force_delivery(i, j);
          return;
        }
      }
    }
    for (NodeId i = 0; i < cfg_.n; ++i) {
      auto& nd = nodes_[static_cast<std::size_t>(i)];
      if (nd.alive && !nd.byz && nd.commit_ready_since >= 0 &&
          now_ - nd.commit_ready_since >= delta_) {
        apply_segment(i, true);
        return;
      }
    }

    // adversary choice: uniform over ticks, in-flight deliveries, commits
    std::size_t live = 0, commits = 0;
    for (const auto& nd : nodes_) {
      if (nd.alive) ++live;
      if (nd.alive && !nd.byz && nd.commit_ready_since >= 0) ++commits;
    }
    bool can_crash = crash_budget_ > 0;
    if (can_crash && sched_.uniform01() < cfg_.crash_hazard) {
      std::vector<NodeId> honest_alive;
      for (NodeId i = 0; i < cfg_.n; ++i) {
        const auto& nd = nodes_[static_cast<std::size_t>(i)];
        if (nd.alive && !nd.byz) honest_alive.push_back(i);
      }
      if (!honest_alive.empty()) {
        apply_crash(honest_alive[sched_.below(honest_alive.size())]);
        return;
      }
    }
    std::uint64_t total = live + inflight_.size() + commits;
    std::uint64_t pick = sched_.below(total);
    if (pick < live) {
      for (NodeId i = 0; i < cfg_.n; ++i) {
        if (nodes_[static_cast<std::size_t>(i)].alive && pick-- == 0) {
          apply_tick(i, false);
          return;
        }
      }
    }
    pick -= live;
    if (pick < inflight_.size()) {
      apply_delivery(pick, false);
      return;
    }
    pick -= inflight_.size();
    for (NodeId i = 0; i < cfg_.n; ++i) {
      const auto& nd = nodes_[static_cast<std::size_t>(i)];
      if (nd.alive && !nd.byz && nd.commit_ready_since >= 0 && pick-- == 0) {
        apply_segment(i, false);
        return;
      }
    }
  }

  void advance(EventKind kind, NodeId node, BcastId bid, std::int32_t aux) {
    now_++;
    trace_.counters.events++;
    if (cfg_.record == RecordLevel::Full)
      trace_.events.push_back(TraceEvent{now_, kind, node, bid, aux});
  }

  void enqueue(Datagram dg) {
    // per-pair cap: older datagrams from the same pair are superseded
    int count = 0;
    std::size_t oldest = inflight_.size();
    for (std::size_t k = 0; k < inflight_.size(); ++k) {
      if (inflight_[k].sender == dg.sender && inflight_[k].receiver == dg.receiver) {
        ++count;
        if (oldest == inflight_.size() || inflight_[k].born < inflight_[oldest].born) oldest = k;
      }
    }
    if (count >= kPairCap) {
      inflight_[oldest] = inflight_.back();
      inflight_.pop_back();
    }
    inflight_.push_back(std::move(dg));
  }

  void apply_tick(NodeId i, bool forced) {
    auto& nd = nodes_[static_cast<std::size_t>(i)];
    advance(EventKind::Tick, i, -1, forced ? 1 : 0);
    nd.last_tick = now_;
    if (nd.first_tick < 0) nd.first_tick = now_;
    nd.ticks++;
    for (NodeId j = 0; j < cfg_.n; ++j) {
      if (j == i || !nodes_[static_cast<std::size_t>(j)].alive) continue;
      Payload m;
      if (nd.byz) {
        auto gen = byz_ ? byz_->generate(i, j, nd.ticks, nd.obs, nd.byz_rng) : std::nullopt;
        if (!gen) continue;
        m = std::move(*gen);
        m.sender = i;  // id integrity: a faulty node cannot spoof identities
      } else {
        m = nd.aut->tick_payload();
      }
      trace_.counters.datagrams++;
      if (cfg_.lossy.drop_rate > 0 && drops_.uniform01() < cfg_.lossy.drop_rate) {
        trace_.counters.dropped++;
        continue;
      }
      Datagram dg;
      dg.id = next_dg_++;
      dg.sender = i;
      dg.receiver = j;
      dg.payload = std::move(m);
      dg.born = now_;
      if (cfg_.record == RecordLevel::Full) {
        trace_.datagrams.push_back(
            DatagramSummary{dg.id, i, j, dg.payload, now_, -1, false, false});
      }
      enqueue(std::move(dg));
    }
  }

  void deliver_payload(NodeId receiver, NodeId sender, const Payload& payload) {
    auto& rd = nodes_[static_cast<std::size_t>(receiver)];
    pair_last(sender, receiver) = now_;
    if (rd.byz) {
      if (!nodes_[static_cast<std::size_t>(sender)].byz) rd.obs.last_honest_value = payload.value;
      rd.obs.max_phase_seen = std::max(rd.obs.max_phase_seen, payload.phase);
      return;
    }
    HooksImpl h(*this, receiver);
    rd.aut->on_datagram(payload, h);
    if (rd.aut->segment_ready()) {
      if (rd.commit_ready_since < 0) rd.commit_ready_since = now_;
    } else {
      rd.commit_ready_since = -1;
    }
  }

  void apply_delivery(std::size_t idx, bool forced) {
    Datagram dg = std::move(inflight_[idx]);
    inflight_[idx] = std::move(inflight_.back());
    inflight_.pop_back();
    if (!nodes_[static_cast<std::size_t>(dg.receiver)].alive) return;  // rot silently
    advance(EventKind::Deliver, dg.receiver, dg.id, forced ? 1 : 0);
    if (cfg_.record == RecordLevel::Full) {
      for (auto& s : trace_.datagrams) {
        if (s.id == dg.id) {
          s.delivered = now_;
          s.forced = forced;
          break;
        }
      }
    }
    deliver_payload(dg.receiver, dg.sender, dg.payload);
  }

  // Eventual Progress: the window closed with no i->j delivery, so deliver
  // i's freshest datagram (synthesizing one from its current state if the
  // drop policy discarded everything).
  void force_delivery(NodeId i, NodeId j) {
    std::size_t best = inflight_.size();
    for (std::size_t k = 0; k < inflight_.size(); ++k) {
      if (inflight_[k].sender == i && inflight_[k].receiver == j) {
        if (best == inflight_.size() || inflight_[best].born < inflight_[k].born) best = k;
      }
    }
    trace_.counters.forced_deliveries++;
    if (best < inflight_.size()) {
      apply_delivery(best, true);
      return;
    }
    // everything was dropped: substitute a delivery of i's current state
    BcastId id = next_dg_++;
    Payload payload = nodes_[static_cast<std::size_t>(i)].aut->tick_payload();
    advance(EventKind::Deliver, j, id, 1);
    if (cfg_.record == RecordLevel::Full) {
      trace_.datagrams.push_back(DatagramSummary{id, i, j, payload, now_, now_, true, false});
    }
    trace_.marks.push_back(Mark{MarkKind::ForcedDelivery, j, -1, -1, now_});
    deliver_payload(j, i, payload);
  }

  void apply_segment(NodeId i, bool forced) {
    auto& nd = nodes_[static_cast<std::size_t>(i)];
    advance(EventKind::Segment, i, -1, forced ? 1 : 0);
    if (forced) {
      trace_.counters.forced_commits++;
      trace_.marks.push_back(Mark{MarkKind::ForcedCommit, i, -1, -1, now_});
    }
    HooksImpl h(*this, i);
    nd.aut->run_segment(h);
    nd.commit_ready_since = nd.aut->segment_ready() ? now_ : -1;
  }

  void apply_crash(NodeId i) {
    auto& nd = nodes_[static_cast<std::size_t>(i)];
    advance(EventKind::Crash, i, -1, 0);
    nd.alive = false;
    crash_budget_--;
    trace_.counters.crashes++;
    trace_.crashed[static_cast<std::size_t>(i)] = true;
    inflight_.erase(std::remove_if(inflight_.begin(), inflight_.end(),
                                   [&](const Datagram& d) { return d.receiver == i; }),
                    inflight_.end());
  }

  static constexpr int kPairCap = 3;

  ExperimentConfig cfg_;
  std::int64_t t_, delta_;
  HashRng sched_, drops_;
  ByzStrategy* byz_ = nullptr;
  Clock now_ = 0;
  BcastId next_dg_ = 0;
  int crash_budget_ = 0;
  std::vector<NodeRt> nodes_;
  std::vector<Datagram> inflight_;
  std::vector<Clock> last_delivery_;
  Trace trace_;
};

}  // namespace

Trace run_lossy(const ExperimentConfig& cfg, const LossyFactory& factory,
                const std::vector<NodeId>& byz_nodes, ByzStrategy* byz) {
  LossySim sim(cfg, factory, byz_nodes, byz);
  return sim.run();
}

}  // namespace macsim
