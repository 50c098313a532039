#include "macsim/checkers.hpp"

#include <algorithm>

namespace macsim {

namespace {

std::vector<std::pair<NodeId, const Output*>> honest_outputs(const Trace& t) {
  std::vector<std::pair<NodeId, const Output*>> out;
  for (NodeId i = 0; i < static_cast<NodeId>(t.outputs.size()); ++i) {
    std::size_t k = static_cast<std::size_t>(i);
    if (!t.outputs[k].present) continue;
    if (k < t.byzantine.size() && t.byzantine[k]) continue;
    out.emplace_back(i, &t.outputs[k]);
  }
  return out;
}

}  // namespace

Verdict check_validity_range(const Trace& t) {
  auto outs = honest_outputs(t);
  if (outs.empty()) return Verdict::ok("validity");
  bool have_range = false;
  Dyadic lo, hi;
  for (NodeId i = 0; i < static_cast<NodeId>(t.dyadic_inputs.size()); ++i) {
    std::size_t k = static_cast<std::size_t>(i);
    if (k < t.byzantine.size() && t.byzantine[k]) continue;
    const Dyadic& v = t.dyadic_inputs[k];
    if (!have_range) {
      lo = hi = v;
      have_range = true;
    } else {
      if (v < lo) lo = v;
      if (hi < v) hi = v;
    }
  }
  for (auto [i, o] : outs) {
    if (o->value < lo || hi < o->value) {
      return Verdict::fail("validity", "output " + o->value.to_pow2_string() + " of node " +
                                           std::to_string(i) + " outside input range [" +
                                           lo.to_pow2_string() + ", " + hi.to_pow2_string() + "]",
                           {o->at});
    }
  }
  return Verdict::ok("validity");
}

Verdict check_validity_set(const Trace& t) {
  bool present[2] = {false, false};
  for (int b : t.bit_inputs) present[b] = true;
  for (auto [i, o] : honest_outputs(t)) {
    if (o->bit < 0 || o->bit > 1 || !present[o->bit]) {
      return Verdict::fail("validity",
                           "output " + std::to_string(int(o->bit)) + " of node " +
                               std::to_string(i) + " is not any node's input",
                           {o->at});
    }
  }
  return Verdict::ok("validity");
}

Verdict check_epsilon_agreement(const Trace& t, const Frac& eps) {
  auto outs = honest_outputs(t);
  if (outs.size() < 2) return Verdict::ok("epsilon-agreement");
  Dyadic lo = outs[0].second->value, hi = lo;
  for (auto [i, o] : outs) {
    (void)i;
    if (o->value < lo) lo = o->value;
    if (hi < o->value) hi = o->value;
  }
  Dyadic range = hi - lo;
  if (Frac::compare(range, eps) > 0) {
    return Verdict::fail("epsilon-agreement", "output range " + range.to_pow2_string() +
                                                  " exceeds epsilon " + eps.to_string());
  }
  return Verdict::ok("epsilon-agreement");
}

Verdict check_agreement(const Trace& t) {
  auto outs = honest_outputs(t);
  for (std::size_t k = 1; k < outs.size(); ++k) {
    if (outs[k].second->bit != outs[0].second->bit) {
      return Verdict::fail("agreement",
                           "node " + std::to_string(outs[0].first) + " output " +
                               std::to_string(int(outs[0].second->bit)) + " but node " +
                               std::to_string(outs[k].first) + " output " +
                               std::to_string(int(outs[k].second->bit)),
                           {outs[0].second->at, outs[k].second->at});
    }
  }
  return Verdict::ok("agreement");
}

Verdict check_coherence(const Trace& t) {
  auto outs = honest_outputs(t);
  for (auto [i, o] : outs) {
    if (o->decision != Decision::Commit) continue;
    for (auto [j, other] : outs) {
      if (other->bit != o->bit) {
        return Verdict::fail("coherence",
                             "node " + std::to_string(i) + " committed " +
                                 std::to_string(int(o->bit)) + " but node " + std::to_string(j) +
                                 " output (" + to_string(other->decision) + "," +
                                 std::to_string(int(other->bit)) + ")",
                             {o->at, other->at});
      }
    }
  }
  return Verdict::ok("coherence");
}

Verdict check_convergence(const Trace& t) {
  if (t.bit_inputs.empty()) return Verdict::ok("convergence");
  int v = t.bit_inputs[0];
  for (int b : t.bit_inputs) {
    if (b != v) return Verdict::ok("convergence");  // mixed inputs: vacuous
  }
  for (auto [i, o] : honest_outputs(t)) {
    if (o->decision != Decision::Commit || o->bit != v) {
      return Verdict::fail("convergence", "all inputs " + std::to_string(v) + " but node " +
                                              std::to_string(i) + " output (" +
                                              to_string(o->decision) + "," +
                                              std::to_string(int(o->bit)) + ")",
                           {o->at});
    }
  }
  return Verdict::ok("convergence");
}

Verdict check_decider_phase_span(const Trace& t) {
  auto outs = honest_outputs(t);
  if (outs.empty()) return Verdict::ok("decider-span");
  std::int64_t lo = outs[0].second->phase, hi = lo;
  for (auto [i, o] : outs) {
    (void)i;
    lo = std::min(lo, o->phase);
    hi = std::max(hi, o->phase);
  }
  if (hi - lo > 1) {
    return Verdict::fail("decider-span", "decider phases span " + std::to_string(hi - lo) +
                                             " (phases " + std::to_string(lo) + ".." +
                                             std::to_string(hi) + ")");
  }
  return Verdict::ok("decider-span");
}

Verdict check_ack_implies_delivery(const Trace& t) {
  if (t.events.empty())
    return Verdict::fail("ack-delivery", "event log missing (record level below Full)");
  std::vector<Clock> crash_time(static_cast<std::size_t>(t.n), -1);
  for (const auto& e : t.events) {
    if (e.kind == EventKind::Crash) crash_time[static_cast<std::size_t>(e.node)] = e.time;
  }
  for (const auto& b : t.broadcasts) {
    if (b.acked < 0) continue;
    for (NodeId j = 0; j < t.n; ++j) {
      Clock ct = crash_time[static_cast<std::size_t>(j)];
      bool alive_at_ack = ct < 0 || ct > b.acked;
      if (!alive_at_ack) continue;
      bool delivered_before = false;
      for (const auto& e : t.events) {
        if (e.kind == EventKind::Deliver && e.bid == b.bid && e.node == j && e.time < b.acked) {
          delivered_before = true;
          break;
        }
      }
      if (!delivered_before) {
        return Verdict::fail("ack-delivery",
                             "broadcast " + std::to_string(b.bid) + " acked at " +
                                 std::to_string(b.acked) + " without delivery to live node " +
                                 std::to_string(j),
                             {b.acked});
      }
    }
  }
  return Verdict::ok("ack-delivery");
}

Verdict check_handler_drain(const Trace& t) {
  if (t.events.empty())
    return Verdict::fail("handler-drain", "event log missing (record level below Full)");
  for (const auto& e : t.events) {
    if (e.kind != EventKind::Segment) continue;
    bool locked = (e.aux >> 1) & 1;
    std::int32_t queued = e.aux >> 2;
    if (!locked && queued > 0) {
      return Verdict::fail("handler-drain",
                           "segment of node " + std::to_string(e.node) + " ran with " +
                               std::to_string(queued) + " unprocessed messages",
                           {e.time});
    }
  }
  return Verdict::ok("handler-drain");
}

Verdict check_no_deliver_after_crash(const Trace& t) {
  if (t.events.empty())
    return Verdict::fail("deliver-after-crash", "event log missing (record level below Full)");
  std::vector<bool> dead(static_cast<std::size_t>(t.n), false);
  for (const auto& e : t.events) {
    if (e.kind == EventKind::Crash) dead[static_cast<std::size_t>(e.node)] = true;
    if (e.kind == EventKind::Deliver && dead[static_cast<std::size_t>(e.node)]) {
      return Verdict::fail("deliver-after-crash",
                           "delivery to crashed node " + std::to_string(e.node), {e.time});
    }
  }
  return Verdict::ok("deliver-after-crash");
}

Verdict check_delta_fairness(const Trace& t, std::int64_t delta) {
  if (t.events.empty() || t.datagrams.empty())
    return Verdict::fail("delta-fairness", "event log missing (record level below Full)");
  int n = t.n;
  auto idx = [n](NodeId i, NodeId j) {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j);
  };
  std::vector<Clock> crash_time(static_cast<std::size_t>(n), -1);
  std::vector<Clock> first_tick(static_cast<std::size_t>(n), -1);
  for (const auto& e : t.events) {
    if (e.kind == EventKind::Crash) crash_time[static_cast<std::size_t>(e.node)] = e.time;
    if (e.kind == EventKind::Tick && first_tick[static_cast<std::size_t>(e.node)] < 0)
      first_tick[static_cast<std::size_t>(e.node)] = e.time;
  }
  auto honest = [&](NodeId i) {
    return !(static_cast<std::size_t>(i) < t.byzantine.size() &&
             t.byzantine[static_cast<std::size_t>(i)]);
  };
  // sweep: find a gap longer than delta while both ends were alive
  std::vector<Clock> last(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), -1);
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j)
      if (i != j) last[idx(i, j)] = first_tick[static_cast<std::size_t>(i)];
  auto alive_at = [&](NodeId node, Clock time) {
    Clock ct = crash_time[static_cast<std::size_t>(node)];
    return ct < 0 || ct > time;
  };
  for (const auto& e : t.events) {
    for (NodeId i = 0; i < n; ++i) {
      for (NodeId j = 0; j < n; ++j) {
        if (i == j || !honest(i) || !honest(j)) continue;
        Clock start = last[idx(i, j)];
        if (start < 0) continue;
        if (alive_at(i, e.time) && alive_at(j, e.time) && e.time - start > delta) {
          return Verdict::fail("delta-fairness",
                               "no delivery " + std::to_string(i) + "->" + std::to_string(j) +
                                   " in (" + std::to_string(start) + ", " +
                                   std::to_string(e.time) + "] with Delta=" +
                                   std::to_string(delta),
                               {start, e.time});
        }
      }
    }
    if (e.kind == EventKind::Deliver && e.bid >= 0 &&
        e.bid < static_cast<BcastId>(t.datagrams.size())) {
      NodeId sender = t.datagrams[static_cast<std::size_t>(e.bid)].sender;
      if (sender >= 0) last[idx(sender, e.node)] = e.time;
    }
    if (e.kind == EventKind::Tick && first_tick[static_cast<std::size_t>(e.node)] == e.time) {
      for (NodeId j = 0; j < n; ++j)
        if (j != e.node) last[idx(e.node, j)] = e.time;
    }
  }
  return Verdict::ok("delta-fairness");
}

std::vector<Verdict> check_all(const ExperimentConfig& cfg, const Trace& t) {
  std::vector<Verdict> out;
  switch (cfg.protocol) {
    case Protocol::StoreCollect:
      out.push_back(check_regularity(t.history));
      break;
    case Protocol::AdoptCommit:
      out.push_back(check_validity_set(t));
      out.push_back(check_coherence(t));
      out.push_back(check_convergence(t));
      break;
    case Protocol::Rbc:
    case Protocol::Rbc2:
      out.push_back(check_validity_set(t));
      out.push_back(check_agreement(t));
      out.push_back(check_decider_phase_span(t));
      break;
    case Protocol::FirstMover:
      out.push_back(check_validity_set(t));
      break;
    case Protocol::MacAc:
    case Protocol::MacAc2:
    case Protocol::SmallAc:
    case Protocol::SmallBac:
      out.push_back(check_validity_range(t));
      if (t.verdict == RunVerdict::Completed)
        out.push_back(check_epsilon_agreement(t, cfg.epsilon_frac()));
      break;
  }
  return out;
}

}  // namespace macsim
