#include "macsim/phase_analysis.hpp"

#include <algorithm>
#include <map>

namespace macsim {

namespace {

bool is_byz(const Trace& t, NodeId i) {
  return static_cast<std::size_t>(i) < t.byzantine.size() &&
         t.byzantine[static_cast<std::size_t>(i)];
}

std::string dstr(const Dyadic& d) { return d.to_pow2_string(); }

}  // namespace

std::string phase_ranges_csv(const Trace& t) {
  std::string out = "p,min,max,range,i_p,movers,jumpers\n";
  for (const auto& row : phase_ranges(t)) {
    if (row.count == 0) continue;
    out += std::to_string(row.p) + "," + row.min.to_decimal() + "," + row.max.to_decimal() + "," +
           row.range.to_decimal() + "," + std::to_string(row.i_p) + "," +
           std::to_string(row.movers) + "," + std::to_string(row.jumpers) + "\n";
  }
  return out;
}

std::optional<std::pair<NodeId, Dyadic>> first_completer(const Trace& t, std::int64_t p) {
  const BroadcastSummary* best = nullptr;
  for (const auto& b : t.broadcasts) {
    if (b.acked < 0 || b.payload.phase != p) continue;
    if (b.payload.tag != MsgTag::Value && b.payload.tag != MsgTag::State) continue;
    if (best == nullptr || b.acked < best->acked) best = &b;
  }
  if (best == nullptr) return std::nullopt;
  return std::make_pair(best->sender, best->payload.value);
}

std::vector<PhaseRangeRow> phase_ranges(const Trace& t) {
  std::vector<PhaseRangeRow> rows;
  for (std::int64_t p = 0; p <= t.max_phase(); ++p) {
    PhaseRangeRow row;
    row.p = p;
    for (NodeId i = 0; i < t.n; ++i) {
      if (is_byz(t, i)) continue;
      auto e = t.phase_entry_of(i, p);
      if (!e) continue;
      if (row.count == 0) {
        row.min = row.max = e->value;
      } else {
        if (e->value < row.min) row.min = e->value;
        if (row.max < e->value) row.max = e->value;
      }
      row.count++;
      if (p > 0 && e->entered_by == TransKind::Move) row.movers++;
      if (p > 0 && e->entered_by == TransKind::Jump) row.jumpers++;
    }
    row.range = row.max - row.min;
    if (auto ip = first_completer(t, p)) row.i_p = ip->first;
    rows.push_back(std::move(row));
  }
  return rows;
}

Verdict check_exact_halving(const Trace& t) {
  auto rows = phase_ranges(t);
  if (rows.empty() || rows[0].count == 0) return Verdict::ok("exact-halving");
  const Dyadic& range0 = rows[0].range;
  for (const auto& row : rows) {
    if (row.count == 0) continue;
    Dyadic scaled = row.range.scaled_pow2(static_cast<std::int32_t>(row.p));
    if (range0 < scaled) {
      return Verdict::fail("exact-halving", "range(V[" + std::to_string(row.p) + "]) = " +
                                                dstr(row.range) + " exceeds range(V[0])/2^p = " +
                                                dstr(range0) + "/2^" + std::to_string(row.p));
    }
  }
  return Verdict::ok("exact-halving");
}

Verdict check_contraction(const Trace& t, std::uint32_t n) {
  auto rows = phase_ranges(t);
  if (rows.empty() || rows[0].count == 0) return Verdict::ok("contraction");
  const Dyadic& range0 = rows[0].range;
  Dyadic factor = Dyadic::one_minus_pow2(n);
  Dyadic bound = range0;
  std::int64_t bound_p = 0;
  for (const auto& row : rows) {
    if (row.count == 0) continue;
    while (bound_p < row.p) {
      bound = bound * factor;
      bound_p++;
    }
    if (bound < row.range) {
      return Verdict::fail("contraction", "range(V[" + std::to_string(row.p) + "]) = " +
                                              dstr(row.range) + " exceeds range(V[0])*(1-2^-" +
                                              std::to_string(n) + ")^p = " + dstr(bound));
    }
  }
  return Verdict::ok("contraction");
}

Verdict check_per_phase_contraction(const Trace& t, std::uint32_t n) {
  auto rows = phase_ranges(t);
  Dyadic factor = Dyadic::one_minus_pow2(n);
  for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
    // Both phases must be fully populated, else the later multiset is not
    // yet the final V[p+1].
    if (rows[k].count == 0 || rows[k + 1].count < rows[k].count) continue;
    Dyadic bound = rows[k].range * factor;
    if (bound < rows[k + 1].range) {
      return Verdict::fail("per-phase-contraction",
                           "range(V[" + std::to_string(rows[k + 1].p) + "]) = " +
                               dstr(rows[k + 1].range) + " exceeds (1-2^-" + std::to_string(n) +
                               ")*range(V[" + std::to_string(rows[k].p) + "]) = " + dstr(bound));
    }
  }
  return Verdict::ok("per-phase-contraction");
}

Verdict check_mac_ac_mover_interval(const Trace& t) {
  auto rows = phase_ranges(t);
  for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
    const auto& row = rows[k];
    if (row.count == 0) continue;
    auto ip = first_completer(t, row.p);
    if (!ip) continue;
    Dyadic lo = Dyadic::average(row.min, ip->second);
    Dyadic hi = Dyadic::average(row.max, ip->second);
    for (NodeId j = 0; j < t.n; ++j) {
      if (j == ip->first || is_byz(t, j)) continue;
      auto e = t.phase_entry_of(j, row.p + 1);
      if (!e || e->entered_by != TransKind::Move) continue;
      if (e->value < lo || hi < e->value) {
        return Verdict::fail("mover-interval",
                             "mover " + std::to_string(j) + " into phase " +
                                 std::to_string(row.p + 1) + " landed at " + dstr(e->value) +
                                 " outside [" + dstr(lo) + ", " + dstr(hi) + "]",
                             {e->at});
      }
    }
  }
  return Verdict::ok("mover-interval");
}

Verdict check_mac_ac2_mover_envelope(const Trace& t, std::uint32_t n) {
  auto rows = phase_ranges(t);
  Dyadic scale = Dyadic::from_parts(1, n);  // 2^-n
  for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
    const auto& row = rows[k];
    if (row.count == 0) continue;
    auto ip = first_completer(t, row.p);
    if (!ip) continue;
    Dyadic lo = row.min + (ip->second - row.min) * scale;
    Dyadic hi = row.max - (row.max - ip->second) * scale;
    for (NodeId j = 0; j < t.n; ++j) {
      if (is_byz(t, j)) continue;
      auto e = t.phase_entry_of(j, row.p + 1);
      if (!e || e->entered_by != TransKind::Move) continue;
      if (e->value < lo || hi < e->value) {
        return Verdict::fail("mover-envelope",
                             "mover " + std::to_string(j) + " into phase " +
                                 std::to_string(row.p + 1) + " landed at " + dstr(e->value) +
                                 " outside [" + dstr(lo) + ", " + dstr(hi) + "]",
                             {e->at});
      }
    }
  }
  return Verdict::ok("mover-envelope");
}

Verdict check_small_ac_median_interval(const Trace& t) {
  auto rows = phase_ranges(t);
  for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
    const auto& row = rows[k];
    if (row.count == 0) continue;
    // lower median of V[p] (strict-majority receive sets straddle it)
    std::vector<Dyadic> vals;
    for (NodeId i = 0; i < t.n; ++i) {
      if (is_byz(t, i)) continue;
      if (auto v = t.phase_value_of(i, row.p)) vals.push_back(*v);
    }
    std::sort(vals.begin(), vals.end());
    const Dyadic& median = vals[(vals.size() - 1) / 2];
    Dyadic lo = Dyadic::average(row.min, median);
    Dyadic hi = Dyadic::average(row.max, median);
    for (NodeId j = 0; j < t.n; ++j) {
      if (is_byz(t, j)) continue;
      auto e = t.phase_entry_of(j, row.p + 1);
      if (!e || e->entered_by != TransKind::Move) continue;
      if (e->value < lo || hi < e->value) {
        return Verdict::fail("median-interval",
                             "mover " + std::to_string(j) + " into phase " +
                                 std::to_string(row.p + 1) + " landed at " + dstr(e->value) +
                                 " outside [" + dstr(lo) + ", " + dstr(hi) + "]",
                             {e->at});
      }
    }
  }
  return Verdict::ok("median-interval");
}

Verdict check_jump_provenance(const Trace& t) {
  for (NodeId j = 0; j < t.n; ++j) {
    if (is_byz(t, j)) continue;
    for (const auto& e : t.phases[static_cast<std::size_t>(j)]) {
      if (e.entered_by != TransKind::Jump) continue;
      bool matched = false;
      for (NodeId k = 0; k < t.n && !matched; ++k) {
        if (is_byz(t, k)) continue;
        auto src = t.phase_entry_of(k, e.phase);
        if (src && src->entered_by != TransKind::Jump && src->value == e.value) matched = true;
      }
      if (!matched) {
        return Verdict::fail("jump-provenance",
                             "jumper " + std::to_string(j) + " landed in phase " +
                                 std::to_string(e.phase) + " with " + dstr(e.value) +
                                 " matching no mover",
                             {e.at});
      }
    }
  }
  return Verdict::ok("jump-provenance");
}

Verdict check_common_sender(const Trace& t) {
  // accepted sender sets per (node, phase)
  std::map<std::pair<NodeId, std::int64_t>, std::uint64_t> senders;
  for (const auto& a : t.accepted) {
    senders[{a.node, a.phase}] |= std::uint64_t{1} << a.sender;
  }
  std::int64_t maxp = t.max_phase();
  for (std::int64_t p = 0; p < maxp; ++p) {
    std::vector<std::pair<NodeId, std::uint64_t>> movers;
    for (NodeId j = 0; j < t.n; ++j) {
      if (is_byz(t, j)) continue;
      auto e = t.phase_entry_of(j, p + 1);
      if (e && e->entered_by == TransKind::Move) {
        auto it = senders.find({j, p});
        // own value counts as heard from itself
        std::uint64_t s = (it == senders.end() ? 0 : it->second) | (std::uint64_t{1} << j);
        movers.emplace_back(j, s);
      }
    }
    for (std::size_t a = 0; a < movers.size(); ++a) {
      for (std::size_t b = a + 1; b < movers.size(); ++b) {
        if ((movers[a].second & movers[b].second) == 0) {
          return Verdict::fail("common-sender",
                               "movers " + std::to_string(movers[a].first) + " and " +
                                   std::to_string(movers[b].first) + " of phase " +
                                   std::to_string(p) + " share no sender");
        }
      }
    }
  }
  return Verdict::ok("common-sender");
}

AbEnvelope ab_envelope_closed_form(const std::vector<Dyadic>& w, int f, int kmax) {
  AbEnvelope env;
  const Dyadic& w1 = w.front();
  const Dyadic& wm = w[static_cast<std::size_t>(2 * f)];  // (2f+1)-st lowest
  const Dyadic& wh = w.back();
  for (int k = 0; k <= kmax; ++k) {
    Dyadic pow = Dyadic::from_parts(1, static_cast<std::uint32_t>(k));  // 2^-k
    env.a.push_back(w1 + (wm - w1) * pow);
    env.A.push_back(wh + (wm - wh) * pow);
  }
  return env;
}

AbEnvelope ab_envelope_recursive(const std::vector<Dyadic>& w, int f, int kmax) {
  AbEnvelope env;
  const Dyadic& w1 = w.front();
  const Dyadic& wm = w[static_cast<std::size_t>(2 * f)];
  const Dyadic& wh = w.back();
  env.a.push_back(wm);
  env.A.push_back(wm);
  for (int k = 1; k <= kmax; ++k) {
    env.a.push_back(Dyadic::average(env.a.back(), w1));
    env.A.push_back(Dyadic::average(env.A.back(), wh));
  }
  return env;
}

Verdict check_ab_envelope(const Trace& t, int f) {
  std::int64_t maxp = t.max_phase();
  for (std::int64_t p = 0; p < maxp; ++p) {
    std::vector<Dyadic> w;
    std::vector<std::pair<Clock, Dyadic>> next;  // chronological V[p+1]
    for (NodeId i = 0; i < t.n; ++i) {
      if (is_byz(t, i)) continue;
      if (auto e = t.phase_entry_of(i, p)) w.push_back(e->value);
      if (auto e = t.phase_entry_of(i, p + 1)) next.emplace_back(e->at, e->value);
    }
    if (static_cast<int>(w.size()) < 2 * f + 1)
      return Verdict::fail("trim-envelope", "fewer than 2f+1 honest phase-" + std::to_string(p) +
                                                " states");
    std::sort(w.begin(), w.end());
    std::sort(next.begin(), next.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    AbEnvelope env = ab_envelope_closed_form(w, f, static_cast<int>(next.size()));
    for (std::size_t k = 0; k < next.size(); ++k) {
      const Dyadic& v = next[k].second;
      const Dyadic& a = env.a[k + 1];
      const Dyadic& A = env.A[k + 1];
      if (v < a || A < v) {
        return Verdict::fail("trim-envelope",
                             "v_" + std::to_string(k + 1) + "^" + std::to_string(p + 1) + " = " +
                                 dstr(v) + " outside [" + dstr(a) + ", " + dstr(A) + "]",
                             {next[k].first});
      }
    }
  }
  return Verdict::ok("trim-envelope");
}

Classification classify_trace(const Trace& t) {
  Classification c;
  std::map<std::int64_t, PhaseClassRow> rows;
  for (const auto& b : t.broadcasts) {
    if (b.payload.origin == MsgOrigin::None) {
      c.n_rbc++;
      continue;
    }
    auto& row = rows[b.payload.phase];
    row.p = b.payload.phase;
    if (b.payload.origin == MsgOrigin::Original) {
      c.n_o++;
      row.originals++;
      if (b.payload.tag == MsgTag::Coin)
        row.original_coins++;
      else
        row.dummies++;
    } else {
      c.n_f++;
      row.followups++;
    }
  }
  // successful = original coin whose value some completed follow-up echoes
  for (auto& [p, row] : rows) {
    bool completed_followup[2] = {false, false};
    for (const auto& b : t.broadcasts) {
      if (b.payload.origin == MsgOrigin::FollowUp && b.payload.phase == p && b.acked >= 0 &&
          b.payload.bit >= 0)
        completed_followup[b.payload.bit] = true;
    }
    std::int8_t value = -1;
    for (const auto& b : t.broadcasts) {
      if (b.payload.origin == MsgOrigin::Original && b.payload.tag == MsgTag::Coin &&
          b.payload.phase == p && b.payload.bit >= 0 && completed_followup[b.payload.bit]) {
        row.successful++;
        value = b.payload.bit;
      }
    }
    if (row.successful >= 1) row.success_value = value;
  }
  for (auto& [p, row] : rows) c.phases.push_back(row);
  return c;
}

Verdict check_unique_coin_agreement(const Trace& t) {
  Classification c = classify_trace(t);
  for (const auto& row : c.phases) {
    if (row.successful != 1) continue;
    std::int8_t want = row.success_value;
    for (NodeId j = 0; j < t.n; ++j) {
      // participants: nodes that learned a phase->=p coin before entering p+1
      Clock learned_at = -1;
      for (const auto& m : t.marks) {
        if (m.kind == MarkKind::CoinLearned && m.node == j && m.phase >= row.p) {
          learned_at = m.at;
          break;
        }
      }
      if (learned_at < 0) continue;
      auto e = t.phase_entry_of(j, row.p + 1);
      if (!e || e->at < learned_at) continue;
      if (e->bit != want) {
        return Verdict::fail("unique-coin-agreement",
                             "phase " + std::to_string(row.p) +
                                 " had one successful coin with value " +
                                 std::to_string(int(want)) + " but node " + std::to_string(j) +
                                 " entered phase " + std::to_string(row.p + 1) + " with " +
                                 std::to_string(int(e->bit)),
                             {e->at});
      }
    }
  }
  return Verdict::ok("unique-coin-agreement");
}

}  // namespace macsim
