#pragma once

#include <optional>

#include "macsim/history.hpp"
#include "macsim/trace.hpp"

namespace macsim {

// Per-phase extraction over V[p], the multiset of phase-p states (bottom
// excluded; honest nodes only).
struct PhaseRangeRow {
  std::int64_t p = 0;
  Dyadic min, max, range;
  NodeId i_p = -1;  // first completer of the phase-p broadcast (-1: none)
  int movers = 0;
  int jumpers = 0;
  int count = 0;
};

std::vector<PhaseRangeRow> phase_ranges(const Trace& t);

// CSV {p, min, max, range, i_p, movers, jumpers}; decimals at 12 digits.
std::string phase_ranges_csv(const Trace& t);

// i_p per the engine's total order: sender of the earliest acked broadcast
// tagged with phase p, together with the broadcast value (the node's v[p]).
std::optional<std::pair<NodeId, Dyadic>> first_completer(const Trace& t, std::int64_t p);

// Exact convergence facts (no tolerance):
//   halving:      range(V[p]) * 2^p <= range(V[0])
//   contraction:  range(V[p]) <= range(V[0]) * (1 - 2^-n)^p
//   per-phase:    range(V[p+1]) <= (1 - 2^-n) * range(V[p])
Verdict check_exact_halving(const Trace& t);
Verdict check_contraction(const Trace& t, std::uint32_t n);
Verdict check_per_phase_contraction(const Trace& t, std::uint32_t n);

// Mover envelopes. The MAC variants pivot on v_{i_p}[p]; the lossy crash
// variant pivots on the (lower) median of V[p].
Verdict check_mac_ac_mover_interval(const Trace& t);
Verdict check_mac_ac2_mover_envelope(const Trace& t, std::uint32_t n);
Verdict check_small_ac_median_interval(const Trace& t);
// Every jumper's state equals some mover's state in the same target phase.
Verdict check_jump_provenance(const Trace& t);
// Any two movers of one phase accepted a value from a common sender.
Verdict check_common_sender(const Trace& t);

// SmallBAC trim envelope: a/A recursions from the value-sorted W^(p); the
// k-th chronological phase-(p+1) state must land in [a_k, A_k].
struct AbEnvelope {
  std::vector<Dyadic> a, A;  // index k = 0..h
};
AbEnvelope ab_envelope_closed_form(const std::vector<Dyadic>& w_sorted, int f, int kmax);
AbEnvelope ab_envelope_recursive(const std::vector<Dyadic>& w_sorted, int f, int kmax);
Verdict check_ab_envelope(const Trace& t, int f);

// FirstMover / RBC2 broadcast classification.
struct PhaseClassRow {
  std::int64_t p = 0;
  int originals = 0;
  int original_coins = 0;
  int dummies = 0;
  int followups = 0;
  int successful = 0;           // original coins with a completed follow-up echo
  std::int8_t success_value = -1;  // when successful == originals with one value
};

struct Classification {
  std::vector<PhaseClassRow> phases;
  std::uint64_t n_rbc = 0;  // adopt-commit traffic (VALUE/PROPOSAL/VALUE2/ID)
  std::uint64_t n_o = 0;    // originals
  std::uint64_t n_f = 0;    // follow-ups
};

Classification classify_trace(const Trace& t);

// Phases with exactly one successful original coin broadcast force every
// conciliator participant's next state to the coin value.
Verdict check_unique_coin_agreement(const Trace& t);

}  // namespace macsim
