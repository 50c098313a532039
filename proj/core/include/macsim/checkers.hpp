#pragma once

#include "macsim/config.hpp"
#include "macsim/history.hpp"
#include "macsim/trace.hpp"

namespace macsim {

// Verdict predicates over outputs. All comparisons are exact; honest nodes
// only (Byzantine outputs excluded, crashed nodes have no output).

// Approximate protocols: every output within [min inputs, max inputs].
Verdict check_validity_range(const Trace& t);
// Binary protocols: every output bit is some node's input.
Verdict check_validity_set(const Trace& t);
// max output - min output <= eps, exact comparison.
Verdict check_epsilon_agreement(const Trace& t, const Frac& eps);
// All decided outputs equal (binary consensus).
Verdict check_agreement(const Trace& t);
// Adopt-commit coherence: a commit of v forces every output to carry v.
Verdict check_coherence(const Trace& t);
// Adopt-commit convergence: equal inputs v force (commit, v) everywhere.
Verdict check_convergence(const Trace& t);
// Deciders span at most two consecutive phases.
Verdict check_decider_phase_span(const Trace& t);

// Structural checks over full event logs (RecordLevel::Full).
// Every acked broadcast was delivered to every node alive at the ack.
Verdict check_ack_implies_delivery(const Trace& t);
// Handler-priority drain contract: unlocked segments start with an empty queue.
Verdict check_handler_drain(const Trace& t);
// No delivery targets a crashed node.
Verdict check_no_deliver_after_crash(const Trace& t);
// Lossy Eventual Progress: every live honest pair gets a delivery in every
// Delta window (checked over applied events).
Verdict check_delta_fairness(const Trace& t, std::int64_t delta);

// All applicable checkers for a finished run of the given config.
std::vector<Verdict> check_all(const ExperimentConfig& cfg, const Trace& t);

}  // namespace macsim
