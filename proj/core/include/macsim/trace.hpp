#pragma once

#include <optional>
#include <vector>

#include "macsim/types.hpp"

namespace macsim {

enum class RunVerdict : std::uint8_t { Completed, Timeout, Stalled, ConfigError };

enum class RecordLevel : std::uint8_t {
  CountersOnly,  // counters + outputs + phase snapshots
  Standard,      // + broadcast/datagram summaries, accepted values, marks
  Full,          // + per-event log (needed for structural trace checks)
};

struct TraceEvent {
  Clock time = 0;
  EventKind kind{};
  NodeId node = -1;   // receiver / target
  BcastId bid = -1;   // broadcast or datagram id
  std::int32_t aux = 0;  // Segment: (queue_len<<2)|(locked<<1)|forced; Crash: keep mask
};

struct BroadcastSummary {
  BcastId bid = -1;
  NodeId sender = -1;
  std::int32_t seq = 0;  // per-sender counter
  Payload payload{};
  Clock submitted = -1;
  Clock acked = -1;
  std::int32_t delivered_count = 0;
  bool sender_crashed_before_ack = false;
};

// Lossy-transport datagram (periodic broadcast instance to one receiver).
struct DatagramSummary {
  BcastId id = -1;
  NodeId sender = -1;
  NodeId receiver = -1;
  Payload payload{};
  Clock born = -1;
  Clock delivered = -1;
  bool forced = false;
  bool dropped = false;
};

struct PhaseEntry {
  std::int64_t phase = 0;
  TransKind entered_by = TransKind::Input;
  Dyadic value{};
  std::int8_t bit = -1;
  Clock at = 0;
};

struct Output {
  bool present = false;
  Clock at = -1;
  std::int64_t phase = -1;
  Dyadic value{};
  std::int8_t bit = -1;
  Decision decision = Decision::None;
};

// Store-collect operation history edge.
struct HistoryEvent {
  Clock time = 0;
  NodeId node = -1;
  bool is_store = false;    // else collect
  bool is_inv = false;      // else resp
  std::string value;        // store inv
  std::int64_t seq = -1;    // store inv
  View view;                // collect resp
};

// One accepted (stored) same-or-higher-phase value at a lossy-protocol node.
struct AcceptedValue {
  NodeId node = -1;
  std::int64_t phase = 0;   // receiver's phase at acceptance
  NodeId sender = -1;
  Dyadic value{};
  std::int64_t sender_phase = 0;
};

enum class MarkKind : std::uint8_t { CoinLearned, FirstMoverEntered, ForcedDelivery, ForcedCommit };

struct Mark {
  MarkKind kind{};
  NodeId node = -1;
  std::int64_t phase = -1;
  std::int8_t bit = -1;
  Clock at = 0;
};

struct Counters {
  std::uint64_t events = 0;
  std::uint64_t broadcasts = 0;
  std::uint64_t originals = 0;   // FirstMover reveal-loop broadcasts
  std::uint64_t followups = 0;
  std::uint64_t coins = 0;       // COIN-tagged broadcasts (original + follow-up)
  std::uint64_t dummies = 0;
  std::uint64_t adopt_commit_msgs = 0;  // VALUE/PROPOSAL/VALUE2/ID broadcasts
  std::uint64_t datagrams = 0;
  std::uint64_t dropped = 0;
  std::uint64_t forced_deliveries = 0;
  std::uint64_t forced_commits = 0;
  std::uint64_t crashes = 0;
};

struct Trace {
  RunVerdict verdict = RunVerdict::Completed;
  std::uint64_t seed = 0;
  Clock final_clock = 0;
  Counters counters{};
  std::vector<TraceEvent> events;                  // Full only
  std::vector<BroadcastSummary> broadcasts;        // Standard+
  std::vector<DatagramSummary> datagrams;          // Standard+ (lossy)
  std::vector<std::vector<PhaseEntry>> phases;     // per node
  std::vector<Output> outputs;                     // per node
  std::vector<bool> crashed;                       // per node
  std::vector<bool> byzantine;                     // per node
  std::vector<HistoryEvent> history;               // store-collect
  std::vector<AcceptedValue> accepted;             // lossy protocols
  std::vector<Mark> marks;

  // resolved inputs of the run (binary or dyadic, by protocol)
  std::vector<int> bit_inputs;
  std::vector<Dyadic> dyadic_inputs;

  int n = 0;

  // Phase-p states of live-path nodes, bottom excluded.
  std::vector<Dyadic> phase_values(std::int64_t p, bool honest_only = true) const;
  std::optional<Dyadic> phase_value_of(NodeId i, std::int64_t p) const;
  std::optional<PhaseEntry> phase_entry_of(NodeId i, std::int64_t p) const;
  std::int64_t max_phase() const;
};

}  // namespace macsim
