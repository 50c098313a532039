#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "macsim/dyadic.hpp"

namespace macsim {

using NodeId = std::int32_t;
using Clock = std::int64_t;
using BcastId = std::int32_t;

enum class EventKind : std::uint8_t { Deliver, Ack, Crash, Segment, Tick };

enum class MsgTag : std::uint8_t { Store, Value, Proposal, Value2, Coin, Dummy, Id, State };

// FirstMover bookkeeping: reveal-loop broadcasts vs the echo after learning a coin.
enum class MsgOrigin : std::uint8_t { None, Original, FollowUp };

// How a node entered a phase.
enum class TransKind : std::uint8_t { Input, Move, Jump };

enum class Decision : std::uint8_t { None, Commit, Adopt };

struct ViewEntry {
  std::string value;
  std::int64_t seq = -1;
  bool operator==(const ViewEntry&) const = default;
};

// Store-collect view: per-node latest (value, seq). Merge keeps the newer
// entry per node (seq order; equal seq with different values is a uniqueness
// violation upstream).
using View = std::map<NodeId, ViewEntry>;

View merge_views(const View& a, const View& b);

struct Payload {
  MsgTag tag = MsgTag::Dummy;
  std::int8_t bit = -1;
  std::int64_t phase = -1;
  Dyadic value{};
  MsgOrigin origin = MsgOrigin::None;
  NodeId sender = -1;  // lossy datagrams only; MAC payloads stay anonymous
  View view{};

  std::string render() const;
};

const char* to_string(EventKind k);
const char* to_string(MsgTag t);
const char* to_string(TransKind t);
const char* to_string(Decision d);

// Violation of an engine precondition: always a harness/test bug, never a
// legal protocol outcome.
struct EngineFault : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace macsim
