#pragma once

#include <memory>

#include "macsim/rng.hpp"
#include "macsim/trace.hpp"
#include "macsim/types.hpp"

namespace macsim {

// Services the engine offers a protocol automaton. The automaton never
// learns its NodeId through this interface; the engine binds identity on its
// side, which keeps the anonymous protocols' transition functions id-free.
class Hooks {
 public:
  virtual ~Hooks() = default;
  virtual double rand01() = 0;
  // v_i[p]: state at the start of phase p.
  virtual void snapshot(std::int64_t phase, const Dyadic& value, TransKind entered_by) = 0;
  virtual void snapshot_bit(std::int64_t phase, int bit, TransKind entered_by) = 0;
  virtual void mark(MarkKind kind, std::int64_t phase, int bit) = 0;
  // store-collect history edges
  virtual void history_inv(bool is_store, const std::string& value, std::int64_t seq) = 0;
  virtual void history_resp(bool is_store, const View& view) = 0;
  // lossy protocols: a received value was accepted (counted/stored) this phase
  virtual void accept(NodeId sender, std::int64_t sender_phase, const Dyadic& value) {
    (void)sender;
    (void)sender_phase;
    (void)value;
  }
};

// What one main-thread segment ended with. A segment runs atomically up to
// the next mac-broadcast call or lock boundary.
struct SegmentOutcome {
  enum class Kind : std::uint8_t { Broadcast, Yield, Output, Halt } kind = Kind::Yield;
  Payload message{};   // Broadcast
  Output out{};        // Output
  static SegmentOutcome broadcast(Payload p) {
    return SegmentOutcome{Kind::Broadcast, std::move(p), {}};
  }
  static SegmentOutcome yield() { return SegmentOutcome{Kind::Yield, {}, {}}; }
  static SegmentOutcome output(Output o) { return SegmentOutcome{Kind::Output, {}, std::move(o)}; }
  static SegmentOutcome halt() { return SegmentOutcome{Kind::Halt, {}, {}}; }
};

// A node's algorithm under the abstract MAC layer: a main thread broken into
// segments plus a message handler. The handler runs with priority over the
// main thread; the engine enforces the drain contract and lock deferral.
class MacAutomaton {
 public:
  virtual ~MacAutomaton() = default;
  virtual SegmentOutcome step(Hooks& h) = 0;
  virtual void on_message(const Payload& m, Hooks& h) = 0;
  // Main thread holds the lock (messages arriving now are deferred).
  virtual bool locked() const { return false; }
  virtual std::unique_ptr<MacAutomaton> clone() const = 0;
  virtual void fingerprint(std::uint64_t& h) const = 0;
};

// Lossy-transport automaton: periodic state broadcast, a datagram handler,
// and (for protocols with a deferred commit) a main-thread commit step.
class LossyAutomaton {
 public:
  virtual ~LossyAutomaton() = default;
  // Payload broadcast at each tick (current state); engine stamps sender id.
  virtual Payload tick_payload() const = 0;
  virtual void on_datagram(const Payload& m, Hooks& h) = 0;
  // True when the main thread has a pending phase commit to run.
  virtual bool segment_ready() const { return false; }
  virtual void run_segment(Hooks& h) {}
  virtual bool decided() const = 0;
  virtual Output output() const = 0;
  virtual std::unique_ptr<LossyAutomaton> clone() const = 0;
};

}  // namespace macsim
