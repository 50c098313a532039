#pragma once

#include <cstdint>

#include "macsim/automaton.hpp"

namespace macsim {

// Crash-tolerant approximate consensus over fair-lossy links (n >= 2f+1).
// Periodic (id, v, p) broadcasts; a higher-phase receipt stages a jump, the
// (n-f)-th distinct same-phase sender stages a move to (vmin+vmax)/2. The
// staged (v_next, p_next) commits on the main thread.
class SmallAcNode final : public LossyAutomaton {
 public:
  SmallAcNode(NodeId id, int n, int f, Dyadic input, std::int64_t p_end)
      : id_(id),
        n_(n),
        f_(f),
        p_end_(p_end),
        v_(std::move(input)),
        v_next_(v_),
        vmin_(v_),
        vmax_(v_) {
    heard_ = std::uint64_t{1} << id_;
  }

  Payload tick_payload() const override {
    Payload m;
    m.tag = MsgTag::State;
    m.sender = id_;
    m.value = v_;
    m.phase = p_;
    return m;
  }

  void on_datagram(const Payload& m, Hooks& h) override {
    if (decided_) return;
    if (m.phase > p_) {
      v_next_ = m.value;
      p_next_ = m.phase;
      staged_ = TransKind::Jump;
    } else if (m.phase == p_ && !(heard_ >> m.sender & 1)) {
      heard_ |= std::uint64_t{1} << m.sender;
      h.accept(m.sender, m.phase, m.value);
      if (m.value < vmin_) vmin_ = m.value;
      if (vmax_ < m.value) vmax_ = m.value;
      if (heard_count() >= n_ - f_) {
        v_next_ = Dyadic::average(vmin_, vmax_);
        p_next_ = p_ + 1;
        staged_ = TransKind::Move;
      }
    }
  }

  bool segment_ready() const override { return !decided_ && p_next_ > p_; }

  void run_segment(Hooks& h) override {
    v_ = v_next_;
    p_ = p_next_;
    vmin_ = v_;
    vmax_ = v_;
    heard_ = std::uint64_t{1} << id_;
    h.snapshot(p_, v_, staged_);
    if (p_ >= p_end_) decided_ = true;
  }

  bool decided() const override { return decided_; }

  Output output() const override {
    Output out;
    out.present = decided_;
    out.value = v_;
    out.phase = p_;
    return out;
  }

  std::unique_ptr<LossyAutomaton> clone() const override {
    return std::make_unique<SmallAcNode>(*this);
  }

 private:
  int heard_count() const { return __builtin_popcountll(heard_); }

  NodeId id_;
  int n_, f_;
  std::int64_t p_end_;
  Dyadic v_, v_next_;
  Dyadic vmin_, vmax_;
  std::int64_t p_ = 0, p_next_ = 0;
  std::uint64_t heard_ = 0;  // R: bit per sender heard this phase
  TransKind staged_ = TransKind::Move;
  bool decided_ = false;
};

}  // namespace macsim
