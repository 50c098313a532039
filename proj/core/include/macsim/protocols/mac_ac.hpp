#pragma once

#include "macsim/automaton.hpp"

namespace macsim {

// Iterative approximate consensus over the abstract MAC layer. Each phase:
// broadcast the state, then under the lock either move to (vmin+vmax)/2 or
// rerun the phase at a jumped-to position. The handler owns vmin/vmax; the
// lock defers its invocations around the update.
//
// The receive window of phase p is [window reset, post-broadcast lock]. The
// reset happens atomically with whatever enters the phase (the move under
// the lock, or the jump inside the handler), so a processed same-phase state
// is never wiped: the mover interval around v_{i_p}[p] is then exact.
class MacAcNode final : public MacAutomaton {
 public:
  MacAcNode(Dyadic input, int p_end)
      : v_(std::move(input)), vmin_(v_), vmax_(v_), p_end_(p_end) {}

  SegmentOutcome step(Hooks& h) override {
    switch (pc_) {
      case 0: {  // phase head: record v[p], announce (v, p)
        if (p_ >= p_end_) {
          Output out;
          out.value = v_;
          out.phase = p_;
          return SegmentOutcome::output(std::move(out));
        }
        if (p_ != snap_p_ || snap_p_ < 0) {
          h.snapshot(p_, v_, enter_);
          snap_p_ = p_;
        }
        pc_ = 1;
        Payload m;
        m.tag = MsgTag::Value;
        m.value = v_;
        m.phase = p_;
        return SegmentOutcome::broadcast(std::move(m));
      }
      case 1: {
        locked_ = true;
        pc_ = 2;
        return SegmentOutcome::yield();
      }
      default: {  // locked: move or accept the jump, reset the window
        if (!jump_) {
          v_ = Dyadic::average(vmin_, vmax_);
          p_ += 1;
          enter_ = TransKind::Move;
          vmin_ = v_;
          vmax_ = v_;
        }
        // jump case: the handler already moved the window to the landing
        // phase; receipts since then stay valid
        jump_ = false;
        locked_ = false;
        pc_ = 0;
        return SegmentOutcome::yield();
      }
    }
  }

  void on_message(const Payload& m, Hooks&) override {
    if (m.phase > p_) {
      p_ = m.phase;
      v_ = m.value;
      vmin_ = v_;
      vmax_ = v_;
      jump_ = true;
      enter_ = TransKind::Jump;
    } else if (m.phase == p_) {
      if (m.value < vmin_) vmin_ = m.value;
      if (vmax_ < m.value) vmax_ = m.value;
    }
  }

  bool locked() const override { return locked_; }

  std::unique_ptr<MacAutomaton> clone() const override { return std::make_unique<MacAcNode>(*this); }

  void fingerprint(std::uint64_t& h) const override {
    h = splitmix64(h ^ (static_cast<std::uint64_t>(pc_) | (std::uint64_t(jump_) << 4) |
                        (std::uint64_t(locked_) << 5)));
    h = splitmix64(h ^ static_cast<std::uint64_t>(p_));
    v_.hash_into(h);
    vmin_.hash_into(h);
    vmax_.hash_into(h);
  }

 private:
  Dyadic v_;
  Dyadic vmin_, vmax_;
  std::int64_t p_ = 0;
  std::int64_t snap_p_ = -1;
  int p_end_;
  bool jump_ = false;
  bool locked_ = false;
  TransKind enter_ = TransKind::Input;
  int pc_ = 0;
};

// Lock-free variant: same-phase receipts fold straight into the state,
// v <- (v + received)/2; higher-phase receipts jump. Storage is just
// (value, phase, jump flag); convergence degrades to (1 - 2^-n) per phase.
//
// The move/jump resolution is fused with the next phase's announcement, so
// v[p] (the snapshot) is exactly what the phase-p broadcast carries and every
// fold lands after the announcement; the fold-depth bound behind the 2^-n
// envelope then holds. The engine additionally withholds deliveries until a
// node announced phase 0 (see ExperimentConfig::gate_start).
class MacAc2Node final : public MacAutomaton {
 public:
  MacAc2Node(Dyadic input, int p_end) : v_(std::move(input)), p_end_(p_end) {}

  SegmentOutcome step(Hooks& h) override {
    if (pc_ == 1) {  // resolution fused with the next announcement
      if (!jump_) {
        p_ += 1;
        enter_ = TransKind::Move;
      }
      jump_ = false;
    }
    if (p_ >= p_end_) {
      Output out;
      out.value = v_;
      out.phase = p_;
      return SegmentOutcome::output(std::move(out));
    }
    if (p_ != snap_p_ || snap_p_ < 0) {
      h.snapshot(p_, v_, enter_);
      snap_p_ = p_;
    }
    pc_ = 1;
    Payload m;
    m.tag = MsgTag::Value;
    m.value = v_;
    m.phase = p_;
    return SegmentOutcome::broadcast(std::move(m));
  }

  void on_message(const Payload& m, Hooks&) override {
    if (m.phase > p_) {
      p_ = m.phase;
      v_ = m.value;
      jump_ = true;
      enter_ = TransKind::Jump;
    } else if (m.phase == p_) {
      v_ = Dyadic::average(v_, m.value);
    }
  }

  std::unique_ptr<MacAutomaton> clone() const override {
    return std::make_unique<MacAc2Node>(*this);
  }

  void fingerprint(std::uint64_t& h) const override {
    h = splitmix64(h ^ (static_cast<std::uint64_t>(pc_) | (std::uint64_t(jump_) << 4)));
    h = splitmix64(h ^ static_cast<std::uint64_t>(p_));
    v_.hash_into(h);
  }

 private:
  Dyadic v_;
  std::int64_t p_ = 0;
  std::int64_t snap_p_ = -1;
  int p_end_;
  bool jump_ = false;
  TransKind enter_ = TransKind::Input;
  int pc_ = 0;
};

}  // namespace macsim
