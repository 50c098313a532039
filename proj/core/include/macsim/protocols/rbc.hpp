#pragma once

#include "macsim/automaton.hpp"

namespace macsim {

// (flag, phase) cell for seen/proposal bookkeeping; unset reads as phase -1.
struct PhasedFlag {
  bool set = false;
  std::int64_t phase = 0;
  std::int64_t eff() const { return set ? phase : -1; }
};

// Randomized binary consensus: a reusable phase-tagged adopt-commit
// (VALUE/PROPOSAL) chained with a local-coin conciliator (VALUE2). Nodes jump
// to higher phases instead of storing per-phase objects.
class RbcNode final : public MacAutomaton {
 public:
  explicit RbcNode(int input) : v_(static_cast<std::int8_t>(input)) {}

  SegmentOutcome step(Hooks& h) override {
    switch (pc_) {
      case 0: {
        p_old_ = p_;
        h.snapshot_bit(p_, v_, enter_);
        pc_ = 1;
        return SegmentOutcome::broadcast(make(MsgTag::Value));
      }
      case 1: {
        if (proposal_.set && proposal_.phase >= p_) {
          v_ = proposal_bit_;
          p_ = proposal_.phase;
        }
        pc_ = 2;
        return SegmentOutcome::broadcast(make(MsgTag::Proposal));
      }
      case 2: {
        if (p_old_ != p_) {
          enter_ = TransKind::Jump;
          pc_ = 0;
          return SegmentOutcome::yield();
        }
        if (seen_[1 - v_].eff() < p_) {
          Output out;
          out.bit = v_;
          out.phase = p_;
          return SegmentOutcome::output(std::move(out));
        }
        pc_ = 3;
        return SegmentOutcome::broadcast(make(MsgTag::Value2));
      }
      default: {
        const std::int8_t opp = static_cast<std::int8_t>(1 - v_);
        if (seen2_[opp].eff() > p_) {
          v_ = opp;
          p_ = seen2_[opp].phase;
          enter_ = TransKind::Jump;
        } else {
          if (seen2_[opp].set && seen2_[opp].phase == p_) {
            v_ = static_cast<std::int8_t>(h.rand01() < 0.5 ? 0 : 1);
          }
          p_ += 1;
          enter_ = TransKind::Move;
        }
        pc_ = 0;
        return SegmentOutcome::yield();
      }
    }
  }

  // Cells advance monotonically in the stored phase (a lower-phase arrival
  // never clobbers a fresher one; late stale proposals would otherwise undo
  // an adoption the first decider's proof relies on).
  void on_message(const Payload& m, Hooks&) override {
    switch (m.tag) {
      case MsgTag::Value:
        if (m.phase >= seen_[m.bit].eff()) seen_[m.bit] = {true, m.phase};
        break;
      case MsgTag::Value2:
        if (m.phase >= seen2_[m.bit].eff()) seen2_[m.bit] = {true, m.phase};
        break;
      case MsgTag::Proposal:
        if (m.phase >= (proposal_.set ? proposal_.phase : 0)) {
          proposal_ = {true, m.phase};
          proposal_bit_ = m.bit;
        }
        break;
      default:
        break;
    }
  }

  std::unique_ptr<MacAutomaton> clone() const override { return std::make_unique<RbcNode>(*this); }

  void fingerprint(std::uint64_t& h) const override {
    h = splitmix64(h ^ (static_cast<std::uint64_t>(pc_) | (std::uint64_t(v_) << 3) |
                        (std::uint64_t(proposal_bit_ + 1) << 5)));
    h = splitmix64(h ^ static_cast<std::uint64_t>(p_));
    h = splitmix64(h ^ static_cast<std::uint64_t>(p_old_));
    for (const auto& c : {seen_[0], seen_[1], seen2_[0], seen2_[1], proposal_})
      h = splitmix64(h ^ ((c.set ? 1u : 0u) | (static_cast<std::uint64_t>(c.phase) << 1)));
  }

 private:
  Payload make(MsgTag tag) const {
    Payload m;
    m.tag = tag;
    m.bit = v_;
    m.phase = p_;
    return m;
  }

  std::int8_t v_;
  std::int64_t p_ = 0;
  std::int64_t p_old_ = 0;
  PhasedFlag seen_[2];
  PhasedFlag seen2_[2];
  PhasedFlag proposal_;
  std::int8_t proposal_bit_ = -1;
  TransKind enter_ = TransKind::Input;
  int pc_ = 0;
};

}  // namespace macsim
