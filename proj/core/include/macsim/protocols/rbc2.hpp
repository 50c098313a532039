#pragma once

#include <cmath>

#include "macsim/protocols/first_mover.hpp"
#include "macsim/protocols/rbc.hpp"

namespace macsim {

// Randomized binary consensus with the first-mover conciliator inlined and a
// local doubling estimate of the system size: n' = 2^floor(p/c) * n0. A COIN
// from a higher phase p makes the receiver jump to phase p+1 with the coin's
// value; the handler redirects the main thread back to the loop head, which
// the engine realizes as a restart flag checked at every segment boundary.
class Rbc2Node final : public MacAutomaton {
 public:
  Rbc2Node(int input, std::int64_t n0, double c)
      : v_(static_cast<std::int8_t>(input)), n0_(n0), c_(c) {}

  SegmentOutcome step(Hooks& h) override {
    if (restart_ && pc_ != 0) {
      restart_ = false;
      pc_ = 1;
    }
    switch (pc_) {
      case 0: {  // one ID broadcast up front; receivers ignore it
        pc_ = 1;
        Payload m;
        m.tag = MsgTag::Id;
        return SegmentOutcome::broadcast(std::move(m));
      }
      case 1: {
        p_old_ = p_;
        h.snapshot_bit(p_, v_, enter_);
        pc_ = 2;
        return SegmentOutcome::broadcast(make(MsgTag::Value));
      }
      case 2: {
        if (proposal_.set && proposal_.phase >= p_) {
          v_ = proposal_bit_;
          p_ = proposal_.phase;
        }
        pc_ = 3;
        return SegmentOutcome::broadcast(make(MsgTag::Proposal));
      }
      case 3: {
        if (p_old_ != p_) {
          enter_ = TransKind::Jump;
          pc_ = 1;
          return SegmentOutcome::yield();
        }
        if (seen_[1 - v_].eff() < p_) {
          Output out;
          out.bit = v_;
          out.phase = p_;
          return SegmentOutcome::output(std::move(out));
        }
        pc_ = 4;
        return SegmentOutcome::broadcast(make(MsgTag::Value2));
      }
      case 4: {
        const std::int8_t opp = static_cast<std::int8_t>(1 - v_);
        if (seen2_[opp].eff() > p_) {
          v_ = opp;
          p_ = seen2_[opp].phase;
          enter_ = TransKind::Jump;
          pc_ = 1;
          return SegmentOutcome::yield();
        }
        if (seen2_[opp].set && seen2_[opp].phase == p_) {
          // enter the first-mover conciliator for this phase
          std::int64_t scale = static_cast<std::int64_t>(
              std::floor(static_cast<double>(p_) / c_));
          nprime_ = (scale >= 62 ? (std::int64_t{1} << 62) : (std::int64_t{1} << scale)) * n0_;
          k_ = 0;
          h.mark(MarkKind::FirstMoverEntered, p_, v_);
          pc_ = 5;
          return fm_step(h);
        }
        p_ += 1;
        enter_ = TransKind::Move;
        pc_ = 1;
        return SegmentOutcome::yield();
      }
      case 5:
        return fm_step(h);
      default: {  // follow-up completed
        v_ = coin_bit_;
        p_ = coin_.phase + 1;
        enter_ = TransKind::Move;
        pc_ = 1;
        return SegmentOutcome::yield();
      }
    }
  }

  void on_message(const Payload& m, Hooks& h) override {
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
      case MsgTag::Coin:
        if (m.phase == p_ && m.phase > coin_.eff()) {
          coin_ = {true, m.phase};
          coin_bit_ = m.bit;
          h.mark(MarkKind::CoinLearned, m.phase, coin_bit_);
        } else if (m.phase > p_) {
          v_ = m.bit;
          p_ = m.phase + 1;
          enter_ = TransKind::Jump;
          restart_ = true;
        }
        break;
      default:
        break;  // DUMMY, ID: do nothing
    }
  }

  std::unique_ptr<MacAutomaton> clone() const override { return std::make_unique<Rbc2Node>(*this); }

  void fingerprint(std::uint64_t& h) const override {
    h = splitmix64(h ^ (static_cast<std::uint64_t>(pc_) | (std::uint64_t(v_) << 4) |
                        (std::uint64_t(restart_) << 6) | (std::uint64_t(k_) << 8)));
    h = splitmix64(h ^ static_cast<std::uint64_t>(p_));
    h = splitmix64(h ^ static_cast<std::uint64_t>(p_old_));
    h = splitmix64(h ^ (static_cast<std::uint64_t>(coin_bit_ + 1) |
                        (static_cast<std::uint64_t>(proposal_bit_ + 1) << 4)));
    for (const auto& cell : {seen_[0], seen_[1], seen2_[0], seen2_[1], proposal_, coin_})
      h = splitmix64(h ^ ((cell.set ? 1u : 0u) | (static_cast<std::uint64_t>(cell.phase) << 1)));
  }

  std::int64_t nprime() const { return nprime_; }

 private:
  Payload make(MsgTag tag) const {
    Payload m;
    m.tag = tag;
    m.bit = v_;
    m.phase = p_;
    return m;
  }

  SegmentOutcome fm_step(Hooks& h) {
    Payload m;
    m.phase = p_;
    if (coin_.eff() >= p_) {
      // follow-up echoes the learned coin (Alg. MAC-FirstMover semantics)
      m.tag = MsgTag::Coin;
      m.bit = coin_bit_;
      m.origin = MsgOrigin::FollowUp;
      pc_ = 6;
      return SegmentOutcome::broadcast(std::move(m));
    }
    if (FirstMoverNode::reveal(h, k_, nprime_)) {
      m.tag = MsgTag::Coin;
      m.bit = v_;
    } else {
      m.tag = MsgTag::Dummy;
    }
    m.origin = MsgOrigin::Original;
    k_ += 1;
    pc_ = 5;
    return SegmentOutcome::broadcast(std::move(m));
  }

  std::int8_t v_;
  std::int64_t n0_;
  double c_;
  std::int64_t p_ = 0;
  std::int64_t p_old_ = 0;
  PhasedFlag seen_[2];
  PhasedFlag seen2_[2];
  PhasedFlag proposal_;
  std::int8_t proposal_bit_ = -1;
  PhasedFlag coin_ = {false, -1};
  std::int8_t coin_bit_ = -1;
  std::int64_t nprime_ = 1;
  int k_ = 0;
  bool restart_ = false;
  TransKind enter_ = TransKind::Input;
  int pc_ = 0;
};

}  // namespace macsim
