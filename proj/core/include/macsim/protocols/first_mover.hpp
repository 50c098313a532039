#pragma once

#include <cmath>

#include "macsim/automaton.hpp"

namespace macsim {

// Standalone first-mover conciliator. Round k reveals the input as a COIN
// broadcast with probability 2^k/(2n'), capped at 1, else sends a DUMMY
// decoy; the loop exits once some coin value is learned, followed by one
// follow-up COIN echo.
class FirstMoverNode final : public MacAutomaton {
 public:
  FirstMoverNode(int input, std::int64_t nprime)
      : v_(static_cast<std::int8_t>(input)), nprime_(nprime) {}

  static bool reveal(Hooks& h, int k, std::int64_t nprime) {
    double threshold = k >= 63 ? 2.0 : std::ldexp(1.0, k) / (2.0 * static_cast<double>(nprime));
    return h.rand01() < threshold;
  }

  SegmentOutcome step(Hooks& h) override {
    if (pc_ == 1) {
      Output out;
      out.bit = coin_;
      out.phase = 0;
      return SegmentOutcome::output(std::move(out));
    }
    Payload m;
    m.phase = 0;
    if (coin_ >= 0) {
      m.tag = MsgTag::Coin;
      m.bit = coin_;
      m.origin = MsgOrigin::FollowUp;
      pc_ = 1;
      return SegmentOutcome::broadcast(std::move(m));
    }
    if (reveal(h, k_, nprime_)) {
      m.tag = MsgTag::Coin;
      m.bit = v_;
    } else {
      m.tag = MsgTag::Dummy;
    }
    m.origin = MsgOrigin::Original;
    k_ += 1;
    return SegmentOutcome::broadcast(std::move(m));
  }

  void on_message(const Payload& m, Hooks& h) override {
    if (m.tag == MsgTag::Coin && coin_ < 0) {
      coin_ = m.bit;
      h.mark(MarkKind::CoinLearned, 0, coin_);
    }
  }

  std::unique_ptr<MacAutomaton> clone() const override {
    return std::make_unique<FirstMoverNode>(*this);
  }

  void fingerprint(std::uint64_t& h) const override {
    h = splitmix64(h ^ (static_cast<std::uint64_t>(pc_) | (std::uint64_t(v_) << 2) |
                        (std::uint64_t(coin_ + 1) << 4) | (std::uint64_t(k_) << 8)));
  }

 private:
  std::int8_t v_;
  std::int64_t nprime_;
  std::int8_t coin_ = -1;
  int k_ = 0;
  int pc_ = 0;
};

}  // namespace macsim
