#pragma once

#include "macsim/automaton.hpp"

namespace macsim {

// One-shot adopt-commit for binary inputs over the abstract MAC layer.
// Two broadcasts: the input as VALUE, then a PROPOSAL (own input unless some
// proposal arrived first). Commit iff the opposite value was never seen.
class AdoptCommitNode final : public MacAutomaton {
 public:
  explicit AdoptCommitNode(int input) : v_(static_cast<std::int8_t>(input)) {}

  SegmentOutcome step(Hooks& h) override {
    (void)h;
    switch (pc_) {
      case 0: {
        pc_ = 1;
        Payload m;
        m.tag = MsgTag::Value;
        m.bit = v_;
        return SegmentOutcome::broadcast(std::move(m));
      }
      case 1: {
        if (proposal_ >= 0) v_ = proposal_;
        pc_ = 2;
        Payload m;
        m.tag = MsgTag::Proposal;
        m.bit = v_;
        return SegmentOutcome::broadcast(std::move(m));
      }
      default: {
        Output out;
        out.bit = v_;
        out.phase = 0;
        out.decision = seen_[1 - v_] ? Decision::Adopt : Decision::Commit;
        return SegmentOutcome::output(std::move(out));
      }
    }
  }

  void on_message(const Payload& m, Hooks&) override {
    if (m.tag == MsgTag::Value) {
      seen_[m.bit] = true;
    } else if (m.tag == MsgTag::Proposal) {
      proposal_ = m.bit;
    }
  }

  std::unique_ptr<MacAutomaton> clone() const override {
    return std::make_unique<AdoptCommitNode>(*this);
  }

  void fingerprint(std::uint64_t& h) const override {
    h = splitmix64(h ^ (static_cast<std::uint64_t>(pc_) | (std::uint64_t(v_) << 4) |
                        (std::uint64_t(proposal_ + 1) << 8) | (std::uint64_t(seen_[0]) << 12) |
                        (std::uint64_t(seen_[1]) << 13)));
  }

 private:
  std::int8_t v_;
  std::int8_t proposal_ = -1;
  bool seen_[2] = {false, false};
  int pc_ = 0;
};

}  // namespace macsim
