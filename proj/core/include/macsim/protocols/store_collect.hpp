#pragma once

#include <utility>
#include <vector>

#include "macsim/automaton.hpp"
#include "macsim/config.hpp"

namespace macsim {

// MAC-SC store-collect automaton, driven by a per-node op script. store(v)
// merges (v, id) into a fresh view and broadcasts it; collect broadcasts the
// local view and returns the snapshot captured at invocation. The handler
// merges every received view (newer-wins per node by engine-assigned seq).
class StoreCollectNode final : public MacAutomaton {
 public:
  StoreCollectNode(NodeId id, std::vector<ScOp> ops) : id_(id), ops_(std::move(ops)) {}

  SegmentOutcome step(Hooks& h) override {
    if (waiting_) {
      const ScOp& op = ops_[idx_];
      if (op.is_store) {
        h.history_resp(true, View{});
      } else {
        h.history_resp(false, captured_);
      }
      waiting_ = false;
      idx_ += 1;
      return SegmentOutcome::yield();
    }
    if (idx_ >= ops_.size()) return SegmentOutcome::halt();
    const ScOp& op = ops_[idx_];
    Payload m;
    m.tag = MsgTag::Store;
    if (op.is_store) {
      std::int64_t seq = next_seq_++;
      h.history_inv(true, op.value, seq);
      m.view = merge_views(view_, View{{id_, ViewEntry{op.value, seq}}});
    } else {
      h.history_inv(false, "", -1);
      captured_ = view_;
      m.view = captured_;
    }
    waiting_ = true;
    return SegmentOutcome::broadcast(std::move(m));
  }

  void on_message(const Payload& m, Hooks&) override {
    if (m.tag == MsgTag::Store) view_ = merge_views(view_, m.view);
  }

  std::unique_ptr<MacAutomaton> clone() const override {
    return std::make_unique<StoreCollectNode>(*this);
  }

  void fingerprint(std::uint64_t& h) const override {
    h = splitmix64(h ^ (static_cast<std::uint64_t>(idx_) | (std::uint64_t(waiting_) << 32)));
    for (const auto& [node, e] : view_) {
      h = splitmix64(h ^ static_cast<std::uint64_t>(node));
      h = splitmix64(h ^ static_cast<std::uint64_t>(e.seq));
      for (char ch : e.value) h = splitmix64(h ^ static_cast<std::uint64_t>(ch));
    }
  }

  const View& local_view() const { return view_; }

 private:
  NodeId id_;
  std::vector<ScOp> ops_;
  std::size_t idx_ = 0;
  bool waiting_ = false;
  std::int64_t next_seq_ = 0;
  View view_;
  View captured_;
};

}  // namespace macsim
