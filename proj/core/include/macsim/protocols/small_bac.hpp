#pragma once

#include <algorithm>
#include <vector>

#include "macsim/automaton.hpp"

namespace macsim {

// Byzantine-tolerant approximate consensus over fair-lossy links (n >= 5f+1).
// A node stores only the f+1 lowest and f+1 highest values accepted this
// phase; on the (n-f)-th distinct sender with phase >= p it updates to the
// midpoint of the (f+1)-st lowest and (f+1)-st highest and advances. No
// phase skipping.
class SmallBacNode final : public LossyAutomaton {
 public:
  SmallBacNode(NodeId id, int n, int f, Dyadic input, std::int64_t p_end,
               bool include_self_value)
      : id_(id),
        n_(n),
        f_(f),
        p_end_(p_end),
        include_self_(include_self_value),
        v_(std::move(input)) {
    reset();
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
    if (m.phase >= p_ && !(heard_ >> m.sender & 1)) {
      heard_ |= std::uint64_t{1} << m.sender;
      h.accept(m.sender, m.phase, m.value);
      store(m.value);
      if (heard_count() >= n_ - f_) {
        v_ = Dyadic::average(low_.back(), high_.front());
        p_ += 1;
        reset();
        h.snapshot(p_, v_, TransKind::Move);
        if (p_ >= p_end_) decided_ = true;
      }
    }
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
    return std::make_unique<SmallBacNode>(*this);
  }

  // trim bookkeeping, exposed for the unit oracle
  const std::vector<Dyadic>& low() const { return low_; }
  const std::vector<Dyadic>& high() const { return high_; }
  void store(const Dyadic& w) {
    // low_ ascending, keeps the f+1 minima; high_ ascending, keeps the f+1
    // maxima; one value may sit in both.
    if (low_.size() <= static_cast<std::size_t>(f_)) {
      low_.insert(std::upper_bound(low_.begin(), low_.end(), w), w);
    } else if (w < low_.back()) {
      low_.pop_back();
      low_.insert(std::upper_bound(low_.begin(), low_.end(), w), w);
    }
    if (high_.size() <= static_cast<std::size_t>(f_)) {
      high_.insert(std::upper_bound(high_.begin(), high_.end(), w), w);
    } else if (high_.front() < w) {
      high_.erase(high_.begin());
      high_.insert(std::upper_bound(high_.begin(), high_.end(), w), w);
    }
  }

 private:
  int heard_count() const { return __builtin_popcountll(heard_); }

  void reset() {
    heard_ = std::uint64_t{1} << id_;
    low_.clear();
    high_.clear();
    if (include_self_) store(v_);
  }

  NodeId id_;
  int n_, f_;
  std::int64_t p_end_;
  bool include_self_;
  Dyadic v_;
  std::int64_t p_ = 0;
  std::uint64_t heard_ = 0;
  std::vector<Dyadic> low_, high_;
  bool decided_ = false;
};

}  // namespace macsim
