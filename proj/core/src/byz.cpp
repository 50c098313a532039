#include "macsim/byz.hpp"

#include <stdexcept>

namespace macsim {

namespace {

Payload state_msg(NodeId self, Dyadic v, std::int64_t phase) {
  Payload m;
  m.tag = MsgTag::State;
  m.sender = self;
  m.value = std::move(v);
  m.phase = phase;
  return m;
}

// Alternating huge positive / huge negative values, phase always current-max.
class ExtremesStrategy final : public ByzStrategy {
 public:
  std::optional<Payload> generate(NodeId self, NodeId, std::uint64_t tick,
                                  const ByzObservation& obs, HashRng&) override {
    Dyadic big = Dyadic::from_int(1'000'000);
    return state_msg(self, (tick & 1) ? -big : big, obs.max_phase_seen);
  }
  std::unique_ptr<ByzStrategy> clone() const override {
    return std::make_unique<ExtremesStrategy>(*this);
  }
};

// Different value per receiver in the same tick.
class EquivocateStrategy final : public ByzStrategy {
 public:
  std::optional<Payload> generate(NodeId self, NodeId receiver, std::uint64_t,
                                  const ByzObservation& obs, HashRng& rng) override {
    // receiver-determined split around [0,1], plus seeded jitter
    std::int64_t num = (receiver % 2 == 0) ? -static_cast<std::int64_t>(rng.below(512))
                                           : 1024 + static_cast<std::int64_t>(rng.below(512));
    return state_msg(self, Dyadic::from_parts(num, 10), obs.max_phase_seen);
  }
  std::unique_ptr<ByzStrategy> clone() const override {
    return std::make_unique<EquivocateStrategy>(*this);
  }
};

// Echoes the last honest value it heard, plus dyadic jitter.
class MimicStrategy final : public ByzStrategy {
 public:
  std::optional<Payload> generate(NodeId self, NodeId, std::uint64_t,
                                  const ByzObservation& obs, HashRng& rng) override {
    Dyadic base = obs.last_honest_value.value_or(Dyadic::from_parts(1, 1));
    std::int64_t jitter = static_cast<std::int64_t>(rng.below(257)) - 128;
    return state_msg(self, base + Dyadic::from_parts(jitter, 10), obs.max_phase_seen);
  }
  std::unique_ptr<ByzStrategy> clone() const override {
    return std::make_unique<MimicStrategy>(*this);
  }
};

class SilentStrategy final : public ByzStrategy {
 public:
  std::optional<Payload> generate(NodeId, NodeId, std::uint64_t, const ByzObservation&,
                                  HashRng&) override {
    return std::nullopt;
  }
  std::unique_ptr<ByzStrategy> clone() const override {
    return std::make_unique<SilentStrategy>(*this);
  }
};

// Seeded noise in value and phase (phases may run ahead or behind).
class RandomStrategy final : public ByzStrategy {
 public:
  std::optional<Payload> generate(NodeId self, NodeId, std::uint64_t,
                                  const ByzObservation& obs, HashRng& rng) override {
    if (rng.below(8) == 0) return std::nullopt;
    std::int64_t num = static_cast<std::int64_t>(rng.below(3 << 10)) - (1 << 10);
    std::int64_t phase = obs.max_phase_seen + static_cast<std::int64_t>(rng.below(4)) - 1;
    return state_msg(self, Dyadic::from_parts(num, 10), std::max<std::int64_t>(0, phase));
  }
  std::unique_ptr<ByzStrategy> clone() const override {
    return std::make_unique<RandomStrategy>(*this);
  }
};

}  // namespace

std::unique_ptr<ByzStrategy> make_byz_strategy(const std::string& name) {
  if (name == "extremes") return std::make_unique<ExtremesStrategy>();
  if (name == "equivocate") return std::make_unique<EquivocateStrategy>();
  if (name == "mimic") return std::make_unique<MimicStrategy>();
  if (name == "silent") return std::make_unique<SilentStrategy>();
  if (name == "random") return std::make_unique<RandomStrategy>();
  throw std::invalid_argument("unknown Byzantine strategy: " + name);
}

std::vector<std::string> byz_strategy_catalog() {
  return {"extremes", "equivocate", "mimic", "silent", "random"};
}

}  // namespace macsim
