#include "macsim/adversary.hpp"

#include <stdexcept>

namespace macsim {

namespace {

// Round-robin: each node in turn gets its next pending event (incoming
// delivery first, then its ack, then its segment). Everyone's broadcast
// crosses before anybody moves on, giving synchronous rounds.
class LockstepAdversary final : public Adversary {
 public:
  std::size_t choose(const MacSim& sim, std::size_t enabled) override {
    int n = sim.n();
    for (int turn = 0; turn < n; ++turn) {
      NodeId node = static_cast<NodeId>((rr_ + turn) % n);
      std::size_t best = enabled;
      std::uint64_t best_rank = ~std::uint64_t{0};
      for (std::size_t i = 0; i < enabled; ++i) {
        Event e = sim.enabled_at(i);
        if (e.node != node || e.kind == EventKind::Crash) continue;
        std::uint64_t kind_rank = e.kind == EventKind::Deliver ? 0
                                  : e.kind == EventKind::Ack   ? 1
                                                               : 2;
        std::uint64_t r = (kind_rank << 32) | static_cast<std::uint64_t>(e.bid + 1);
        if (r < best_rank) {
          best_rank = r;
          best = i;
        }
      }
      if (best < enabled) {
        rr_ = (node + 1) % n;
        return best;
      }
    }
    return 0;  // nothing but crashes: engine treats index 0 deterministically
  }

 private:
  NodeId rr_ = 0;
};

// Uniform choice over the enabled set; optional seeded crash injection with
// random delivery subsets.
class RandomAdversary final : public Adversary {
 public:
  RandomAdversary(std::uint64_t seed, double crash_hazard)
      : rng_(seed, rng_stream::adversary()), hazard_(crash_hazard) {}

  std::size_t choose(const MacSim& sim, std::size_t enabled) override {
    if (hazard_ > 0 && sim.crashes_remaining() > 0 && rng_.uniform01() < hazard_) {
      // pick a random alive node's crash event from the tail of the set
      std::vector<std::size_t> crash_idx;
      for (std::size_t i = 0; i < enabled; ++i) {
        if (sim.enabled_at(i).kind == EventKind::Crash) crash_idx.push_back(i);
      }
      if (!crash_idx.empty()) return crash_idx[rng_.below(crash_idx.size())];
    }
    // never pick a crash by accident: restrict to non-crash events
    for (int attempts = 0; attempts < 64; ++attempts) {
      std::size_t i = static_cast<std::size_t>(rng_.below(enabled));
      if (sim.enabled_at(i).kind != EventKind::Crash) return i;
    }
    for (std::size_t i = 0; i < enabled; ++i) {
      if (sim.enabled_at(i).kind != EventKind::Crash) return i;
    }
    return 0;
  }

  std::uint32_t crash_keep_mask(const MacSim&, const Event&) override {
    return static_cast<std::uint32_t>(rng_.next_u64());
  }

 private:
  HashRng rng_;
  double hazard_;
};

// Starves one victim node's incoming deliveries for a bounded number of picks
// at a time, otherwise random. Fair in the long run.
class DelayAdversary final : public Adversary {
 public:
  DelayAdversary(std::uint64_t seed, double crash_hazard)
      : rng_(seed, rng_stream::adversary()), hazard_(crash_hazard) {}

  std::size_t choose(const MacSim& sim, std::size_t enabled) override {
    if (victim_ < 0) victim_ = static_cast<NodeId>(rng_.below(static_cast<std::uint64_t>(sim.n())));
    if (hazard_ > 0 && sim.crashes_remaining() > 0 && rng_.uniform01() < hazard_) {
      for (std::size_t i = 0; i < enabled; ++i)
        if (sim.enabled_at(i).kind == EventKind::Crash) return i;
    }
    bool starve = (deferral_++ % 48) != 47;
    std::size_t fallback = enabled;
    for (int attempts = 0; attempts < 96; ++attempts) {
      std::size_t i = static_cast<std::size_t>(rng_.below(enabled));
      Event e = sim.enabled_at(i);
      if (e.kind == EventKind::Crash) continue;
      bool touches_victim = (e.kind == EventKind::Deliver || e.kind == EventKind::Segment) &&
                            e.node == victim_;
      if (starve && touches_victim) {
        fallback = i;
        continue;
      }
      return i;
    }
    if (fallback < enabled) return fallback;
    for (std::size_t i = 0; i < enabled; ++i)
      if (sim.enabled_at(i).kind != EventKind::Crash) return i;
    return 0;
  }

  std::uint32_t crash_keep_mask(const MacSim&, const Event&) override {
    return static_cast<std::uint32_t>(rng_.next_u64());
  }

 private:
  HashRng rng_;
  double hazard_;
  NodeId victim_ = -1;
  std::uint64_t deferral_ = 0;
};

// Postpones every ack while anything else is enabled (nothing bounds ack
// latency above the last delivery).
class AntiAckAdversary final : public Adversary {
 public:
  explicit AntiAckAdversary(std::uint64_t seed) : rng_(seed, rng_stream::adversary()) {}

  std::size_t choose(const MacSim& sim, std::size_t enabled) override {
    std::size_t non_ack = 0;
    for (std::size_t i = 0; i < enabled; ++i) {
      Event e = sim.enabled_at(i);
      if (e.kind != EventKind::Ack && e.kind != EventKind::Crash) ++non_ack;
    }
    if (non_ack > 0) {
      std::uint64_t k = rng_.below(non_ack);
      for (std::size_t i = 0; i < enabled; ++i) {
        Event e = sim.enabled_at(i);
        if (e.kind != EventKind::Ack && e.kind != EventKind::Crash) {
          if (k == 0) return i;
          --k;
        }
      }
    }
    for (std::size_t i = 0; i < enabled; ++i)
      if (sim.enabled_at(i).kind == EventKind::Ack) return i;
    return 0;
  }

 private:
  HashRng rng_;
};

}  // namespace

std::unique_ptr<Adversary> make_adversary(const std::string& name, std::uint64_t seed,
                                          double crash_hazard) {
  if (name == "lockstep") return std::make_unique<LockstepAdversary>();
  if (name == "random") return std::make_unique<RandomAdversary>(seed, crash_hazard);
  if (name == "delay") return std::make_unique<DelayAdversary>(seed, crash_hazard);
  if (name == "antiack") return std::make_unique<AntiAckAdversary>(seed);
  throw std::invalid_argument("unknown adversary: " + name);
}

}  // namespace macsim
