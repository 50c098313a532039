#pragma once

#include <memory>
#include <string>

#include "macsim/mac_engine.hpp"

namespace macsim {

// Scheduler over enabled events. Message-oblivious by construction: the only
// information reachable through this interface is the redacted event skeleton
// (kind, target, sender id, per-sender seq) plus the adversary's own seeded
// stream, so choices can never depend on payload content or message type.
class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual std::size_t choose(const MacSim& sim, std::size_t enabled) = 0;
  // Delivery subset kept when the chosen event is a crash of a mid-broadcast
  // sender. Bit k keeps the k-th pending delivery (ascending receiver id).
  virtual std::uint32_t crash_keep_mask(const MacSim& sim, const Event& crash) {
    (void)sim;
    (void)crash;
    return ~std::uint32_t{0};
  }
  virtual void observe(const RedactedEvent& applied) { (void)applied; }
};

// Factory by name: "lockstep", "random", "delay", "antiack".
// crash_hazard > 0 arms seeded crash injection in the random adversary.
std::unique_ptr<Adversary> make_adversary(const std::string& name, std::uint64_t seed,
                                          double crash_hazard);

}  // namespace macsim
