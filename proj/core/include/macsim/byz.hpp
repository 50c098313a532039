#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "macsim/rng.hpp"
#include "macsim/types.hpp"

namespace macsim {

// What a Byzantine node has observed so far (for echo-style strategies).
struct ByzObservation {
  std::optional<Dyadic> last_honest_value;
  std::int64_t max_phase_seen = 0;
};

// Per-(receiver, tick) message generator for a Byzantine node. Messages carry
// the faulty node's own id (no identity spoofing); values and phases are
// otherwise unconstrained.
class ByzStrategy {
 public:
  virtual ~ByzStrategy() = default;
  // nullopt = stay silent toward this receiver at this tick
  virtual std::optional<Payload> generate(NodeId self, NodeId receiver, std::uint64_t tick,
                                          const ByzObservation& obs, HashRng& rng) = 0;
  virtual std::unique_ptr<ByzStrategy> clone() const = 0;
};

// Catalog: "extremes", "equivocate", "mimic", "silent", "random".
std::unique_ptr<ByzStrategy> make_byz_strategy(const std::string& name);
std::vector<std::string> byz_strategy_catalog();

}  // namespace macsim
