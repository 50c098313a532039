#pragma once

#include <functional>
#include <memory>

#include "macsim/automaton.hpp"
#include "macsim/byz.hpp"
#include "macsim/config.hpp"
#include "macsim/trace.hpp"

namespace macsim {

using LossyFactory = std::function<std::unique_ptr<LossyAutomaton>(NodeId)>;

// Fair-lossy periodic-broadcast transport. Every live node ticks at least
// once per t events (a tick enqueues one datagram per peer, subject to the
// i.i.d. drop policy); the engine enforces Eventual Progress by substituting
// a forced delivery whenever a live honest pair would otherwise go Delta
// events without one. The scheduler reorders freely within those bounds.
//
// byz_nodes picks which ids are Byzantine (at most f). Byzantine nodes
// broadcast strategy-generated (id, value, phase) triples with their own id;
// Eventual Progress never applies to their traffic.
Trace run_lossy(const ExperimentConfig& cfg, const LossyFactory& factory,
                const std::vector<NodeId>& byz_nodes, ByzStrategy* byz);

}  // namespace macsim
