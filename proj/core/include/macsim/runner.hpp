#pragma once

#include "macsim/config.hpp"
#include "macsim/trace.hpp"

namespace macsim {

// Inputs actually used by a run: config-provided when present, otherwise
// derived deterministically from the seed.
std::vector<int> resolve_bit_inputs(const ExperimentConfig& cfg);
std::vector<Dyadic> resolve_dyadic_inputs(const ExperimentConfig& cfg);
std::vector<std::vector<ScOp>> resolve_sc_ops(const ExperimentConfig& cfg);
std::vector<NodeId> resolve_byz_nodes(const ExperimentConfig& cfg);

// Termination phase of the configured protocol (exact integer evaluation of
// the p_end formulas; override honored for truncated runs).
std::int64_t resolve_p_end(const ExperimentConfig& cfg);

// One complete simulation. Pure function of (cfg, cfg.seed): identical
// arguments produce a bit-identical Trace.
Trace run(const ExperimentConfig& cfg);

// Same, with the seed replaced (convenience for sweeps).
Trace run_with_seed(ExperimentConfig cfg, std::uint64_t seed);

}  // namespace macsim
