#include "macsim/runner.hpp"

#include <iostream>

#include "macsim/adversary.hpp"
#include "macsim/lossy_engine.hpp"
#include "macsim/mac_engine.hpp"
#include "macsim/protocols/adopt_commit.hpp"
#include "macsim/protocols/first_mover.hpp"
#include "macsim/protocols/mac_ac.hpp"
#include "macsim/protocols/rbc.hpp"
#include "macsim/protocols/rbc2.hpp"
#include "macsim/protocols/small_ac.hpp"
#include "macsim/protocols/small_bac.hpp"
#include "macsim/protocols/store_collect.hpp"

namespace macsim {

std::vector<int> resolve_bit_inputs(const ExperimentConfig& cfg) {
  if (!cfg.bit_inputs.empty()) {
    if (static_cast<int>(cfg.bit_inputs.size()) != cfg.n)
      throw std::invalid_argument("config: need one binary input per node");
    return cfg.bit_inputs;
  }
  HashRng rng(cfg.seed, rng_stream::inputs());
  std::vector<int> out(static_cast<std::size_t>(cfg.n));
  for (auto& b : out) b = rng.coin() ? 1 : 0;
  return out;
}

std::vector<Dyadic> resolve_dyadic_inputs(const ExperimentConfig& cfg) {
  std::vector<Dyadic> out;
  if (!cfg.dyadic_inputs.empty()) {
    if (static_cast<int>(cfg.dyadic_inputs.size()) != cfg.n)
      throw std::invalid_argument("config: need one input per node");
    for (const auto& s : cfg.dyadic_inputs) out.push_back(Dyadic::parse(s));
    return out;
  }
  HashRng rng(cfg.seed, rng_stream::inputs());
  for (int i = 0; i < cfg.n; ++i)
    out.push_back(Dyadic::from_parts(static_cast<std::int64_t>(rng.below(1025)), 10));
  return out;
}

std::vector<std::vector<ScOp>> resolve_sc_ops(const ExperimentConfig& cfg) {
  if (!cfg.sc_ops.empty()) {
    if (static_cast<int>(cfg.sc_ops.size()) != cfg.n)
      throw std::invalid_argument("config: need one op script per node");
    return cfg.sc_ops;
  }
  std::vector<std::vector<ScOp>> scripts;
  for (NodeId i = 0; i < cfg.n; ++i) {
    HashRng rng(cfg.seed, rng_stream::workload(i));
    std::vector<ScOp> ops;
    std::size_t count = 2 + rng.below(2);
    for (std::size_t k = 0; k < count; ++k) {
      if (rng.coin()) {
        ops.push_back(ScOp{true, "v" + std::to_string(i) + "_" + std::to_string(k)});
      } else {
        ops.push_back(ScOp{false, ""});
      }
    }
    scripts.push_back(std::move(ops));
  }
  return scripts;
}

std::vector<NodeId> resolve_byz_nodes(const ExperimentConfig& cfg) {
  std::vector<NodeId> out;
  if (cfg.protocol != Protocol::SmallBac || cfg.f == 0 || cfg.byz_strategy.empty()) return out;
  HashRng rng(cfg.seed, rng_stream::byz(0x7ff));
  std::vector<NodeId> all(static_cast<std::size_t>(cfg.n));
  for (NodeId i = 0; i < cfg.n; ++i) all[static_cast<std::size_t>(i)] = i;
  for (int k = 0; k < cfg.f; ++k) {
    std::size_t pick = static_cast<std::size_t>(rng.below(all.size()));
    out.push_back(all[pick]);
    all.erase(all.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t resolve_p_end(const ExperimentConfig& cfg) {
  if (cfg.p_end_override >= 0) return cfg.p_end_override;
  switch (cfg.protocol) {
    case Protocol::MacAc:
    case Protocol::SmallAc:
      return p_end_halving(cfg.epsilon_frac());
    case Protocol::MacAc2:
      return p_end_contraction(static_cast<std::uint32_t>(cfg.n_upper > 0 ? cfg.n_upper : cfg.n),
                               cfg.epsilon_frac());
    case Protocol::SmallBac:
      return p_end_contraction(static_cast<std::uint32_t>(cfg.n), cfg.epsilon_frac());
    default:
      return 0;
  }
}

namespace {

Trace run_mac_protocol(const ExperimentConfig& cfg) {
  AutomatonFactory factory;
  std::vector<int> bits;
  std::vector<Dyadic> vals;
  switch (cfg.protocol) {
    case Protocol::AdoptCommit: {
      bits = resolve_bit_inputs(cfg);
      factory = [&](NodeId i) -> std::unique_ptr<MacAutomaton> {
        return std::make_unique<AdoptCommitNode>(bits[static_cast<std::size_t>(i)]);
      };
      break;
    }
    case Protocol::Rbc: {
      bits = resolve_bit_inputs(cfg);
      factory = [&](NodeId i) -> std::unique_ptr<MacAutomaton> {
        return std::make_unique<RbcNode>(bits[static_cast<std::size_t>(i)]);
      };
      break;
    }
    case Protocol::Rbc2: {
      bits = resolve_bit_inputs(cfg);
      factory = [&](NodeId i) -> std::unique_ptr<MacAutomaton> {
        return std::make_unique<Rbc2Node>(bits[static_cast<std::size_t>(i)], cfg.n0, cfg.c);
      };
      break;
    }
    case Protocol::FirstMover: {
      bits = resolve_bit_inputs(cfg);
      factory = [&](NodeId i) -> std::unique_ptr<MacAutomaton> {
        return std::make_unique<FirstMoverNode>(bits[static_cast<std::size_t>(i)], cfg.nprime);
      };
      break;
    }
    case Protocol::MacAc: {
      vals = resolve_dyadic_inputs(cfg);
      int p_end = static_cast<int>(resolve_p_end(cfg));
      factory = [&, p_end](NodeId i) -> std::unique_ptr<MacAutomaton> {
        return std::make_unique<MacAcNode>(vals[static_cast<std::size_t>(i)], p_end);
      };
      break;
    }
    case Protocol::MacAc2: {
      vals = resolve_dyadic_inputs(cfg);
      if (cfg.n_upper > 0 && cfg.n_upper < cfg.n) {
        std::cerr << "warning: n_upper=" << cfg.n_upper << " below actual n=" << cfg.n
                  << "; convergence undefined\n";
      }
      int p_end = static_cast<int>(resolve_p_end(cfg));
      factory = [&, p_end](NodeId i) -> std::unique_ptr<MacAutomaton> {
        return std::make_unique<MacAc2Node>(vals[static_cast<std::size_t>(i)], p_end);
      };
      break;
    }
    case Protocol::StoreCollect: {
      auto scripts = resolve_sc_ops(cfg);
      factory = [scripts](NodeId i) -> std::unique_ptr<MacAutomaton> {
        return std::make_unique<StoreCollectNode>(i, scripts[static_cast<std::size_t>(i)]);
      };
      auto adv = make_adversary(cfg.adversary, cfg.seed, cfg.crash_hazard);
      Trace t = run_mac(cfg, factory, *adv);
      return t;
    }
    default:
      throw std::invalid_argument("protocol/transport mismatch");
  }
  auto adv = make_adversary(cfg.adversary, cfg.seed, cfg.crash_hazard);
  Trace t = run_mac(cfg, factory, *adv);
  t.bit_inputs = bits;
  t.dyadic_inputs = vals;
  return t;
}

Trace run_lossy_protocol(const ExperimentConfig& cfg) {
  std::vector<Dyadic> vals = resolve_dyadic_inputs(cfg);
  std::int64_t p_end = resolve_p_end(cfg);
  std::vector<NodeId> byz_nodes = resolve_byz_nodes(cfg);
  auto is_byz = [&](NodeId i) {
    return std::find(byz_nodes.begin(), byz_nodes.end(), i) != byz_nodes.end();
  };
  std::unique_ptr<ByzStrategy> byz;
  if (!byz_nodes.empty()) byz = make_byz_strategy(cfg.byz_strategy);
  LossyFactory factory;
  if (cfg.protocol == Protocol::SmallAc) {
    factory = [&](NodeId i) -> std::unique_ptr<LossyAutomaton> {
      return std::make_unique<SmallAcNode>(i, cfg.n, cfg.f, vals[static_cast<std::size_t>(i)],
                                           p_end);
    };
  } else {
    factory = [&](NodeId i) -> std::unique_ptr<LossyAutomaton> {
      return std::make_unique<SmallBacNode>(i, cfg.n, cfg.f, vals[static_cast<std::size_t>(i)],
                                            p_end, cfg.include_self_value);
    };
  }
  (void)is_byz;
  Trace t = run_lossy(cfg, factory, byz_nodes, byz.get());
  t.dyadic_inputs = vals;
  return t;
}

}  // namespace

Trace run(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.transport == Transport::Lossy) return run_lossy_protocol(cfg);
  if (cfg.protocol == Protocol::MacAc2 && !cfg.gate_start) {
    ExperimentConfig gated = cfg;
    gated.gate_start = true;
    return run_mac_protocol(gated);
  }
  return run_mac_protocol(cfg);
}

Trace run_with_seed(ExperimentConfig cfg, std::uint64_t seed) {
  cfg.seed = seed;
  return run(cfg);
}

}  // namespace macsim
