#include <doctest.h>

#include "macsim/checkers.hpp"
#include "macsim/enumerate.hpp"
#include "macsim/phase_analysis.hpp"
#include "macsim/protocols/mac_ac.hpp"
#include "macsim/runner.hpp"

using namespace macsim;

namespace {

ExperimentConfig ac_config(std::vector<std::string> inputs, const std::string& eps,
                           std::uint64_t seed = 1) {
  ExperimentConfig cfg;
  cfg.protocol = Protocol::MacAc;
  cfg.n = static_cast<int>(inputs.size());
  cfg.dyadic_inputs = std::move(inputs);
  cfg.epsilon = eps;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("all equal inputs: every phase state and output equals the input") {
  ExperimentConfig cfg = ac_config({"0.25", "0.25", "0.25"}, "2^-4");
  Trace t = run(cfg);
  REQUIRE(t.verdict == RunVerdict::Completed);
  Dyadic x = Dyadic::parse("0.25");
  for (const auto& o : t.outputs) CHECK(o.value == x);
  for (const auto& entries : t.phases)
    for (const auto& e : entries) CHECK(e.value == x);
}

TEST_CASE("n=2 inputs {0,1} lockstep: both output 1/2 at p_end = 1") {
  ExperimentConfig cfg = ac_config({"0", "1"}, "0.5");
  cfg.adversary = "lockstep";
  CHECK(resolve_p_end(cfg) == 1);
  Trace t = run(cfg);
  REQUIRE(t.verdict == RunVerdict::Completed);
  Dyadic half = Dyadic::from_parts(1, 1);
  CHECK(t.outputs[0].value == half);
  CHECK(t.outputs[1].value == half);
}

TEST_CASE("input outside [0,1] is a config error") {
  CHECK_THROWS(run(ac_config({"2", "0"}, "2^-3")));
}

TEST_CASE("mac-ac: exact halving, mover interval, jump provenance, validity") {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    ExperimentConfig cfg;
    cfg.protocol = Protocol::MacAc;
    cfg.n = 4;
    cfg.epsilon = "2^-6";
    cfg.seed = seed;
    cfg.f = 3;
    cfg.crash_hazard = seed % 3 == 0 ? 0.002 : 0.0;
    cfg.adversary = seed % 2 ? "random" : "delay";
    Trace t = run(cfg);
    REQUIRE(t.verdict == RunVerdict::Completed);
    CHECK(check_exact_halving(t).pass);
    CHECK(check_mac_ac_mover_interval(t).pass);
    CHECK(check_jump_provenance(t).pass);
    CHECK(check_validity_range(t).pass);
    CHECK(check_epsilon_agreement(t, cfg.epsilon_frac()).pass);
  }
}

TEST_CASE("mac-ac2: p_end closed forms") {
  ExperimentConfig cfg;
  cfg.protocol = Protocol::MacAc2;
  cfg.n = 2;
  cfg.n_upper = 4;
  cfg.epsilon = "0.1";
  CHECK(resolve_p_end(cfg) == 36);  // ceil(ln 0.1 / ln(15/16))
}

TEST_CASE("mac-ac2: equal inputs unchanged at any p_end") {
  ExperimentConfig cfg;
  cfg.protocol = Protocol::MacAc2;
  cfg.n = 3;
  cfg.dyadic_inputs = {"0.75", "0.75", "0.75"};
  cfg.epsilon = "2^-5";
  Trace t = run(cfg);
  REQUIRE(t.verdict == RunVerdict::Completed);
  for (const auto& o : t.outputs) CHECK(o.value == Dyadic::parse("0.75"));
}

TEST_CASE("mac-ac2: contraction and mover envelope over seeded runs") {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    ExperimentConfig cfg;
    cfg.protocol = Protocol::MacAc2;
    cfg.n = 3;
    cfg.epsilon = "2^-4";
    cfg.seed = seed;
    cfg.adversary = seed % 2 ? "random" : "antiack";
    Trace t = run(cfg);
    REQUIRE(t.verdict == RunVerdict::Completed);
    CHECK(check_contraction(t, 3).pass);
    CHECK(check_mac_ac2_mover_envelope(t, 3).pass);
    CHECK(check_validity_range(t).pass);
    CHECK(check_epsilon_agreement(t, cfg.epsilon_frac()).pass);
  }
}

TEST_CASE("mac-ac2 n=2 {0,1}: range shrink <= 3/4 on all depth-10 schedules") {
  ExperimentConfig cfg;
  cfg.protocol = Protocol::MacAc2;
  cfg.n = 2;
  cfg.dyadic_inputs = {"0", "1"};
  cfg.epsilon = "2^-3";
  EnumerateOptions opt;
  opt.max_depth = 10;
  Dyadic bound = Dyadic::one_minus_pow2(2);  // range(V[0]) = 1
  std::int64_t leaves = enumerate_schedules(
      cfg,
      [&](NodeId i) -> std::unique_ptr<MacAutomaton> {
        return std::make_unique<MacAc2Node>(Dyadic::parse(cfg.dyadic_inputs[i]),
                                            static_cast<int>(resolve_p_end(cfg)));
      },
      opt,
      [&](const MacSim& sim) {
        const Trace& t = sim.trace();
        std::vector<Dyadic> v1 = t.phase_values(1);
        if (v1.size() < 2) return;
        Dyadic lo = v1[0], hi = v1[0];
        for (const auto& v : v1) {
          if (v < lo) lo = v;
          if (hi < v) hi = v;
        }
        CHECK(hi - lo <= bound);
      });
  CHECK(leaves > 0);
}
