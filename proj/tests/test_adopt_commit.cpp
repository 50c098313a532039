#include <doctest.h>

#include "macsim/checkers.hpp"
#include "macsim/enumerate.hpp"
#include "macsim/protocols/adopt_commit.hpp"
#include "macsim/runner.hpp"

using namespace macsim;

namespace {

ExperimentConfig ac_config(std::vector<int> inputs, int f = 0) {
  ExperimentConfig cfg;
  cfg.protocol = Protocol::AdoptCommit;
  cfg.n = static_cast<int>(inputs.size());
  cfg.f = f;
  cfg.bit_inputs = std::move(inputs);
  return cfg;
}

}  // namespace

TEST_CASE("equal inputs: every node outputs (commit, v) under any adversary") {
  for (int v : {0, 1}) {
    for (const char* adv : {"lockstep", "random", "delay", "antiack"}) {
      ExperimentConfig cfg = ac_config({v, v, v});
      cfg.adversary = adv;
      cfg.seed = 3;
      Trace t = run(cfg);
      REQUIRE(t.verdict == RunVerdict::Completed);
      for (const auto& o : t.outputs) {
        CHECK(o.present);
        CHECK(o.decision == Decision::Commit);
        CHECK(o.bit == v);
      }
      CHECK(check_convergence(t).pass);
    }
  }
}

TEST_CASE("n=2 mixed inputs under lockstep: both values cross, both adopt") {
  ExperimentConfig cfg = ac_config({0, 1});
  cfg.adversary = "lockstep";
  Trace t = run(cfg);
  REQUIRE(t.verdict == RunVerdict::Completed);
  CHECK(t.outputs[0].decision == Decision::Adopt);
  CHECK(t.outputs[1].decision == Decision::Adopt);
  CHECK(check_coherence(t).pass);
  CHECK(check_validity_set(t).pass);
}

TEST_CASE("exhaustive n=2: validity, coherence, convergence on every schedule") {
  // memoized reachable-state enumeration with crashes and all delivery
  // subsets; checks every terminal state
  for (int a = 0; a <= 1; ++a) {
    for (int b = 0; b <= 1; ++b) {
      ExperimentConfig cfg = ac_config({a, b}, 2);
      EnumerateOptions opt;
      opt.max_depth = -1;
      opt.include_crashes = true;
      opt.include_crash_subsets = true;
      std::int64_t terminals = 0;
      std::int64_t states = enumerate_reachable(
          cfg,
          [&](NodeId i) -> std::unique_ptr<MacAutomaton> {
            return std::make_unique<AdoptCommitNode>(cfg.bit_inputs[static_cast<std::size_t>(i)]);
          },
          opt,
          [&](const MacSim& sim) {
            ++terminals;
            Trace t = sim.trace();
            t.bit_inputs = cfg.bit_inputs;
            CHECK(check_validity_set(t).pass);
            CHECK(check_coherence(t).pass);
            if (a == b) CHECK(check_convergence(t).pass);
          });
      CHECK(states > 0);
      CHECK(terminals > 0);
      INFO("inputs ", a, b, ": ", states, " states, ", terminals, " terminals");
    }
  }
}

TEST_CASE("randomized adopt-commit: no violations across seeds and adversaries") {
  for (int n : {3, 4}) {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
      ExperimentConfig cfg;
      cfg.protocol = Protocol::AdoptCommit;
      cfg.n = n;
      cfg.f = n - 1;
      cfg.crash_hazard = 0.005;
      cfg.adversary = seed % 2 ? "random" : "antiack";
      cfg.seed = seed;
      Trace t = run(cfg);
      REQUIRE(t.verdict == RunVerdict::Completed);
      CHECK(check_validity_set(t).pass);
      CHECK(check_coherence(t).pass);
      CHECK(check_convergence(t).pass);
    }
  }
}

TEST_CASE("non-binary input is a config error") {
  ExperimentConfig cfg = ac_config({0, 2});
  CHECK_THROWS(run(cfg));
}
