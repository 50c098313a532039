#include <doctest.h>

#include "macsim/checkers.hpp"
#include "macsim/harness.hpp"
#include "macsim/phase_analysis.hpp"
#include "macsim/runner.hpp"

using namespace macsim;

namespace {

ExperimentConfig rbc2_config(int n, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.protocol = Protocol::Rbc2;
  cfg.n = n;
  cfg.n0 = 1;
  cfg.c = 4.0;  // desk-scale doubling period
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("doubling period constant at delta = 0.05") {
  CHECK(doubling_period_for(0.05) == doctest::Approx(73.7776).epsilon(1e-4));
}

TEST_CASE("equal inputs: decide in phase 0 with no conciliator traffic") {
  ExperimentConfig cfg = rbc2_config(4, 11);
  cfg.bit_inputs = {1, 1, 1, 1};
  Trace t = run(cfg);
  REQUIRE(t.verdict == RunVerdict::Completed);
  for (const auto& o : t.outputs) {
    CHECK(o.bit == 1);
    CHECK(o.phase == 0);
  }
  CHECK(t.counters.originals == 0);
  CHECK(t.counters.followups == 0);
}

TEST_CASE("broadcast decomposition N = N_RBC + N_O + N_F (recount oracle)") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Trace t = run(rbc2_config(4, seed));
    REQUIRE(t.verdict == RunVerdict::Completed);
    Classification c = classify_trace(t);
    CHECK(c.n_rbc + c.n_o + c.n_f == t.counters.broadcasts);
    CHECK(c.n_rbc == t.counters.adopt_commit_msgs);
    CHECK(c.n_o == t.counters.originals);
    CHECK(c.n_f == t.counters.followups);
  }
}

TEST_CASE("agreement and validity across seeds; unique-coin phases agree") {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    Trace t = run(rbc2_config(4, seed));
    REQUIRE(t.verdict == RunVerdict::Completed);
    CHECK(check_agreement(t).pass);
    CHECK(check_validity_set(t).pass);
    CHECK(check_unique_coin_agreement(t).pass);
  }
}

TEST_CASE("agreement under the delaying adversary") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    ExperimentConfig cfg = rbc2_config(4, seed);
    cfg.adversary = "delay";
    Trace t = run(cfg);
    REQUIRE(t.verdict == RunVerdict::Completed);
    CHECK(check_agreement(t).pass);
    CHECK(check_validity_set(t).pass);
  }
}

TEST_CASE("probability-matched doubling period remains selectable") {
  ExperimentConfig cfg = rbc2_config(3, 7);
  cfg.c = doubling_period_for(0.05);
  Trace t = run(cfg);
  REQUIRE(t.verdict == RunVerdict::Completed);
  CHECK(check_agreement(t).pass);
}
