#include <doctest.h>

#include "macsim/harness.hpp"
#include "macsim/phase_analysis.hpp"
#include "macsim/protocols/first_mover.hpp"
#include "macsim/runner.hpp"

using namespace macsim;

namespace {

// Hooks stub with a scripted uniform draw.
class FixedHooks final : public Hooks {
 public:
  explicit FixedHooks(double u) : u_(u) {}
  double rand01() override { return u_; }
  void snapshot(std::int64_t, const Dyadic&, TransKind) override {}
  void snapshot_bit(std::int64_t, int, TransKind) override {}
  void mark(MarkKind, std::int64_t, int) override {}
  void history_inv(bool, const std::string&, std::int64_t) override {}
  void history_resp(bool, const View&) override {}

 private:
  double u_;
};

}  // namespace

TEST_CASE("reveal probability is 2^k/(2n'), clamped at 1") {
  // k=0, n'=4: threshold 1/8
  FixedHooks below(0.124), above(0.126), high(0.9999);
  CHECK(FirstMoverNode::reveal(below, 0, 4));
  CHECK(!FirstMoverNode::reveal(above, 0, 4));
  // k=3, n'=4: 8/8 = 1, always reveals
  CHECK(FirstMoverNode::reveal(high, 3, 4));
  CHECK(FirstMoverNode::reveal(high, 63, 4));
  // k=1, n'=4: threshold 1/4
  FixedHooks quarter(0.249);
  CHECK(FirstMoverNode::reveal(quarter, 1, 4));
}

TEST_CASE("solo node returns its own input") {
  ExperimentConfig cfg;
  cfg.protocol = Protocol::FirstMover;
  cfg.n = 1;
  cfg.nprime = 1;
  cfg.bit_inputs = {1};
  Trace t = run(cfg);
  REQUIRE(t.verdict == RunVerdict::Completed);
  CHECK(t.outputs[0].bit == 1);
  Classification c = classify_trace(t);
  REQUIRE(c.phases.size() == 1);
  CHECK(c.phases[0].successful >= 1);
}

TEST_CASE("classification tallies match the counter totals (recount oracle)") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    ExperimentConfig cfg;
    cfg.protocol = Protocol::FirstMover;
    cfg.n = 4;
    cfg.nprime = 4;
    cfg.seed = seed;
    Trace t = run(cfg);
    REQUIRE(t.verdict == RunVerdict::Completed);
    Classification c = classify_trace(t);
    CHECK(c.n_o == t.counters.originals);
    CHECK(c.n_f == t.counters.followups);
    CHECK(c.n_rbc == t.counters.adopt_commit_msgs);
    std::uint64_t coins = 0, dummies = 0;
    for (const auto& row : c.phases) {
      coins += static_cast<std::uint64_t>(row.original_coins) +
               static_cast<std::uint64_t>(row.followups);
      dummies += static_cast<std::uint64_t>(row.dummies);
    }
    CHECK(coins == t.counters.coins);
    CHECK(dummies == t.counters.dummies);
  }
}

TEST_CASE("returned value is some participant's input") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    ExperimentConfig cfg;
    cfg.protocol = Protocol::FirstMover;
    cfg.n = 3;
    cfg.nprime = 4;
    cfg.bit_inputs = {0, 0, 0};  // all equal: the coin can only be 0
    cfg.seed = seed;
    Trace t = run(cfg);
    REQUIRE(t.verdict == RunVerdict::Completed);
    for (const auto& o : t.outputs) CHECK(o.bit == 0);
  }
}

TEST_CASE("estimate: solo success probability is 1") {
  FirstMoverEstimate est = estimate_firstmover_success(1, 1, 200, 1, 0.1);
  CHECK(est.unique_success == est.trials);
  CHECK(est.p_hat == doctest::Approx(1.0));
}

TEST_CASE("estimate rejects tiny trial counts and n' < n") {
  CHECK_THROWS(estimate_firstmover_success(4, 4, 50, 1, 0.1));
  CHECK_THROWS(estimate_firstmover_success(4, 2, 500, 1, 0.1));
}

TEST_CASE("unique successful coin forces one value (small Monte Carlo)") {
  int unique_phases = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    ExperimentConfig cfg;
    cfg.protocol = Protocol::FirstMover;
    cfg.n = 4;
    cfg.nprime = 4;
    cfg.seed = seed;
    Trace t = run(cfg);
    Classification c = classify_trace(t);
    for (const auto& row : c.phases)
      if (row.successful == 1) ++unique_phases;
    CHECK(check_unique_coin_agreement(t).pass);
  }
  CHECK(unique_phases > 0);
}
