#include <doctest.h>

#include "macsim/checkers.hpp"
#include "macsim/phase_analysis.hpp"
#include "macsim/protocols/mac_ac.hpp"
#include "macsim/protocols/rbc.hpp"
#include "macsim/protocols/rbc2.hpp"
#include "macsim/runner.hpp"

using namespace macsim;

// Structural engine contracts, validated over full event logs of every MAC
// protocol under crash-injecting adversaries.
TEST_CASE("engine invariants: ack-delivery, drain, no delivery after crash") {
  const Protocol protos[] = {Protocol::AdoptCommit, Protocol::Rbc, Protocol::Rbc2,
                             Protocol::MacAc, Protocol::MacAc2, Protocol::StoreCollect};
  for (Protocol p : protos) {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
      ExperimentConfig cfg;
      cfg.protocol = p;
      cfg.n = 3;
      cfg.f = 2;
      cfg.crash_hazard = 0.004;
      cfg.seed = seed;
      cfg.epsilon = "2^-3";
      cfg.record = RecordLevel::Full;
      cfg.adversary = seed % 2 ? "random" : "delay";
      Trace t = run(cfg);
      CHECK(check_ack_implies_delivery(t).pass);
      CHECK(check_handler_drain(t).pass);
      CHECK(check_no_deliver_after_crash(t).pass);
    }
  }
}

TEST_CASE("one event per clock value, strictly increasing") {
  ExperimentConfig cfg;
  cfg.protocol = Protocol::Rbc2;
  cfg.n = 3;
  cfg.seed = 77;
  cfg.record = RecordLevel::Full;
  Trace t = run(cfg);
  REQUIRE(!t.events.empty());
  for (std::size_t k = 1; k < t.events.size(); ++k)
    CHECK(t.events[k].time == t.events[k - 1].time + 1);
}

// The anonymous automata carry no node identity: two nodes constructed from
// the same input are bit-identical state machines.
TEST_CASE("anonymity: transition state contains no node id") {
  auto fp = [](const MacAutomaton& a) {
    std::uint64_t h = 0;
    a.fingerprint(h);
    return h;
  };
  CHECK(fp(RbcNode(1)) == fp(RbcNode(1)));
  CHECK(fp(Rbc2Node(0, 1, 4.0)) == fp(Rbc2Node(0, 1, 4.0)));
  CHECK(fp(MacAcNode(Dyadic::parse("0.5"), 4)) == fp(MacAcNode(Dyadic::parse("0.5"), 4)));
  CHECK(fp(MacAc2Node(Dyadic::parse("0.5"), 4)) == fp(MacAc2Node(Dyadic::parse("0.5"), 4)));
}

TEST_CASE("phase ranges CSV renders decimals") {
  ExperimentConfig cfg;
  cfg.protocol = Protocol::MacAc;
  cfg.n = 2;
  cfg.dyadic_inputs = {"0", "1"};
  cfg.epsilon = "2^-2";
  cfg.adversary = "lockstep";
  Trace t = run(cfg);
  std::string csv = phase_ranges_csv(t);
  CHECK(csv.find("p,min,max,range,i_p,movers,jumpers") == 0);
  CHECK(csv.find("0,0,1,1,") != std::string::npos);
  CHECK(csv.find("1,0.5,0.5,0,") != std::string::npos);
}
