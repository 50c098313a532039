#include <doctest.h>

#include "macsim/config.hpp"
#include "macsim/rng.hpp"

using namespace macsim;

TEST_CASE("hash rng: deterministic counter-based streams") {
  HashRng a(7, rng_stream::node(0));
  HashRng b(7, rng_stream::node(0));
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  HashRng c(7, rng_stream::node(1));
  CHECK(a.next_u64() != c.next_u64());
  HashRng d(8, rng_stream::node(0));
  HashRng e(7, rng_stream::node(0));
  CHECK(d.next_u64() != e.next_u64());
}

TEST_CASE("hash rng: uniform01 in range, below bounded") {
  HashRng rng(123, 5);
  for (int i = 0; i < 1000; ++i) {
    double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(rng.below(10) < 10);
  }
}

TEST_CASE("config json round-trip") {
  ExperimentConfig cfg;
  cfg.protocol = Protocol::SmallBac;
  cfg.transport = Transport::Lossy;
  cfg.n = 6;
  cfg.f = 1;
  cfg.epsilon = "2^-4";
  cfg.byz_strategy = "equivocate";
  cfg.seed = 99;
  cfg.lossy.t = 24;
  cfg.lossy.Delta = 240;
  cfg.lossy.drop_rate = 0.3;
  cfg.event_budget = 123456;
  ExperimentConfig back = ExperimentConfig::from_json(cfg.to_json());
  CHECK(back.protocol == Protocol::SmallBac);
  CHECK(back.n == 6);
  CHECK(back.f == 1);
  CHECK(back.epsilon == "2^-4");
  CHECK(back.byz_strategy == "equivocate");
  CHECK(back.seed == 99);
  CHECK(back.lossy.t == 24);
  CHECK(back.lossy.Delta == 240);
  CHECK(back.lossy.drop_rate == doctest::Approx(0.3));
  CHECK(back.event_budget == 123456);
}

TEST_CASE("config validation: resilience inequalities") {
  ExperimentConfig cfg;
  cfg.protocol = Protocol::SmallBac;
  cfg.transport = Transport::Lossy;
  cfg.n = 5;
  cfg.f = 1;  // needs n >= 5f+1 = 6
  CHECK_THROWS(cfg.validate());
  cfg.n = 6;
  CHECK_NOTHROW(cfg.validate());

  ExperimentConfig ac;
  ac.protocol = Protocol::SmallAc;
  ac.transport = Transport::Lossy;
  ac.n = 2;
  ac.f = 1;  // needs n >= 2f+1 = 3
  CHECK_THROWS(ac.validate());
  ac.n = 3;
  CHECK_NOTHROW(ac.validate());
}

TEST_CASE("config validation: parameter ranges") {
  ExperimentConfig cfg;
  cfg.protocol = Protocol::MacAc;
  cfg.epsilon = "2";  // > 1
  CHECK_THROWS(cfg.validate());
  cfg.epsilon = "2^-6";
  cfg.delta = 1.5;
  CHECK_THROWS(cfg.validate());
  cfg.delta = 0.1;
  cfg.event_budget = 0;
  CHECK_THROWS(cfg.validate());
  cfg.event_budget = 100;
  CHECK_NOTHROW(cfg.validate());
  cfg.bit_inputs = {0, 2};
  CHECK_THROWS(cfg.validate());
}

TEST_CASE("lossy protocols require the lossy transport") {
  ExperimentConfig cfg;
  cfg.protocol = Protocol::SmallAc;
  cfg.transport = Transport::Mac;
  cfg.n = 3;
  cfg.f = 1;
  CHECK_THROWS(cfg.validate());
}
