#include <doctest.h>

#include <algorithm>

#include "macsim/byz.hpp"
#include "macsim/checkers.hpp"
#include "macsim/phase_analysis.hpp"
#include "macsim/protocols/small_bac.hpp"
#include "macsim/rng.hpp"
#include "macsim/runner.hpp"

using namespace macsim;

namespace {

ExperimentConfig bac_config(const std::string& byz, std::uint64_t seed,
                            std::int64_t p_end = -1) {
  ExperimentConfig cfg;
  cfg.protocol = Protocol::SmallBac;
  cfg.transport = Transport::Lossy;
  cfg.n = 6;
  cfg.f = 1;
  cfg.epsilon = "2^-4";
  cfg.byz_strategy = byz;
  cfg.seed = seed;
  cfg.p_end_override = p_end;
  return cfg;
}

std::vector<Dyadic> dyadics(std::initializer_list<const char*> xs) {
  std::vector<Dyadic> out;
  for (const char* x : xs) out.push_back(Dyadic::parse(x));
  return out;
}

}  // namespace

TEST_CASE("trim store keeps the f+1 minima and maxima") {
  SmallBacNode node(0, 6, 1, Dyadic::parse("0.5"), 10, false);
  for (const char* v : {"0", "0.25", "0.5", "0.75", "100"}) node.store(Dyadic::parse(v));
  CHECK(node.low() == dyadics({"0", "0.25"}));
  CHECK(node.high() == dyadics({"0.75", "100"}));
  // update rule: midpoint of (f+1)-st lowest and (f+1)-st highest
  CHECK(Dyadic::average(node.low().back(), node.high().front()) == Dyadic::parse("0.5"));
}

TEST_CASE("fewer than f+1 values: both lists hold everything fed") {
  SmallBacNode node(0, 6, 1, Dyadic::parse("0.5"), 10, false);
  node.store(Dyadic::parse("0.375"));
  CHECK(node.low() == dyadics({"0.375"}));
  CHECK(node.high() == dyadics({"0.375"}));
}

TEST_CASE("trim result is independent of feed order (property)") {
  HashRng rng(3, 77);
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<Dyadic> values;
    for (int k = 0; k < 7; ++k)
      values.push_back(Dyadic::from_parts(static_cast<std::int64_t>(rng.below(64)), 5));
    SmallBacNode a(0, 6, 1, Dyadic::zero(), 10, false);
    for (const auto& v : values) a.store(v);
    for (int shuffle = 0; shuffle < 5; ++shuffle) {
      for (std::size_t k = values.size(); k > 1; --k)
        std::swap(values[k - 1], values[rng.below(k)]);
      SmallBacNode b(0, 6, 1, Dyadic::zero(), 10, false);
      for (const auto& v : values) b.store(v);
      CHECK(a.low() == b.low());
      CHECK(a.high() == b.high());
    }
  }
}

TEST_CASE("trim envelope: closed form equals the unrolled recursion") {
  std::vector<Dyadic> w = dyadics({"0", "0.125", "0.25", "0.5", "1"});
  AbEnvelope closed = ab_envelope_closed_form(w, 1, 10);
  AbEnvelope rec = ab_envelope_recursive(w, 1, 10);
  REQUIRE(closed.a.size() == rec.a.size());
  for (std::size_t k = 0; k < closed.a.size(); ++k) {
    CHECK(closed.a[k] == rec.a[k]);
    CHECK(closed.A[k] == rec.A[k]);
  }
  // k=0 collapses to w_{2f+1}
  CHECK(closed.a[0] == Dyadic::parse("0.25"));
  CHECK(closed.A[0] == Dyadic::parse("0.25"));
  // endpoints stay within [w_1, w_h]
  for (std::size_t k = 0; k < closed.a.size(); ++k) {
    CHECK(w.front() <= closed.a[k]);
    CHECK(closed.A[k] <= w.back());
  }
}

TEST_CASE("update with a Byzantine extreme stays inside the honest interval") {
  // f=1, accepted {0, 0.25, 0.5, 0.75, 100}: midpoint of 0.25 and 0.75
  SmallBacNode node(0, 6, 1, Dyadic::parse("0.5"), 10, false);
  for (const char* v : {"0", "0.25", "0.5", "0.75", "100"}) node.store(Dyadic::parse(v));
  Dyadic update = Dyadic::average(node.low().back(), node.high().front());
  CHECK(update == Dyadic::parse("0.5"));
  CHECK(Dyadic::zero() <= update);
  CHECK(update <= Dyadic::one());
}

TEST_CASE("byzantine catalog is complete and constructible") {
  auto names = byz_strategy_catalog();
  CHECK(names == std::vector<std::string>{"extremes", "equivocate", "mimic", "silent", "random"});
  for (const auto& name : names) CHECK(make_byz_strategy(name) != nullptr);
  CHECK_THROWS(make_byz_strategy("spoof"));
}

TEST_CASE("silent Byzantine nodes leave honest progress intact") {
  Trace t = run(bac_config("silent", 4, 40));
  REQUIRE(t.verdict == RunVerdict::Completed);
  CHECK(check_validity_range(t).pass);
  CHECK(check_per_phase_contraction(t, 6).pass);
}

TEST_CASE("extreme values never drag honest outputs outside [0,1]") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Trace t = run(bac_config("extremes", seed, 40));
    REQUIRE(t.verdict == RunVerdict::Completed);
    CHECK(check_validity_range(t).pass);
    CHECK(check_ab_envelope(t, 1).pass);
  }
}

TEST_CASE("equivocating Byzantine nodes: contraction and envelope hold") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Trace t = run(bac_config("equivocate", seed, 40));
    REQUIRE(t.verdict == RunVerdict::Completed);
    CHECK(check_validity_range(t).pass);
    CHECK(check_per_phase_contraction(t, 6).pass);
    CHECK(check_ab_envelope(t, 1).pass);
  }
}

TEST_CASE("equal honest inputs: outputs equal that value under any strategy") {
  for (const auto& name : byz_strategy_catalog()) {
    ExperimentConfig cfg = bac_config(name, 8, 40);
    cfg.dyadic_inputs = {"0.5", "0.5", "0.5", "0.5", "0.5", "0.5"};
    Trace t = run(cfg);
    REQUIRE(t.verdict == RunVerdict::Completed);
    for (NodeId i = 0; i < cfg.n; ++i) {
      std::size_t k = static_cast<std::size_t>(i);
      if (t.byzantine[k] || !t.outputs[k].present) continue;
      CHECK(t.outputs[k].value == Dyadic::parse("0.5"));
    }
  }
}

TEST_CASE("include_self_value feeds the own state into the trim lists") {
  SmallBacNode node(0, 6, 1, Dyadic::parse("0.5"), 10, true);
  CHECK(node.low() == dyadics({"0.5"}));
  CHECK(node.high() == dyadics({"0.5"}));
  ExperimentConfig cfg = bac_config("random", 5, 30);
  cfg.include_self_value = true;
  Trace t = run(cfg);
  REQUIRE(t.verdict == RunVerdict::Completed);
  CHECK(check_validity_range(t).pass);
}
