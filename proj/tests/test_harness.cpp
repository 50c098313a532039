#include <doctest.h>

#include <cmath>

#include "macsim/harness.hpp"
#include "macsim/json_io.hpp"
#include "macsim/runner.hpp"

using namespace macsim;

TEST_CASE("wilson interval closed-form values") {
  auto [lo, hi] = wilson_interval(50, 100, 0.95);
  CHECK(lo == doctest::Approx(0.404).epsilon(0.001));
  CHECK(hi == doctest::Approx(0.596).epsilon(0.001));
  CHECK(wilson_interval(0, 10, 0.95).first == doctest::Approx(0.0));
  CHECK(wilson_interval(10, 10, 0.95).second == doctest::Approx(1.0));
  CHECK_THROWS(wilson_interval(0, 0, 0.95));
}

TEST_CASE("fit_scaling on synthetic laws") {
  std::vector<double> ns{4, 8, 16, 32};
  std::vector<double> nlogn, sq, flat;
  for (double n : ns) {
    nlogn.push_back(n * std::log2(n));
    sq.push_back(n * n);
    flat.push_back(7.0);
  }
  double e1 = fit_scaling(ns, nlogn);
  CHECK(e1 >= 1.0);
  CHECK(e1 <= 1.5);
  CHECK(fit_scaling(ns, sq) == doctest::Approx(2.0));
  CHECK(fit_scaling(ns, flat) == doctest::Approx(0.0));
  CHECK_THROWS(fit_scaling({1, 2}, {1, 2}));
}

TEST_CASE("run_experiment rows are seed-ordered and reproducible") {
  ExperimentConfig cfg;
  cfg.protocol = Protocol::Rbc;
  cfg.n = 3;
  cfg.seed = 100;
  ExperimentResult a = run_experiment(cfg, 12);
  ExperimentResult b = run_experiment(cfg, 12);
  REQUIRE(a.rows.size() == 12);
  CHECK(a.failures.empty());
  CHECK(metrics_csv(a.rows, cfg.n) == metrics_csv(b.rows, cfg.n));
  for (std::size_t k = 0; k < a.rows.size(); ++k) CHECK(a.rows[k].seed == 100 + k);
}

TEST_CASE("sweep over epsilon: phases track the p_end formula") {
  ExperimentConfig base;
  base.protocol = Protocol::MacAc;
  base.n = 3;
  base.adversary = "lockstep";
  auto rows = sweep(base, "epsilon", {"2^-3", "2^-5"}, 5);
  REQUIRE(rows.size() == 2);
  // lockstep runs move one phase per round, never jump: phases == p_end
  CHECK(rows[0].mean_phases == doctest::Approx(3.0));
  CHECK(rows[1].mean_phases == doctest::Approx(5.0));
  CHECK(rows[0].decided == 5);
}

TEST_CASE("trace file round-trip preserves outputs and history") {
  ExperimentConfig cfg;
  cfg.protocol = Protocol::MacAc;
  cfg.n = 2;
  cfg.dyadic_inputs = {"0", "1"};
  cfg.epsilon = "0.5";
  cfg.adversary = "lockstep";
  cfg.record = RecordLevel::Full;
  Trace t = run(cfg);
  std::string text = trace_to_jsonl(cfg, t);
  LoadedTrace lt = trace_from_jsonl(text);
  CHECK(lt.cfg.n == 2);
  CHECK(lt.trace.outputs[0].present);
  CHECK(lt.trace.outputs[0].value == t.outputs[0].value);
  CHECK(lt.trace.phases[1].size() == t.phases[1].size());
  // the serialization itself is deterministic
  CHECK(trace_to_jsonl(cfg, t) == text);
}

TEST_CASE("sweep over Delta: convergence unaffected, wall events grow") {
  ExperimentConfig base;
  base.protocol = Protocol::SmallAc;
  base.transport = Transport::Lossy;
  base.n = 3;
  base.f = 1;
  base.epsilon = "2^-5";
  base.lossy.drop_rate = 0.9;
  base.lossy.t = 12;
  auto rows = sweep(base, "Delta", {"48", "360"}, 25);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].decided == 25);
  CHECK(rows[1].decided == 25);
  CHECK(rows[0].mean_phases == rows[1].mean_phases);  // p_end fixed by epsilon
  CHECK(rows[0].mean_events < rows[1].mean_events);   // laxer windows, later forcing
}
