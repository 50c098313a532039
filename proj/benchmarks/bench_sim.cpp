// Engine and arithmetic microbenchmarks (events/sec drives how large the
// Monte-Carlo acceptance sweeps can go).

#include <benchmark/benchmark.h>

#include "macsim/dyadic.hpp"
#include "macsim/runner.hpp"

using namespace macsim;

namespace {

void BM_Rbc2Run(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.protocol = Protocol::Rbc2;
  cfg.n = static_cast<int>(state.range(0));
  cfg.n0 = 1;
  cfg.c = 4.0;
  cfg.record = RecordLevel::CountersOnly;
  std::uint64_t seed = 1, events = 0;
  for (auto _ : state) {
    Trace t = run_with_seed(cfg, seed++);
    events += t.counters.events;
  }
  state.counters["events/s"] =
      benchmark::Counter(static_cast<double>(events), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_Rbc2Run)->Arg(4)->Arg(16);

void BM_MacAcRun(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.protocol = Protocol::MacAc;
  cfg.n = static_cast<int>(state.range(0));
  cfg.epsilon = "2^-6";
  cfg.record = RecordLevel::CountersOnly;
  std::uint64_t seed = 1, events = 0;
  for (auto _ : state) {
    Trace t = run_with_seed(cfg, seed++);
    events += t.counters.events;
  }
  state.counters["events/s"] =
      benchmark::Counter(static_cast<double>(events), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_MacAcRun)->Arg(4)->Arg(8);

void BM_SmallBacRun(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.protocol = Protocol::SmallBac;
  cfg.transport = Transport::Lossy;
  cfg.n = 6;
  cfg.f = 1;
  cfg.epsilon = "2^-4";
  cfg.byz_strategy = "equivocate";
  cfg.record = RecordLevel::CountersOnly;
  std::uint64_t seed = 1, events = 0;
  for (auto _ : state) {
    Trace t = run_with_seed(cfg, seed++);
    events += t.counters.events;
  }
  state.counters["events/s"] =
      benchmark::Counter(static_cast<double>(events), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_SmallBacRun);

void BM_DyadicAverage(benchmark::State& state) {
  // operands at the depth a long run reaches (~100 halvings)
  Dyadic a = Dyadic::from_parts(1, 1);
  Dyadic b = Dyadic::from_parts(1, 3);
  for (int i = 0; i < 100; ++i) a = Dyadic::average(a, b);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Dyadic::average(a, b));
  }
}
BENCHMARK(BM_DyadicAverage);

void BM_DyadicCompare(benchmark::State& state) {
  Dyadic a = Dyadic::one_minus_pow2(6).pow(100);
  Dyadic b = Dyadic::one_minus_pow2(6).pow(99);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Dyadic::compare(a, b));
  }
}
BENCHMARK(BM_DyadicCompare);

}  // namespace

BENCHMARK_MAIN();
