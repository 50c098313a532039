#pragma once

#include <functional>
#include <optional>

#include "macsim/checkers.hpp"
#include "macsim/config.hpp"
#include "macsim/trace.hpp"

namespace macsim {

// One row per (config, seed) run; schema stable across protocols, unused
// fields stay empty in the CSV.
struct MetricsRow {
  std::uint64_t seed = 0;
  bool decided = false;
  std::int64_t phases = 0;
  std::uint64_t broadcasts = 0;
  std::uint64_t n_rbc = 0;
  std::uint64_t n_o = 0;
  std::uint64_t n_f = 0;
  std::uint64_t coins = 0;
  std::uint64_t dummies = 0;
  std::uint64_t events = 0;
  std::optional<int> value_bit;
  std::optional<Dyadic> value;
  std::optional<Dyadic> output_range;
  bool violations = false;
};

struct ExperimentResult {
  std::vector<MetricsRow> rows;
  std::vector<Verdict> failures;  // all failed verdicts across seeds
  std::uint64_t runs = 0;
  std::uint64_t decided = 0;
  std::uint64_t timeouts = 0;
};

MetricsRow metrics_from_trace(const Trace& t);

// Runs `seeds` consecutive seeds starting at cfg.seed, applies every
// applicable checker per trace, and folds the rows in seed order. Seeds fan
// out across worker threads (MACSIM_WORKERS caps the pool); per_trace, when
// given, runs on each trace in the worker (must be thread-safe).
ExperimentResult run_experiment(
    const ExperimentConfig& cfg, std::uint64_t seeds,
    const std::function<std::vector<Verdict>(const ExperimentConfig&, const Trace&)>& extra =
        nullptr);

std::string metrics_csv(const std::vector<MetricsRow>& rows, int n);

// Per-value aggregate of a parameter sweep.
struct SweepRow {
  std::string value;
  std::uint64_t runs = 0;
  std::uint64_t decided = 0;
  double mean_phases = 0, median_phases = 0, p95_phases = 0;
  double mean_broadcasts = 0, median_broadcasts = 0, p95_broadcasts = 0;
  double mean_events = 0;
};

// parameter: one of n, epsilon, delta, drop_rate, Delta
std::vector<SweepRow> sweep(const ExperimentConfig& base, const std::string& parameter,
                            const std::vector<std::string>& values, std::uint64_t seeds);
std::string sweep_csv(const std::vector<SweepRow>& rows, const std::string& parameter);

// Wilson score interval for a binomial proportion.
std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials,
                                          double confidence);

// With probability >= 1-delta the local-coin consensus terminates within
// ceil(2^(n-1) ln(1/delta)) phases.
std::int64_t rbc_phase_bound(int n, double delta);

// Doubling period matching the failure probability: ln(2/delta)/0.05.
double doubling_period_for(double delta);

// Least-squares slope of log(mean) against log(n).
double fit_scaling(const std::vector<double>& ns, const std::vector<double>& means);

// Monte-Carlo estimate of the first-mover conciliator's per-phase agreement
// event (exactly one successful original coin broadcast) and of the
// termination bound (all nodes learn a coin within 2 n' ln(1/delta) original
// broadcasts).
struct FirstMoverEstimate {
  std::uint64_t trials = 0;
  std::uint64_t unique_success = 0;
  double p_hat = 0;
  double wilson_lo = 0, wilson_hi = 0;
  std::uint64_t within_bound = 0;
  double bound_broadcasts = 0;
  double within_fraction = 0;
};
FirstMoverEstimate estimate_firstmover_success(int n, std::int64_t nprime, std::uint64_t trials,
                                               std::uint64_t seed, double delta);

// Worker pool size: MACSIM_WORKERS, else hardware concurrency.
unsigned worker_count();

// Deterministic parallel map over seed indices [0, count).
void parallel_for_seeds(std::uint64_t count, const std::function<void(std::uint64_t)>& body);

}  // namespace macsim
