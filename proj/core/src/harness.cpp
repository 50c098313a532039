#include "macsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "macsim/phase_analysis.hpp"
#include "macsim/rng.hpp"
#include "macsim/runner.hpp"

namespace macsim {

MetricsRow metrics_from_trace(const Trace& t) {
  MetricsRow row;
  row.seed = t.seed;
  row.decided = t.verdict == RunVerdict::Completed;
  row.phases = t.max_phase();
  for (const auto& o : t.outputs) {
    if (o.present) row.phases = std::max(row.phases, o.phase);
  }
  row.broadcasts = t.counters.broadcasts + t.counters.datagrams;
  row.n_rbc = t.counters.adopt_commit_msgs;
  row.n_o = t.counters.originals;
  row.n_f = t.counters.followups;
  row.coins = t.counters.coins;
  row.dummies = t.counters.dummies;
  row.events = t.counters.events;
  bool any_bit = false, any_val = false;
  Dyadic lo, hi;
  for (std::size_t i = 0; i < t.outputs.size(); ++i) {
    const Output& o = t.outputs[i];
    if (!o.present) continue;
    if (i < t.byzantine.size() && t.byzantine[i]) continue;
    if (o.bit >= 0) {
      row.value_bit = o.bit;
      any_bit = true;
    } else {
      if (!any_val) {
        lo = hi = o.value;
        row.value = o.value;
      } else {
        if (o.value < lo) lo = o.value;
        if (hi < o.value) hi = o.value;
      }
      any_val = true;
    }
  }
  (void)any_bit;
  if (any_val) row.output_range = hi - lo;
  return row;
}

unsigned worker_count() {
  if (const char* env = std::getenv("MACSIM_WORKERS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

void parallel_for_seeds(std::uint64_t count, const std::function<void(std::uint64_t)>& body) {
  unsigned workers = std::min<std::uint64_t>(worker_count(), count == 0 ? 1 : count);
  if (workers <= 1) {
    for (std::uint64_t k = 0; k < count; ++k) body(k);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::uint64_t k = next.fetch_add(1);
        if (k >= count) return;
        body(k);
      }
    });
  }
  for (auto& th : pool) th.join();
}

ExperimentResult run_experiment(
    const ExperimentConfig& cfg, std::uint64_t seeds,
    const std::function<std::vector<Verdict>(const ExperimentConfig&, const Trace&)>& extra) {
  ExperimentResult result;
  result.rows.resize(seeds);
  std::vector<std::vector<Verdict>> failures(seeds);
  std::vector<std::uint8_t> decided(seeds, 0), timeout(seeds, 0);
  parallel_for_seeds(seeds, [&](std::uint64_t k) {
    Trace t = run_with_seed(cfg, cfg.seed + k);
    MetricsRow row = metrics_from_trace(t);
    ExperimentConfig used = cfg;
    used.seed = cfg.seed + k;
    for (auto& v : check_all(used, t)) {
      if (!v.pass) {
        row.violations = true;
        failures[k].push_back(std::move(v));
      }
    }
    if (extra) {
      for (auto& v : extra(used, t)) {
        if (!v.pass) {
          row.violations = true;
          failures[k].push_back(std::move(v));
        }
      }
    }
    decided[k] = t.verdict == RunVerdict::Completed ? 1 : 0;
    timeout[k] = t.verdict == RunVerdict::Timeout ? 1 : 0;
    result.rows[k] = std::move(row);
  });
  result.runs = seeds;
  for (std::uint64_t k = 0; k < seeds; ++k) {
    result.decided += decided[k];
    result.timeouts += timeout[k];
    for (auto& v : failures[k]) result.failures.push_back(std::move(v));
  }
  return result;
}

std::string metrics_csv(const std::vector<MetricsRow>& rows, int n) {
  std::ostringstream out;
  out << "n,seed,decided,phases,broadcasts,N_RBC,N_O,N_F,coins,dummies,events,value,range,"
         "violations\n";
  for (const auto& r : rows) {
    out << n << "," << r.seed << "," << (r.decided ? 1 : 0) << "," << r.phases << ","
        << r.broadcasts << "," << r.n_rbc << "," << r.n_o << "," << r.n_f << "," << r.coins << ","
        << r.dummies << "," << r.events << ",";
    if (r.value_bit)
      out << *r.value_bit;
    else if (r.value)
      out << r.value->to_decimal();
    out << ",";
    if (r.output_range) out << r.output_range->to_decimal();
    out << "," << (r.violations ? 1 : 0) << "\n";
  }
  return out.str();
}

namespace {

double percentile(std::vector<double> v, double q) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  double idx = q * static_cast<double>(v.size() - 1);
  std::size_t lo = static_cast<std::size_t>(idx);
  std::size_t hi = std::min(lo + 1, v.size() - 1);
  double frac = idx - static_cast<double>(lo);
  return v[lo] * (1 - frac) + v[hi] * frac;
}

ExperimentConfig apply_parameter(ExperimentConfig cfg, const std::string& parameter,
                                 const std::string& value) {
  if (parameter == "n") {
    cfg.n = std::stoi(value);
  } else if (parameter == "epsilon") {
    cfg.epsilon = value;
  } else if (parameter == "delta") {
    cfg.delta = std::stod(value);
  } else if (parameter == "drop_rate") {
    cfg.lossy.drop_rate = std::stod(value);
  } else if (parameter == "Delta") {
    cfg.lossy.Delta = std::stoll(value);
  } else {
    throw std::invalid_argument("sweep: unsupported parameter " + parameter);
  }
  return cfg;
}

}  // namespace

std::vector<SweepRow> sweep(const ExperimentConfig& base, const std::string& parameter,
                            const std::vector<std::string>& values, std::uint64_t seeds) {
  std::vector<SweepRow> rows;
  for (const auto& value : values) {
    ExperimentConfig cfg = apply_parameter(base, parameter, value);
    ExperimentResult res = run_experiment(cfg, seeds);
    SweepRow row;
    row.value = value;
    row.runs = res.runs;
    row.decided = res.decided;
    std::vector<double> phases, bcasts, events;
    for (const auto& r : res.rows) {
      phases.push_back(static_cast<double>(r.phases));
      bcasts.push_back(static_cast<double>(r.broadcasts));
      events.push_back(static_cast<double>(r.events));
    }
    auto mean = [](const std::vector<double>& v) {
      if (v.empty()) return 0.0;
      double s = 0;
      for (double x : v) s += x;
      return s / static_cast<double>(v.size());
    };
    row.mean_phases = mean(phases);
    row.median_phases = percentile(phases, 0.5);
    row.p95_phases = percentile(phases, 0.95);
    row.mean_broadcasts = mean(bcasts);
    row.median_broadcasts = percentile(bcasts, 0.5);
    row.p95_broadcasts = percentile(bcasts, 0.95);
    row.mean_events = mean(events);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, const std::string& parameter) {
  std::ostringstream out;
  out << parameter
      << ",runs,decided,mean_phases,median_phases,p95_phases,mean_broadcasts,median_broadcasts,"
         "p95_broadcasts,mean_events\n";
  for (const auto& r : rows) {
    out << r.value << "," << r.runs << "," << r.decided << "," << r.mean_phases << ","
        << r.median_phases << "," << r.p95_phases << "," << r.mean_broadcasts << ","
        << r.median_broadcasts << "," << r.p95_broadcasts << "," << r.mean_events << "\n";
  }
  return out.str();
}

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials,
                                          double confidence) {
  if (trials == 0) throw std::invalid_argument("wilson_interval: zero trials");
  // two-sided normal quantile; 0.95 -> 1.959964
  double z;
  if (confidence >= 0.99) {
    z = 2.575829;
  } else if (confidence >= 0.95) {
    z = 1.959964;
  } else if (confidence >= 0.9) {
    z = 1.644854;
  } else {
    z = 1.281552;
  }
  double n = static_cast<double>(trials);
  double p = static_cast<double>(successes) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = (p + z2 / (2 * n)) / denom;
  double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

std::int64_t rbc_phase_bound(int n, double delta) {
  return static_cast<std::int64_t>(
      std::ceil(std::ldexp(1.0, n - 1) * std::log(1.0 / delta)));
}

double doubling_period_for(double delta) { return std::log(2.0 / delta) / 0.05; }

FirstMoverEstimate estimate_firstmover_success(int n, std::int64_t nprime, std::uint64_t trials,
                                               std::uint64_t seed, double delta) {
  if (trials < 100) throw std::invalid_argument("estimate_firstmover_success: trials < 100");
  if (nprime < n) throw std::invalid_argument("estimate_firstmover_success: n' must be >= n");
  FirstMoverEstimate est;
  est.trials = trials;
  est.bound_broadcasts = 2.0 * static_cast<double>(nprime) * std::log(1.0 / delta);
  std::atomic<std::uint64_t> unique{0}, within{0};
  ExperimentConfig cfg;
  cfg.protocol = Protocol::FirstMover;
  cfg.n = n;
  cfg.nprime = nprime;
  cfg.adversary = "random";
  cfg.bit_inputs.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) cfg.bit_inputs[static_cast<std::size_t>(i)] = i % 2;
  parallel_for_seeds(trials, [&](std::uint64_t k) {
    Trace t = run_with_seed(cfg, seed + k);
    Classification c = classify_trace(t);
    int successful = 0;
    for (const auto& row : c.phases) successful += row.successful;
    if (successful == 1) unique.fetch_add(1);
    // originals made by the time the last node learned a coin
    Clock all_learned = -1;
    std::vector<Clock> first_learn(static_cast<std::size_t>(n), -1);
    for (const auto& m : t.marks) {
      if (m.kind == MarkKind::CoinLearned && first_learn[static_cast<std::size_t>(m.node)] < 0)
        first_learn[static_cast<std::size_t>(m.node)] = m.at;
    }
    for (Clock c2 : first_learn) all_learned = std::max(all_learned, c2);
    bool complete = true;
    for (Clock c2 : first_learn) complete = complete && c2 >= 0;
    if (complete) {
      std::uint64_t originals = 0;
      for (const auto& b : t.broadcasts) {
        if (b.payload.origin == MsgOrigin::Original && b.submitted <= all_learned) ++originals;
      }
      if (static_cast<double>(originals) <= est.bound_broadcasts) within.fetch_add(1);
    }
  });
  est.unique_success = unique.load();
  est.within_bound = within.load();
  est.p_hat = static_cast<double>(est.unique_success) / static_cast<double>(trials);
  auto [lo, hi] = wilson_interval(est.unique_success, trials, 0.95);
  est.wilson_lo = lo;
  est.wilson_hi = hi;
  est.within_fraction = static_cast<double>(est.within_bound) / static_cast<double>(trials);
  return est;
}

double fit_scaling(const std::vector<double>& ns, const std::vector<double>& means) {
  if (ns.size() != means.size() || ns.size() < 3)
    throw std::invalid_argument("fit_scaling: need >= 3 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double count = static_cast<double>(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] <= 0 || means[i] <= 0) throw std::invalid_argument("fit_scaling: positive data only");
    double x = std::log(ns[i]);
    double y = std::log(means[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double denom = count * sxx - sx * sx;
  if (std::abs(denom) < 1e-12) throw std::invalid_argument("fit_scaling: degenerate abscissae");
  return (count * sxy - sx * sy) / denom;
}

}  // namespace macsim
