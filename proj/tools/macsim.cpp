// macsim: deterministic simulator and experiment harness for abstract-MAC
// and fair-lossy consensus protocols.
//
//   macsim run <protocol> [--config file] [flags]    one or many seeded runs
//   macsim sweep --config file --vary n --values ... aggregated parameter sweep
//   macsim check <property> <file>                   verdict over a trace/history file
//   macsim stats firstmover --n 4 --nprime 4 ...     conciliator success estimate
//   macsim stats scaling --csv sweep.csv             log-log slope fit

#include <CLI11.hpp>

#include <iostream>

#include "macsim/checkers.hpp"
#include "macsim/harness.hpp"
#include "macsim/json_io.hpp"
#include "macsim/phase_analysis.hpp"
#include "macsim/runner.hpp"

using namespace macsim;

namespace {

struct RunFlags {
  std::string protocol;
  std::string config_file;
  int n = -1;
  int f = -1;
  std::string eps;
  double delta = -1;
  std::uint64_t seed = 1;
  std::uint64_t seeds = 1;
  std::string adversary;
  std::string byz;
  double drop = -1;
  double crash_hazard = -1;
  std::int64_t n0 = -1;
  double c = -1;
  std::int64_t nprime = -1;
  std::int64_t budget = -1;
  std::int64_t p_end = -1;
  std::string trace_out;
  std::string csv_out;
  std::string phases_out;
  bool full = false;
};

ExperimentConfig build_config(const RunFlags& fl) {
  ExperimentConfig cfg;
  if (!fl.config_file.empty()) cfg = ExperimentConfig::from_file(fl.config_file);
  if (!fl.protocol.empty()) cfg.protocol = protocol_from_string(fl.protocol);
  if (cfg.protocol == Protocol::SmallAc || cfg.protocol == Protocol::SmallBac)
    cfg.transport = Transport::Lossy;
  if (fl.n >= 0) cfg.n = fl.n;
  if (fl.f >= 0) cfg.f = fl.f;
  if (!fl.eps.empty()) cfg.epsilon = fl.eps;
  if (fl.delta >= 0) cfg.delta = fl.delta;
  if (!fl.adversary.empty()) cfg.adversary = fl.adversary;
  if (!fl.byz.empty()) cfg.byz_strategy = fl.byz;
  if (fl.drop >= 0) cfg.lossy.drop_rate = fl.drop;
  if (fl.crash_hazard >= 0) cfg.crash_hazard = fl.crash_hazard;
  if (fl.n0 >= 0) cfg.n0 = fl.n0;
  if (fl.c >= 0) cfg.c = fl.c;
  if (fl.nprime >= 0) cfg.nprime = fl.nprime;
  if (fl.budget >= 0) cfg.event_budget = fl.budget;
  if (fl.p_end >= 0) cfg.p_end_override = fl.p_end;
  cfg.seed = fl.seed;
  if (fl.full) cfg.record = RecordLevel::Full;
  return cfg;
}

int do_run(const RunFlags& fl) {
  ExperimentConfig cfg = build_config(fl);
  cfg.validate();
  ExperimentResult res = run_experiment(cfg, fl.seeds);
  std::cout << metrics_csv(res.rows, cfg.n);
  if (!fl.csv_out.empty()) write_file(fl.csv_out, metrics_csv(res.rows, cfg.n));
  if (!fl.trace_out.empty() || !fl.phases_out.empty()) {
    Trace t = run(cfg);  // re-run the first seed for the dumps
    if (!fl.trace_out.empty()) write_file(fl.trace_out, trace_to_jsonl(cfg, t));
    if (!fl.phases_out.empty()) write_file(fl.phases_out, phase_ranges_csv(t));
  }
  std::cerr << "runs=" << res.runs << " decided=" << res.decided << " timeouts=" << res.timeouts
            << " violations=" << res.failures.size() << "\n";
  for (const auto& v : res.failures) {
    std::cerr << "VIOLATION [" << v.property << "] " << v.witness << "\n";
  }
  return res.failures.empty() ? 0 : 2;
}

int do_check(const std::string& property, const std::string& path) {
  Verdict v = Verdict::ok(property);
  if (property == "regularity") {
    auto text = read_file(path);
    std::vector<HistoryEvent> history;
    if (text.find("\"type\"") != std::string::npos) {
      history = trace_from_jsonl(text).trace.history;
    } else {
      history = history_from_jsonl(text);
    }
    v = check_regularity(history);
  } else {
    LoadedTrace lt = trace_from_jsonl(read_file(path));
    const Trace& t = lt.trace;
    if (property == "validity") {
      v = t.bit_inputs.empty() ? check_validity_range(t) : check_validity_set(t);
    } else if (property == "agreement") {
      v = check_agreement(t);
    } else if (property == "coherence") {
      v = check_coherence(t);
    } else if (property == "epsilon-agreement") {
      v = check_epsilon_agreement(t, lt.cfg.epsilon_frac());
    } else if (property == "halving") {
      v = check_exact_halving(t);
    } else if (property == "contraction") {
      v = check_contraction(t, static_cast<std::uint32_t>(lt.cfg.n));
    } else if (property == "mover-interval") {
      v = check_mac_ac_mover_interval(t);
    } else if (property == "median-interval") {
      v = check_small_ac_median_interval(t);
    } else if (property == "trim-envelope") {
      v = check_ab_envelope(t, lt.cfg.f);
    } else if (property == "decider-span") {
      v = check_decider_phase_span(t);
    } else {
      std::cerr << "unknown property: " << property << "\n";
      return 64;
    }
  }
  if (v.pass) {
    std::cout << "PASS " << v.property << "\n";
    return 0;
  }
  std::cout << "FAIL " << v.property << ": " << v.witness << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"abstract-MAC / lossy-link consensus simulator"};
  app.require_subcommand(1);

  RunFlags fl;
  auto* run_cmd = app.add_subcommand("run", "simulate seeded runs of a protocol");
  run_cmd->add_option("protocol", fl.protocol,
                      "store-collect|adopt-commit|rbc|first-mover|rbc2|mac-ac|mac-ac2|small-ac|"
                      "small-bac");
  run_cmd->add_option("--config", fl.config_file, "JSON config file");
  run_cmd->add_option("--n", fl.n, "number of nodes");
  run_cmd->add_option("--f", fl.f, "fault bound / crash budget");
  run_cmd->add_option("--eps", fl.eps, "epsilon (e.g. 2^-6, 1/64, 0.015625)");
  run_cmd->add_option("--delta", fl.delta, "failure probability parameter");
  run_cmd->add_option("--seed", fl.seed, "first seed");
  run_cmd->add_option("--seeds", fl.seeds, "number of consecutive seeds");
  run_cmd->add_option("--adversary", fl.adversary, "lockstep|random|delay|antiack");
  run_cmd->add_option("--byz", fl.byz, "extremes|equivocate|mimic|silent|random");
  run_cmd->add_option("--drop", fl.drop, "lossy i.i.d. drop rate");
  run_cmd->add_option("--crash-hazard", fl.crash_hazard, "per-step crash probability");
  run_cmd->add_option("--n0", fl.n0, "rbc2 initial size guess");
  run_cmd->add_option("--c", fl.c, "rbc2 doubling period");
  run_cmd->add_option("--nprime", fl.nprime, "first-mover estimated size");
  run_cmd->add_option("--budget", fl.budget, "event budget");
  run_cmd->add_option("--p-end", fl.p_end, "truncate to this termination phase");
  run_cmd->add_option("--trace-out", fl.trace_out, "write first seed's trace (JSONL)");
  run_cmd->add_option("--phases-out", fl.phases_out, "write first seed's per-phase CSV");
  run_cmd->add_option("--csv-out", fl.csv_out, "write the metrics CSV");
  run_cmd->add_flag("--full", fl.full, "record the full event log");

  std::string sweep_vary, sweep_values;
  std::uint64_t sweep_seeds = 50;
  std::string sweep_out;
  auto* sweep_cmd = app.add_subcommand("sweep", "sweep one parameter, aggregate per value");
  sweep_cmd->add_option("--config", fl.config_file, "JSON config file")->required();
  sweep_cmd->add_option("--vary", sweep_vary, "n|epsilon|delta|drop_rate|Delta")->required();
  sweep_cmd->add_option("--values", sweep_values, "comma-separated values")->required();
  sweep_cmd->add_option("--seeds", sweep_seeds, "seeds per value");
  sweep_cmd->add_option("--csv-out", sweep_out, "write the aggregate CSV");

  std::string check_property, check_file;
  auto* check_cmd = app.add_subcommand("check", "run one checker over a trace/history file");
  check_cmd->add_option("property", check_property, "property name")->required();
  check_cmd->add_option("file", check_file, "trace or history JSONL")->required();

  auto* stats_cmd = app.add_subcommand("stats", "statistical summaries");
  int fm_n = 4;
  std::int64_t fm_nprime = 4;
  std::uint64_t fm_trials = 1000, fm_seed = 1;
  double fm_delta = 0.1;
  auto* fm_cmd = stats_cmd->add_subcommand("firstmover", "unique-successful-coin estimate");
  fm_cmd->add_option("--n", fm_n);
  fm_cmd->add_option("--nprime", fm_nprime);
  fm_cmd->add_option("--trials", fm_trials);
  fm_cmd->add_option("--seed", fm_seed);
  fm_cmd->add_option("--delta", fm_delta);

  std::string scaling_csv;
  auto* sc_cmd = stats_cmd->add_subcommand("scaling", "fit log-log exponent from a sweep CSV");
  sc_cmd->add_option("--csv", scaling_csv, "sweep CSV with n and mean_broadcasts columns")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return do_run(fl);
    if (sweep_cmd->parsed()) {
      ExperimentConfig cfg = ExperimentConfig::from_file(fl.config_file);
      std::vector<std::string> values;
      std::stringstream ss(sweep_values);
      std::string item;
      while (std::getline(ss, item, ',')) values.push_back(item);
      auto rows = sweep(cfg, sweep_vary, values, sweep_seeds);
      std::string csv = sweep_csv(rows, sweep_vary);
      std::cout << csv;
      if (!sweep_out.empty()) write_file(sweep_out, csv);
      return 0;
    }
    if (check_cmd->parsed()) return do_check(check_property, check_file);
    if (fm_cmd->parsed()) {
      auto est = estimate_firstmover_success(fm_n, fm_nprime, fm_trials, fm_seed, fm_delta);
      std::cout << "trials=" << est.trials << " unique_success=" << est.unique_success
                << " p_hat=" << est.p_hat << " wilson95=[" << est.wilson_lo << ","
                << est.wilson_hi << "]"
                << " bound_originals=" << est.bound_broadcasts
                << " within_bound_fraction=" << est.within_fraction << "\n";
      return 0;
    }
    if (sc_cmd->parsed()) {
      std::istringstream in(read_file(scaling_csv));
      std::string line;
      std::getline(in, line);
      std::vector<std::string> header;
      {
        std::stringstream hs(line);
        std::string col;
        while (std::getline(hs, col, ',')) header.push_back(col);
      }
      std::size_t ncol = 0, mcol = 0;
      for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "n") ncol = i;
        if (header[i] == "mean_broadcasts") mcol = i;
      }
      std::vector<double> ns, means;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::string col;
        std::vector<std::string> cols;
        while (std::getline(ls, col, ',')) cols.push_back(col);
        ns.push_back(std::stod(cols[ncol]));
        means.push_back(std::stod(cols[mcol]));
      }
      std::cout << "exponent=" << fit_scaling(ns, means) << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 64;
  }
  return 0;
}
