#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "macsim/trace.hpp"
#include "macsim/types.hpp"

namespace macsim {

enum class Protocol : std::uint8_t {
  StoreCollect,
  AdoptCommit,
  Rbc,
  FirstMover,
  Rbc2,
  MacAc,
  MacAc2,
  SmallAc,
  SmallBac,
};

enum class Transport : std::uint8_t { Mac, Lossy };

const char* to_string(Protocol p);
const char* to_string(Transport t);
Protocol protocol_from_string(const std::string& s);

// One store-collect workload step.
struct ScOp {
  bool is_store = false;
  std::string value;  // store only
};

struct LossyParams {
  std::int64_t t = 0;       // broadcast period (events); 0 = auto (2n)
  std::int64_t Delta = 0;   // progress bound (events); 0 = auto (8t)
  double drop_rate = 0.0;   // i.i.d. datagram drop probability (fairness-capped)
};

struct ExperimentConfig {
  Protocol protocol = Protocol::MacAc;
  int n = 2;
  int f = 0;  // lossy resilience parameter / MAC crash budget
  Transport transport = Transport::Mac;
  std::string adversary = "random";
  std::string byz_strategy;  // SmallBAC only
  std::uint64_t seed = 1;

  std::string epsilon = "2^-6";
  double delta = 0.1;

  std::int64_t n0 = 1;    // RBC2 initial size guess
  double c = 4.0;         // RBC2 doubling period (ln(2/delta)/0.05 matches the failure bound)
  std::int64_t nprime = 1;        // standalone FirstMover estimate
  int n_upper = 0;                // MAC-AC2 bound on n; 0 = n
  std::int64_t p_end_override = -1;  // truncate long SmallBAC runs
  bool include_self_value = true;    // SmallBAC: feed own value to Store at reset

  LossyParams lossy{};
  std::int64_t event_budget = 1'000'000;
  double crash_hazard = 0.0;  // per-step crash probability while budget remains

  // Inputs; generated from the seed when empty.
  std::vector<int> bit_inputs;          // binary protocols
  std::vector<std::string> dyadic_inputs;  // approximate protocols, parseable
  std::vector<std::vector<ScOp>> sc_ops;   // store-collect scripts

  RecordLevel record = RecordLevel::Standard;
  // Withhold deliveries to a node until it has taken its first segment
  // (every node announces phase 0 before hearing anything). Used by the
  // fold-on-receive protocol, where a pre-announcement receipt would blur
  // the phase-0 state.
  bool gate_start = false;

  // Derived/validated quantities.
  Frac epsilon_frac() const { return Frac::parse(epsilon); }
  std::int64_t lossy_period() const { return lossy.t > 0 ? lossy.t : 4 * n; }
  std::int64_t lossy_delta() const { return lossy.Delta > 0 ? lossy.Delta : 8 * lossy_period(); }

  // Throws std::invalid_argument on violated preconditions
  // (resilience inequalities, parameter ranges).
  void validate() const;

  std::string to_json() const;
  static ExperimentConfig from_json(const std::string& text);
  static ExperimentConfig from_file(const std::string& path);
};

}  // namespace macsim
