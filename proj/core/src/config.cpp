#include "macsim/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace macsim {

using nlohmann::ordered_json;

const char* to_string(Protocol p) {
  switch (p) {
    case Protocol::StoreCollect: return "store-collect";
    case Protocol::AdoptCommit: return "adopt-commit";
    case Protocol::Rbc: return "rbc";
    case Protocol::FirstMover: return "first-mover";
    case Protocol::Rbc2: return "rbc2";
    case Protocol::MacAc: return "mac-ac";
    case Protocol::MacAc2: return "mac-ac2";
    case Protocol::SmallAc: return "small-ac";
    case Protocol::SmallBac: return "small-bac";
  }
  return "?";
}

const char* to_string(Transport t) { return t == Transport::Mac ? "mac" : "lossy"; }

Protocol protocol_from_string(const std::string& s) {
  for (Protocol p : {Protocol::StoreCollect, Protocol::AdoptCommit, Protocol::Rbc,
                     Protocol::FirstMover, Protocol::Rbc2, Protocol::MacAc, Protocol::MacAc2,
                     Protocol::SmallAc, Protocol::SmallBac}) {
    if (s == to_string(p)) return p;
  }
  throw std::invalid_argument("unknown protocol: " + s);
}

void ExperimentConfig::validate() const {
  if (n < 1) throw std::invalid_argument("config: n must be >= 1");
  if (f < 0) throw std::invalid_argument("config: f must be >= 0");
  if (event_budget <= 0) throw std::invalid_argument("config: event_budget must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("config: delta must be in (0,1)");
  Frac eps = epsilon_frac();
  if (eps.num().is_zero()) throw std::invalid_argument("config: epsilon must be > 0");
  if (Frac::compare(Dyadic::one(), eps) < 0)
    throw std::invalid_argument("config: epsilon must be <= 1");
  switch (protocol) {
    case Protocol::SmallAc:
      if (n < 2 * f + 1) throw std::invalid_argument("config: small-ac requires n >= 2f+1");
      break;
    case Protocol::SmallBac:
      if (n < 5 * f + 1) throw std::invalid_argument("config: small-bac requires n >= 5f+1");
      break;
    case Protocol::Rbc2:
      if (n0 < 1) throw std::invalid_argument("config: n0 must be >= 1");
      if (!(c > 0)) throw std::invalid_argument("config: c must be > 0");
      break;
    case Protocol::FirstMover:
      if (nprime < 1) throw std::invalid_argument("config: n' must be >= 1");
      break;
    default:
      break;
  }
  bool lossy_proto = protocol == Protocol::SmallAc || protocol == Protocol::SmallBac;
  if (lossy_proto && transport != Transport::Lossy)
    throw std::invalid_argument("config: small-ac/small-bac need the lossy transport");
  if (!lossy_proto && transport != Transport::Mac)
    throw std::invalid_argument("config: MAC protocols need the mac transport");
  if (transport == Transport::Lossy) {
    if (lossy_period() < n)
      throw std::invalid_argument("config: lossy period t must be >= n");
    if (lossy_delta() < lossy_period())
      throw std::invalid_argument("config: Delta must be >= t");
    if (lossy.drop_rate < 0.0 || lossy.drop_rate > 1.0)
      throw std::invalid_argument("config: drop rate must be in [0,1]");
  }
  for (int b : bit_inputs) {
    if (b != 0 && b != 1) throw std::invalid_argument("config: binary inputs must be 0/1");
  }
  for (const auto& s : dyadic_inputs) {
    Dyadic v = Dyadic::parse(s);
    if (v.negative() || Dyadic::from_int(1) < v)
      throw std::invalid_argument("config: inputs must lie in [0,1]");
  }
}

std::string ExperimentConfig::to_json() const {
  ordered_json j;
  j["protocol"] = to_string(protocol);
  j["n"] = n;
  j["f"] = f;
  j["transport"] = to_string(transport);
  j["adversary"] = adversary;
  if (!byz_strategy.empty()) j["byz"] = byz_strategy;
  j["seed"] = seed;
  j["epsilon"] = epsilon;
  j["delta"] = delta;
  j["n0"] = n0;
  j["c"] = c;
  if (protocol == Protocol::FirstMover) j["nprime"] = nprime;
  if (n_upper > 0) j["n_upper"] = n_upper;
  if (p_end_override >= 0) j["p_end"] = p_end_override;
  if (include_self_value) j["include_self_value"] = true;
  j["t"] = lossy.t;
  j["Delta"] = lossy.Delta;
  if (lossy.drop_rate > 0) j["drop_rate"] = lossy.drop_rate;
  j["event_budget"] = event_budget;
  if (crash_hazard > 0) j["crash_hazard"] = crash_hazard;
  if (!bit_inputs.empty()) j["inputs"] = bit_inputs;
  if (!dyadic_inputs.empty()) j["inputs"] = dyadic_inputs;
  if (!sc_ops.empty()) {
    ordered_json scripts = ordered_json::array();
    for (const auto& ops : sc_ops) {
      ordered_json script = ordered_json::array();
      for (const auto& op : ops) {
        if (op.is_store)
          script.push_back(ordered_json{{"store", op.value}});
        else
          script.push_back("collect");
      }
      scripts.push_back(script);
    }
    j["ops"] = scripts;
  }
  return j.dump();
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  ordered_json j = ordered_json::parse(text);
  ExperimentConfig c;
  c.protocol = protocol_from_string(j.at("protocol").get<std::string>());
  if (j.contains("n")) c.n = j["n"].get<int>();
  if (j.contains("f")) c.f = j["f"].get<int>();
  if (j.contains("transport"))
    c.transport = j["transport"].get<std::string>() == "lossy" ? Transport::Lossy : Transport::Mac;
  else if (c.protocol == Protocol::SmallAc || c.protocol == Protocol::SmallBac)
    c.transport = Transport::Lossy;
  if (j.contains("adversary")) c.adversary = j["adversary"].get<std::string>();
  if (j.contains("byz")) c.byz_strategy = j["byz"].get<std::string>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("epsilon")) {
    if (j["epsilon"].is_number())
      c.epsilon = ordered_json(j["epsilon"]).dump();
    else
      c.epsilon = j["epsilon"].get<std::string>();
  }
  if (j.contains("delta")) c.delta = j["delta"].get<double>();
  if (j.contains("n0")) c.n0 = j["n0"].get<std::int64_t>();
  if (j.contains("c")) c.c = j["c"].get<double>();
  if (j.contains("nprime")) c.nprime = j["nprime"].get<std::int64_t>();
  if (j.contains("n_upper")) c.n_upper = j["n_upper"].get<int>();
  if (j.contains("p_end")) c.p_end_override = j["p_end"].get<std::int64_t>();
  if (j.contains("include_self_value")) c.include_self_value = j["include_self_value"].get<bool>();
  if (j.contains("t")) c.lossy.t = j["t"].get<std::int64_t>();
  if (j.contains("Delta")) c.lossy.Delta = j["Delta"].get<std::int64_t>();
  if (j.contains("drop_rate")) c.lossy.drop_rate = j["drop_rate"].get<double>();
  if (j.contains("event_budget")) c.event_budget = j["event_budget"].get<std::int64_t>();
  if (j.contains("crash_hazard")) c.crash_hazard = j["crash_hazard"].get<double>();
  if (j.contains("inputs")) {
    for (const auto& item : j["inputs"]) {
      if (item.is_number_integer() &&
          (c.protocol == Protocol::AdoptCommit || c.protocol == Protocol::Rbc ||
           c.protocol == Protocol::Rbc2 || c.protocol == Protocol::FirstMover)) {
        c.bit_inputs.push_back(item.get<int>());
      } else if (item.is_string()) {
        c.dyadic_inputs.push_back(item.get<std::string>());
      } else {
        c.dyadic_inputs.push_back(ordered_json(item).dump());
      }
    }
  }
  if (j.contains("ops")) {
    for (const auto& script : j["ops"]) {
      std::vector<ScOp> ops;
      for (const auto& op : script) {
        if (op.is_string()) {
          ops.push_back(ScOp{false, ""});
        } else {
          ops.push_back(ScOp{true, op.at("store").get<std::string>()});
        }
      }
      c.sc_ops.push_back(std::move(ops));
    }
  }
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

}  // namespace macsim
