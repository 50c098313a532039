#include "macsim/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace macsim {

using nlohmann::ordered_json;

namespace {

ordered_json dyadic_json(const Dyadic& d) {
  return ordered_json{{"dec", d.to_decimal()}, {"dy", d.to_pow2_string()}};
}

Dyadic dyadic_from(const ordered_json& j) { return Dyadic::parse(j.at("dy").get<std::string>()); }

const char* verdict_name(RunVerdict v) {
  switch (v) {
    case RunVerdict::Completed: return "completed";
    case RunVerdict::Timeout: return "timeout";
    case RunVerdict::Stalled: return "stalled";
    case RunVerdict::ConfigError: return "config-error";
  }
  return "?";
}

RunVerdict verdict_from(const std::string& s) {
  if (s == "completed") return RunVerdict::Completed;
  if (s == "timeout") return RunVerdict::Timeout;
  if (s == "stalled") return RunVerdict::Stalled;
  return RunVerdict::ConfigError;
}

}  // namespace

std::string trace_to_jsonl(const ExperimentConfig& cfg, const Trace& t) {
  std::ostringstream out;
  {
    ordered_json j;
    j["type"] = "config";
    j["config"] = ordered_json::parse(cfg.to_json());
    out << j.dump() << "\n";
  }
  if (!t.bit_inputs.empty() || !t.dyadic_inputs.empty()) {
    ordered_json j;
    j["type"] = "inputs";
    if (!t.bit_inputs.empty()) j["bits"] = t.bit_inputs;
    if (!t.dyadic_inputs.empty()) {
      ordered_json arr = ordered_json::array();
      for (const auto& v : t.dyadic_inputs) arr.push_back(dyadic_json(v));
      j["values"] = arr;
    }
    out << j.dump() << "\n";
  }
  for (const auto& e : t.events) {
    ordered_json j;
    j["type"] = "event";
    j["time"] = e.time;
    j["kind"] = to_string(e.kind);
    j["node"] = e.node;
    if (e.bid >= 0) {
      j["bid"] = e.bid;
      const BroadcastSummary* b = nullptr;
      if (e.kind == EventKind::Deliver || e.kind == EventKind::Ack) {
        if (e.bid < static_cast<BcastId>(t.broadcasts.size()) &&
            t.broadcasts[static_cast<std::size_t>(e.bid)].bid == e.bid)
          b = &t.broadcasts[static_cast<std::size_t>(e.bid)];
      }
      if (b != nullptr) {
        j["payload"] = b->payload.render();
        if (b->payload.phase >= 0) j["phase"] = b->payload.phase;
      } else if (e.bid < static_cast<BcastId>(t.datagrams.size())) {
        const auto& d = t.datagrams[static_cast<std::size_t>(e.bid)];
        j["payload"] = d.payload.render();
        if (d.payload.phase >= 0) j["phase"] = d.payload.phase;
      }
    }
    if (e.aux != 0) j["aux"] = e.aux;
    out << j.dump() << "\n";
  }
  for (const auto& b : t.broadcasts) {
    ordered_json j;
    j["type"] = "broadcast";
    j["bid"] = b.bid;
    j["sender"] = b.sender;
    j["seq"] = b.seq;
    j["payload"] = b.payload.render();
    j["tag"] = to_string(b.payload.tag);
    if (b.payload.bit >= 0) j["bit"] = int(b.payload.bit);
    if (!b.payload.value.is_zero() || b.payload.tag == MsgTag::Value ||
        b.payload.tag == MsgTag::State)
      j["value"] = dyadic_json(b.payload.value);
    if (b.payload.phase >= 0) j["phase"] = b.payload.phase;
    j["submitted"] = b.submitted;
    j["acked"] = b.acked;
    j["delivered"] = b.delivered_count;
    if (b.payload.origin != MsgOrigin::None)
      j["origin"] = b.payload.origin == MsgOrigin::Original ? "original" : "follow-up";
    if (b.sender_crashed_before_ack) j["sender_crashed"] = true;
    out << j.dump() << "\n";
  }
  for (NodeId i = 0; i < t.n; ++i) {
    for (const auto& e : t.phases[static_cast<std::size_t>(i)]) {
      ordered_json j;
      j["type"] = "phase";
      j["node"] = i;
      j["p"] = e.phase;
      j["by"] = to_string(e.entered_by);
      if (e.bit >= 0)
        j["bit"] = int(e.bit);
      else
        j["value"] = dyadic_json(e.value);
      j["at"] = e.at;
      out << j.dump() << "\n";
    }
  }
  for (NodeId i = 0; i < t.n; ++i) {
    const Output& o = t.outputs[static_cast<std::size_t>(i)];
    if (!o.present) continue;
    ordered_json j;
    j["type"] = "output";
    j["node"] = i;
    j["phase"] = o.phase;
    if (o.decision != Decision::None) j["decision"] = to_string(o.decision);
    if (o.bit >= 0)
      j["bit"] = int(o.bit);
    else
      j["value"] = dyadic_json(o.value);
    j["at"] = o.at;
    out << j.dump() << "\n";
  }
  for (const auto& h : t.history) {
    ordered_json j;
    j["type"] = "history";
    j["time"] = h.time;
    j["node"] = h.node;
    j["op"] = h.is_store ? "store" : "collect";
    j["edge"] = h.is_inv ? "inv" : "resp";
    if (h.is_store && h.is_inv) {
      j["value"] = h.value;
      j["seq"] = h.seq;
    }
    if (!h.is_store && !h.is_inv) {
      ordered_json view = ordered_json::array();
      for (const auto& [node, e] : h.view)
        view.push_back({{"node", node}, {"value", e.value}, {"seq", e.seq}});
      j["view"] = view;
    }
    out << j.dump() << "\n";
  }
  {
    ordered_json j;
    j["type"] = "summary";
    j["verdict"] = verdict_name(t.verdict);
    j["seed"] = t.seed;
    j["events"] = t.counters.events;
    j["broadcasts"] = t.counters.broadcasts;
    j["originals"] = t.counters.originals;
    j["followups"] = t.counters.followups;
    j["coins"] = t.counters.coins;
    j["dummies"] = t.counters.dummies;
    j["datagrams"] = t.counters.datagrams;
    j["dropped"] = t.counters.dropped;
    j["forced_deliveries"] = t.counters.forced_deliveries;
    j["crashes"] = t.counters.crashes;
    ordered_json crashed = ordered_json::array();
    for (std::size_t i = 0; i < t.crashed.size(); ++i)
      if (t.crashed[i]) crashed.push_back(i);
    j["crashed"] = crashed;
    ordered_json byz = ordered_json::array();
    for (std::size_t i = 0; i < t.byzantine.size(); ++i)
      if (t.byzantine[i]) byz.push_back(i);
    j["byzantine"] = byz;
    out << j.dump() << "\n";
  }
  return out.str();
}

LoadedTrace trace_from_jsonl(const std::string& text) {
  LoadedTrace lt;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ordered_json j = ordered_json::parse(line);
    std::string type = j.at("type").get<std::string>();
    if (type == "config") {
      lt.cfg = ExperimentConfig::from_json(j.at("config").dump());
      lt.trace.n = lt.cfg.n;
      lt.trace.phases.resize(static_cast<std::size_t>(lt.cfg.n));
      lt.trace.outputs.resize(static_cast<std::size_t>(lt.cfg.n));
      lt.trace.crashed.assign(static_cast<std::size_t>(lt.cfg.n), false);
      lt.trace.byzantine.assign(static_cast<std::size_t>(lt.cfg.n), false);
    } else if (type == "inputs") {
      if (j.contains("bits")) lt.trace.bit_inputs = j["bits"].get<std::vector<int>>();
      if (j.contains("values"))
        for (const auto& item : j["values"]) lt.trace.dyadic_inputs.push_back(dyadic_from(item));
    } else if (type == "phase") {
      PhaseEntry e;
      e.phase = j.at("p").get<std::int64_t>();
      std::string by = j.at("by").get<std::string>();
      e.entered_by = by == "move" ? TransKind::Move
                                  : (by == "jump" ? TransKind::Jump : TransKind::Input);
      if (j.contains("bit"))
        e.bit = static_cast<std::int8_t>(j["bit"].get<int>());
      else
        e.value = dyadic_from(j.at("value"));
      e.at = j.at("at").get<Clock>();
      lt.trace.phases[j.at("node").get<std::size_t>()].push_back(std::move(e));
    } else if (type == "output") {
      Output o;
      o.present = true;
      o.phase = j.at("phase").get<std::int64_t>();
      if (j.contains("decision"))
        o.decision = j["decision"] == "commit" ? Decision::Commit : Decision::Adopt;
      if (j.contains("bit"))
        o.bit = static_cast<std::int8_t>(j["bit"].get<int>());
      else
        o.value = dyadic_from(j.at("value"));
      o.at = j.at("at").get<Clock>();
      lt.trace.outputs[j.at("node").get<std::size_t>()] = std::move(o);
    } else if (type == "history") {
      HistoryEvent ev;
      ev.time = j.at("time").get<Clock>();
      ev.node = j.at("node").get<NodeId>();
      ev.is_store = j.at("op").get<std::string>() == "store";
      ev.is_inv = j.at("edge").get<std::string>() == "inv";
      if (j.contains("value")) ev.value = j["value"].get<std::string>();
      if (j.contains("seq")) ev.seq = j["seq"].get<std::int64_t>();
      if (j.contains("view")) {
        for (const auto& item : j["view"])
          ev.view[item.at("node").get<NodeId>()] =
              ViewEntry{item.at("value").get<std::string>(), item.at("seq").get<std::int64_t>()};
      }
      lt.trace.history.push_back(std::move(ev));
    } else if (type == "summary") {
      lt.trace.verdict = verdict_from(j.at("verdict").get<std::string>());
      lt.trace.seed = j.at("seed").get<std::uint64_t>();
      if (j.contains("crashed"))
        for (const auto& i : j["crashed"]) lt.trace.crashed[i.get<std::size_t>()] = true;
      if (j.contains("byzantine"))
        for (const auto& i : j["byzantine"]) lt.trace.byzantine[i.get<std::size_t>()] = true;
    }
    else if (type == "broadcast") {
      BroadcastSummary b;
      b.bid = j.at("bid").get<BcastId>();
      b.sender = j.at("sender").get<NodeId>();
      b.seq = j.at("seq").get<std::int32_t>();
      if (j.contains("tag")) {
        std::string tag = j["tag"].get<std::string>();
        for (MsgTag t2 : {MsgTag::Store, MsgTag::Value, MsgTag::Proposal, MsgTag::Value2,
                          MsgTag::Coin, MsgTag::Dummy, MsgTag::Id, MsgTag::State}) {
          if (tag == to_string(t2)) b.payload.tag = t2;
        }
      }
      if (j.contains("bit")) b.payload.bit = static_cast<std::int8_t>(j["bit"].get<int>());
      if (j.contains("value")) b.payload.value = dyadic_from(j["value"]);
      if (j.contains("phase")) b.payload.phase = j["phase"].get<std::int64_t>();
      b.submitted = j.at("submitted").get<Clock>();
      b.acked = j.at("acked").get<Clock>();
      b.delivered_count = j.at("delivered").get<std::int32_t>();
      if (j.contains("origin"))
        b.payload.origin = j["origin"] == "original" ? MsgOrigin::Original : MsgOrigin::FollowUp;
      if (j.contains("sender_crashed")) b.sender_crashed_before_ack = true;
      lt.trace.broadcasts.push_back(std::move(b));
    }
    // event records are exported for humans and external tooling; checkers
    // that need the event log run on in-memory traces
  }
  return lt;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace macsim
