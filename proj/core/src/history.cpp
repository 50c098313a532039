#include "macsim/history.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <json.hpp>

namespace macsim {

namespace {

struct Op {
  NodeId node = -1;
  bool is_store = false;
  Clock inv = -1;
  Clock resp = -1;  // -1: open (crash mid-op)
  std::string value;
  std::int64_t seq = -1;
  View view;  // collect resp
  bool completed() const { return resp >= 0; }
};

}  // namespace

Verdict check_regularity(const std::vector<HistoryEvent>& history) {
  // pair inv/resp per node (ops are sequential per node)
  std::map<NodeId, std::vector<std::size_t>> open;
  std::vector<Op> ops;
  for (const auto& ev : history) {
    if (ev.is_inv) {
      Op op;
      op.node = ev.node;
      op.is_store = ev.is_store;
      op.inv = ev.time;
      op.value = ev.value;
      op.seq = ev.seq;
      auto& stack = open[ev.node];
      if (!stack.empty())
        return Verdict::fail("regularity", "malformed history: overlapping ops at one node",
                             {ev.time});
      stack.push_back(ops.size());
      ops.push_back(std::move(op));
    } else {
      auto& stack = open[ev.node];
      if (stack.empty())
        return Verdict::fail("regularity", "malformed history: resp without inv", {ev.time});
      Op& op = ops[stack.back()];
      stack.pop_back();
      if (op.is_store != ev.is_store)
        return Verdict::fail("regularity", "malformed history: mismatched resp kind", {ev.time});
      op.resp = ev.time;
      if (!op.is_store) op.view = ev.view;
    }
  }

  // per-node completed stores, by seq (== program order)
  std::map<NodeId, std::vector<const Op*>> stores;
  for (const auto& op : ops) {
    if (op.is_store) stores[op.node].push_back(&op);
  }
  for (auto& [node, list] : stores) {
    std::sort(list.begin(), list.end(),
              [](const Op* a, const Op* b) { return a->seq < b->seq; });
  }

  std::vector<const Op*> collects;
  for (const auto& op : ops) {
    if (!op.is_store && op.completed()) collects.push_back(&op);
  }

  // Property I
  for (const Op* c : collects) {
    for (const auto& [node, node_stores] : stores) {
      auto it = c->view.find(node);
      if (it == c->view.end()) {
        for (const Op* s : node_stores) {
          if (s->completed() && s->resp < c->inv) {
            return Verdict::fail(
                "regularity",
                "Property I: collect at node " + std::to_string(c->node) + " returned no entry of " +
                    std::to_string(node) + " but store(" + s->value + ") precedes it",
                {s->resp, c->inv});
          }
        }
      } else {
        const ViewEntry& entry = it->second;
        const Op* found = nullptr;
        for (const Op* s : node_stores) {
          if (s->seq == entry.seq) {
            found = s;
            break;
          }
        }
        if (found == nullptr)
          return Verdict::fail("regularity",
                               "Property I: returned value (" + entry.value +
                                   ") was never stored by node " + std::to_string(node),
                               {c->resp});
        if (found->value != entry.value)
          return Verdict::fail("regularity", "Property I: value/seq mismatch for node " +
                                                 std::to_string(node),
                               {c->resp});
        if (found->inv >= c->resp)
          return Verdict::fail("regularity",
                               "Property I: store(" + entry.value +
                                   ") invoked after the collect's response",
                               {found->inv, c->resp});
        for (const Op* s : node_stores) {
          if (s->seq > entry.seq && s->completed() && s->resp > found->resp && s->resp < c->inv) {
            return Verdict::fail("regularity",
                                 "Property I: fresher completed store(" + s->value +
                                     ") by node " + std::to_string(node) +
                                     " fits before the collect's invocation",
                                 {s->resp, c->inv});
          }
        }
      }
    }
  }

  // Property II
  for (const Op* c1 : collects) {
    for (const Op* c2 : collects) {
      if (c1 == c2 || c1->resp >= c2->inv) continue;  // needs c1 precedes c2
      for (const auto& [node, e1] : c1->view) {
        auto it = c2->view.find(node);
        if (it == c2->view.end()) {
          return Verdict::fail("regularity",
                               "Property II: later collect lost node " + std::to_string(node) +
                                   "'s entry",
                               {c1->resp, c2->inv});
        }
        if (it->second.seq < e1.seq) {
          return Verdict::fail("regularity",
                               "Property II: later collect returned older value (" +
                                   it->second.value + " < " + e1.value + ") for node " +
                                   std::to_string(node),
                               {c1->resp, c2->inv});
        }
      }
    }
  }

  return Verdict::ok("regularity");
}

std::string history_to_jsonl(const std::vector<HistoryEvent>& history) {
  std::ostringstream out;
  for (const auto& ev : history) {
    nlohmann::ordered_json j;
    j["time"] = ev.time;
    j["node"] = ev.node;
    j["op"] = ev.is_store ? "store" : "collect";
    j["edge"] = ev.is_inv ? "inv" : "resp";
    if (ev.is_store && ev.is_inv) {
      j["value"] = ev.value;
      j["seq"] = ev.seq;
    }
    if (!ev.is_store && !ev.is_inv) {
      nlohmann::ordered_json view = nlohmann::ordered_json::array();
      for (const auto& [node, e] : ev.view)
        view.push_back({{"node", node}, {"value", e.value}, {"seq", e.seq}});
      j["view"] = view;
    }
    out << j.dump() << "\n";
  }
  return out.str();
}

std::vector<HistoryEvent> history_from_jsonl(const std::string& text) {
  std::vector<HistoryEvent> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::ordered_json::parse(line);
    HistoryEvent ev;
    ev.time = j.at("time").get<Clock>();
    ev.node = j.at("node").get<NodeId>();
    ev.is_store = j.at("op").get<std::string>() == "store";
    ev.is_inv = j.at("edge").get<std::string>() == "inv";
    if (j.contains("value")) ev.value = j["value"].get<std::string>();
    if (j.contains("seq")) ev.seq = j["seq"].get<std::int64_t>();
    if (j.contains("view")) {
      for (const auto& item : j["view"]) {
        ev.view[item.at("node").get<NodeId>()] =
            ViewEntry{item.at("value").get<std::string>(), item.at("seq").get<std::int64_t>()};
      }
    }
    out.push_back(std::move(ev));
  }
  return out;
}

}  // namespace macsim
