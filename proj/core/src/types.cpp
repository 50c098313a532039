#include "macsim/types.hpp"

namespace macsim {

View merge_views(const View& a, const View& b) {
  View out = a;
  for (const auto& [node, entry] : b) {
    auto it = out.find(node);
    if (it == out.end()) {
      out.emplace(node, entry);
    } else if (entry.seq > it->second.seq) {
      it->second = entry;
    } else if (entry.seq == it->second.seq && entry.value != it->second.value) {
      throw EngineFault("merge_views: conflicting values at equal seq (uniqueness violated)");
    }
  }
  return out;
}

std::string Payload::render() const {
  std::string s = to_string(tag);
  switch (tag) {
    case MsgTag::Store: {
      s += "{";
      bool first = true;
      for (const auto& [node, e] : view) {
        if (!first) s += ",";
        first = false;
        s += "(" + e.value + "," + std::to_string(node) + "#" + std::to_string(e.seq) + ")";
      }
      s += "}";
      break;
    }
    case MsgTag::Value:
    case MsgTag::Proposal:
    case MsgTag::Value2:
    case MsgTag::Coin:
      if (bit >= 0) {
        s += "(" + std::to_string(int(bit));
      } else {
        s += "(" + value.to_pow2_string();
      }
      if (phase >= 0) s += ",p" + std::to_string(phase);
      s += ")";
      break;
    case MsgTag::State:
      s += "(" + std::to_string(sender) + "," + value.to_pow2_string() + ",p" +
           std::to_string(phase) + ")";
      break;
    case MsgTag::Dummy:
      if (phase >= 0) s += "(p" + std::to_string(phase) + ")";
      break;
    case MsgTag::Id:
      break;
  }
  return s;
}

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::Deliver: return "deliver";
    case EventKind::Ack: return "ack";
    case EventKind::Crash: return "crash";
    case EventKind::Segment: return "segment";
    case EventKind::Tick: return "tick";
  }
  return "?";
}

const char* to_string(MsgTag t) {
  switch (t) {
    case MsgTag::Store: return "STORE";
    case MsgTag::Value: return "VALUE";
    case MsgTag::Proposal: return "PROPOSAL";
    case MsgTag::Value2: return "VALUE2";
    case MsgTag::Coin: return "COIN";
    case MsgTag::Dummy: return "DUMMY";
    case MsgTag::Id: return "ID";
    case MsgTag::State: return "STATE";
  }
  return "?";
}

const char* to_string(TransKind t) {
  switch (t) {
    case TransKind::Input: return "input";
    case TransKind::Move: return "move";
    case TransKind::Jump: return "jump";
  }
  return "?";
}

const char* to_string(Decision d) {
  switch (d) {
    case Decision::None: return "none";
    case Decision::Commit: return "commit";
    case Decision::Adopt: return "adopt";
  }
  return "?";
}

}  // namespace macsim
