#pragma once

#include <string>
#include <vector>

#include "macsim/trace.hpp"

namespace macsim {

struct Verdict {
  std::string property;
  bool pass = true;
  std::string witness;                  // empty on pass
  std::vector<Clock> witness_times;     // trace times for deterministic replay

  static Verdict ok(std::string property) { return Verdict{std::move(property), true, "", {}}; }
  static Verdict fail(std::string property, std::string witness, std::vector<Clock> times = {}) {
    return Verdict{std::move(property), false, std::move(witness), std::move(times)};
  }
};

// Store-collect regularity over a recorded operation history:
//   Property I  (freshness): a collect returning bottom for j admits no store
//   by j that precedes it; a returned (v, j) was invoked before the collect's
//   response and no fresher completed store by j fits before the collect's
//   invocation.
//   Property II (monotonicity): precedence-ordered collects return
//   view-ordered views (per-node seq comparison).
// Returns the first violation found.
Verdict check_regularity(const std::vector<HistoryEvent>& history);

std::string history_to_jsonl(const std::vector<HistoryEvent>& history);
std::vector<HistoryEvent> history_from_jsonl(const std::string& text);

}  // namespace macsim
