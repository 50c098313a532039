#pragma once

#include <string>

#include "macsim/config.hpp"
#include "macsim/trace.hpp"

namespace macsim {

// Trace file: JSON-lines. First record carries the config, then one record
// per event ({time, kind, node, bid, payload, phase}), then phase snapshots,
// outputs, history, and a summary record. Deterministic byte-for-byte for a
// given (config, trace).
std::string trace_to_jsonl(const ExperimentConfig& cfg, const Trace& t);

struct LoadedTrace {
  ExperimentConfig cfg;
  Trace trace;
};
LoadedTrace trace_from_jsonl(const std::string& text);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace macsim
