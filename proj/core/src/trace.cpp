#include "macsim/trace.hpp"

namespace macsim {

std::vector<Dyadic> Trace::phase_values(std::int64_t p, bool honest_only) const {
  std::vector<Dyadic> out;
  for (NodeId i = 0; i < static_cast<NodeId>(phases.size()); ++i) {
    if (honest_only && i < static_cast<NodeId>(byzantine.size()) && byzantine[i]) continue;
    if (auto v = phase_value_of(i, p)) out.push_back(*v);
  }
  return out;
}

std::optional<Dyadic> Trace::phase_value_of(NodeId i, std::int64_t p) const {
  if (auto e = phase_entry_of(i, p)) return e->value;
  return std::nullopt;
}

std::optional<PhaseEntry> Trace::phase_entry_of(NodeId i, std::int64_t p) const {
  for (const auto& e : phases[static_cast<std::size_t>(i)]) {
    if (e.phase == p) return e;
  }
  return std::nullopt;
}

std::int64_t Trace::max_phase() const {
  std::int64_t m = 0;
  for (const auto& per_node : phases) {
    for (const auto& e : per_node) m = std::max(m, e.phase);
  }
  return m;
}

}  // namespace macsim
