#include "rlverif/coverage.hpp"

#include "rlverif/errors.hpp"

namespace rlv {

std::vector<EventSpec> make_events(std::span<const std::string> names) {
  std::vector<EventSpec> out;
  out.reserve(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) out.push_back({i, names[i], 0.0});
  return out;
}

double compute_reward(const CoverageCounts& counts, std::span<const EventSpec> events) {
  if (counts.size() != events.size()) {
    throw ContractViolation("compute_reward: " + std::to_string(counts.size()) + " counts for " +
                            std::to_string(events.size()) + " events");
  }
  double reward = 0.0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    reward += static_cast<double>(counts.counts[i]) * events[i].multiplier;
  }
  return reward;
}

CumulativeCoverage merge(CumulativeCoverage cumulative, const CoverageCounts& counts) {
  if (cumulative.totals.size() != counts.size()) {
    throw ContractViolation("merge: " + std::to_string(counts.size()) + " counts into " +
                            std::to_string(cumulative.totals.size()) + " totals");
  }
  for (std::size_t i = 0; i < counts.size(); ++i) cumulative.totals[i] += counts.counts[i];
  ++cumulative.episodes;
  return cumulative;
}

}  // namespace rlv
