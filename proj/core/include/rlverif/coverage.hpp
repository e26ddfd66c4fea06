#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rlv {

struct EventSpec {
  std::size_t id = 0;
  std::string name;
  double multiplier = 0.0;

  friend bool operator==(const EventSpec&, const EventSpec&) = default;
};

/// Builds ids 0..N-1 from names; multipliers all zero.
std::vector<EventSpec> make_events(std::span<const std::string> names);

/// Per-step occurrence counts n_i, one per tracked event.
struct CoverageCounts {
  std::vector<std::uint64_t> counts;

  std::size_t size() const noexcept { return counts.size(); }
  friend bool operator==(const CoverageCounts&, const CoverageCounts&) = default;
};

struct CumulativeCoverage {
  std::vector<std::uint64_t> totals;
  std::uint64_t episodes = 0;

  CumulativeCoverage() = default;
  explicit CumulativeCoverage(std::size_t n) : totals(n, 0) {}

  friend bool operator==(const CumulativeCoverage&, const CumulativeCoverage&) = default;
};

/// R = sum_i n_i * m_i over the step's counts. Throws ContractViolation on a
/// length mismatch.
double compute_reward(const CoverageCounts& counts, std::span<const EventSpec> events);

CumulativeCoverage merge(CumulativeCoverage cumulative, const CoverageCounts& counts);

}  // namespace rlv
