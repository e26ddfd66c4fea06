#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "rlverif/env.hpp"
#include "rlverif/rng.hpp"

namespace rlv::axi {

// Request path of a 2-master, 10-slave crossbar. Each slave owns a bounded
// request FIFO; masters push requests at addresses drawn from the range the
// action selects, the slaves drain their FIFOs at a fixed period, and the
// model counts, per slave, the cycles that end with the FIFO full.

inline constexpr std::size_t kMasters = 2;
inline constexpr std::size_t kSlaves = 10;

struct AxiConfig {
  std::size_t fifo_depth = 4;
  std::uint64_t region_size = 0x1000;
  std::size_t cycles_per_step = 100;
  std::size_t drain_period = 3;

  /// Throws ConfigError on a zero depth, region size or drain period.
  void check() const;
  std::uint64_t address_map_end() const noexcept { return region_size * kSlaves; }
};

/// Half-open byte address range [lo, hi).
struct AddressRange {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;

  friend bool operator==(const AddressRange&, const AddressRange&) = default;
};

/// Knobs lower_slave, upper_slave in {0..9}; the range spans every slave
/// between min and max of the two, inclusive.
ActionSpace action_space();
AddressRange decode_action(const Action& action, const AxiConfig& config);

/// Slave owning `addr`; throws DecodeError past the end of the map.
std::size_t decode_address(std::uint64_t addr, const AxiConfig& config);

struct Request {
  std::uint64_t id = 0;
  std::uint64_t addr = 0;
  std::size_t master = 0;
};

class SlaveFifo {
 public:
  explicit SlaveFifo(std::size_t depth) : depth_(depth) {}

  bool not_full() const noexcept { return queue_.size() < depth_; }
  bool not_empty() const noexcept { return !queue_.empty(); }
  std::size_t occupancy() const noexcept { return queue_.size(); }
  std::size_t depth() const noexcept { return depth_; }

  /// Precondition: not_full().
  void enqueue(const Request& r);
  /// Precondition: not_empty().
  Request dequeue();
  void clear() { queue_.clear(); }

 private:
  std::size_t depth_;
  std::deque<Request> queue_;
};

enum class TraceKind { enqueue, reject, dequeue };

struct TraceEntry {
  std::uint64_t cycle = 0;
  TraceKind kind = TraceKind::enqueue;
  std::size_t slave = 0;
  Request request;
};

struct StepOutcome {
  CoverageCounts counts;
  std::vector<std::size_t> occupancy;
};

class Crossbar {
 public:
  explicit Crossbar(AxiConfig config);

  void reset();
  /// Simulate cycles_per_step cycles of traffic confined to `range`.
  /// Appends to `trace` when it is non-null.
  StepOutcome step(const AddressRange& range, Rng& rng, std::vector<TraceEntry>* trace = nullptr);

  const AxiConfig& config() const noexcept { return config_; }
  const std::vector<SlaveFifo>& fifos() const noexcept { return fifos_; }

 private:
  AxiConfig config_;
  std::vector<SlaveFifo> fifos_;
  std::uint64_t cycle_ = 0;
  std::uint64_t next_id_ = 0;
};

struct TraceViolation {
  enum class Kind { enqueue_when_full, dequeue_when_empty, fifo_order, misrouted, spurious_reject };

  Kind kind;
  std::uint64_t cycle = 0;
  std::size_t slave = 0;
  std::string detail;
};

/// Replays a trace that starts from empty FIFOs against a plain queue model.
/// Empty result means the trace is clean.
std::vector<TraceViolation> golden_check(const std::vector<TraceEntry>& trace,
                                         const AxiConfig& config);

class AxiDut final : public DutModel {
 public:
  explicit AxiDut(AxiConfig config = {});

  const ActionSpace& action_space() const override { return space_; }
  std::vector<std::string> event_names() const override;
  Observation reset(std::uint64_t seed) override;
  DutStepOutput step(const Action& action) override;
  std::uint64_t scoreboard_mismatches() const override { return mismatches_; }

  /// Trace recorded since the last reset.
  const std::vector<TraceEntry>& trace() const noexcept { return trace_; }
  const Crossbar& crossbar() const noexcept { return xbar_; }

 private:
  ActionSpace space_;
  Crossbar xbar_;
  Rng rng_;
  std::vector<TraceEntry> trace_;
  std::uint64_t mismatches_ = 0;
};

}  // namespace rlv::axi
