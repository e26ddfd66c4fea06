#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rlverif/action_space.hpp"
#include "rlverif/coverage.hpp"

namespace rlv {

/// End-of-step snapshot of the monitored DUT elements.
struct Observation {
  std::vector<double> state;

  friend bool operator==(const Observation&, const Observation&) = default;
};

struct DutStepOutput {
  Observation observation;
  CoverageCounts counts;
};

/// What a design model must provide to be driven by an Environment.
///
/// A model owns its stimulus randomness: reset(seed) reseeds it, so a step is
/// a deterministic function of (reset seed, actions since reset). This is what
/// lets a model run in another process and still replay bit-for-bit.
class DutModel {
 public:
  virtual ~DutModel() = default;

  virtual const ActionSpace& action_space() const = 0;
  virtual std::vector<std::string> event_names() const = 0;

  /// Put the design in its initial state and reseed stimulus generation.
  virtual Observation reset(std::uint64_t seed) = 0;

  /// Expand the knob values into a concrete stimulus, simulate it to
  /// completion and report per-event counts. The action is already validated.
  virtual DutStepOutput step(const Action& action) = 0;

  /// Number of scoreboard mismatches seen since construction. Models without
  /// a scoreboard report zero.
  virtual std::uint64_t scoreboard_mismatches() const { return 0; }
};

struct StepResult {
  Observation observation;
  double reward = 0.0;
  bool done = false;
  CoverageCounts counts;

  friend bool operator==(const StepResult&, const StepResult&) = default;
};

struct EpisodeRecord {
  std::uint64_t episode = 0;
  Action action;
  CoverageCounts counts;
  double reward = 0.0;
  Observation observation;
};

class Environment {
 public:
  /// `events` must name exactly the model's events, in order.
  Environment(std::unique_ptr<DutModel> dut, std::vector<EventSpec> events,
              std::size_t max_steps = 1);

  Observation reset(std::uint64_t seed);

  /// Throws ValidationError for an invalid action (state untouched) and
  /// ProtocolError when stepping a finished or never-reset episode.
  StepResult step(const Action& action);

  const ActionSpace& action_space() const { return dut_->action_space(); }
  const std::vector<EventSpec>& events() const noexcept { return events_; }
  std::size_t max_steps() const noexcept { return max_steps_; }
  std::size_t steps_taken() const noexcept { return steps_; }
  bool done() const noexcept { return done_; }
  DutModel& dut() noexcept { return *dut_; }
  const DutModel& dut() const noexcept { return *dut_; }

 private:
  std::unique_ptr<DutModel> dut_;
  std::vector<EventSpec> events_;
  std::size_t max_steps_;
  std::size_t steps_ = 0;
  bool started_ = false;
  bool done_ = false;
};

/// Receives every record emitted by run_campaign.
class EpisodeSink {
 public:
  virtual ~EpisodeSink() = default;
  virtual void write(const EpisodeRecord& record) = 0;
  virtual void flush() {}
};

class Agent;

/// reset -> propose -> step -> observe -> log, `episodes` times. Episode i's
/// DUT and agent randomness come from episode_seed(seed, i, ...). On any
/// exception the sink is flushed before rethrowing.
CumulativeCoverage run_campaign(Environment& env, Agent& agent, std::uint64_t episodes,
                                std::uint64_t seed, EpisodeSink& sink);

}  // namespace rlv
