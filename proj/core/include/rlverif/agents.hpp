#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "rlverif/action_space.hpp"
#include "rlverif/rng.hpp"

namespace rlv {

/// Stimulus-selection policy. propose() and observe() alternate strictly:
/// every proposed action is observed with its reward before the next propose.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual Action propose(Rng& rng) = 0;
  virtual void observe(const Action& action, double reward) = 0;
  /// Current sampling distributions, for reports.
  virtual nlohmann::json snapshot() const = 0;
  virtual std::string kind() const = 0;
};

/// Uniform baseline: verification without feedback.
class RandomAgent final : public Agent {
 public:
  explicit RandomAgent(ActionSpace space) : space_(std::move(space)) {}

  Action propose(Rng& rng) override { return sample_uniform(space_, rng); }
  void observe(const Action&, double) override {}
  nlohmann::json snapshot() const override;
  std::string kind() const override { return "random"; }

 private:
  ActionSpace space_;
};

struct CemParams {
  std::size_t batch_size = 50;
  double elite_fraction = 0.2;
  double smoothing = 0.7;
  /// Stddev floor of each continuous knob, as a fraction of hi - lo.
  double stddev_floor_fraction = 0.05;
  double probability_floor = 0.01;

  /// Throws ConfigError naming the offending field.
  void check() const;
  std::size_t elite_count() const;
};

/// Truncated normal on the knob's [lo, hi].
struct ContinuousDist {
  double mean = 0.0;
  double stddev = 1.0;
  double stddev_floor = 0.0;
};

/// Categorical over the knob's value list, same order.
struct CategoricalDist {
  std::vector<double> probs;
};

using KnobDist = std::variant<ContinuousDist, CategoricalDist>;

struct CemState {
  std::vector<KnobDist> dists;
  std::vector<std::pair<Action, double>> buffer;
  std::uint64_t refits = 0;
};

/// Cross-entropy method learner. Initial distributions match the uniform
/// baseline closely (mean at the interval centre, stddev half its width,
/// uniform probabilities); every `batch_size` observations the top
/// ceil(elite_fraction * batch_size) actions are refit into them.
class CemAgent final : public Agent {
 public:
  CemAgent(ActionSpace space, CemParams params = {});

  Action propose(Rng& rng) override;
  void observe(const Action& action, double reward) override;
  nlohmann::json snapshot() const override;
  std::string kind() const override { return "cem"; }

  const CemState& state() const noexcept { return state_; }
  /// Replace the distributions directly (tests, warm starts). Buffer is kept.
  void set_distributions(std::vector<KnobDist> dists);
  const CemParams& params() const noexcept { return params_; }
  const ActionSpace& space() const noexcept { return space_; }

 private:
  void refit();

  ActionSpace space_;
  CemParams params_;
  CemState state_;
};

/// Indices of the `count` highest rewards; ties keep buffer order.
std::vector<std::size_t> select_elites(const std::vector<std::pair<Action, double>>& buffer,
                                       std::size_t count);

/// Sample normal(mean, stddev) by rejection until it lands in [lo, hi].
double sample_truncated_normal(double mean, double stddev, double lo, double hi, Rng& rng);

/// Clamp every probability to at least `floor` and renormalise so the result
/// sums to one with every component still >= floor.
std::vector<double> floor_and_normalize(std::vector<double> p, double floor);

std::unique_ptr<Agent> make_agent(const std::string& kind, const ActionSpace& space,
                                  const CemParams& params);

}  // namespace rlv
