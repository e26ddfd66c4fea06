#include "rlverif/agents.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "rlverif/errors.hpp"

namespace rlv {

namespace {

nlohmann::json knob_json(const KnobSpec& knob) {
  nlohmann::json j{{"name", knob.name()}};
  if (knob.is_discrete()) {
    j["kind"] = "discrete";
    j["values"] = knob.values();
  } else {
    j["kind"] = "continuous";
    j["lo"] = knob.lo();
    j["hi"] = knob.hi();
  }
  return j;
}

}  // namespace

nlohmann::json RandomAgent::snapshot() const {
  nlohmann::json knobs = nlohmann::json::array();
  for (const auto& knob : space_.knobs()) {
    nlohmann::json j = knob_json(knob);
    if (knob.is_discrete()) {
      j["probs"] = std::vector<double>(knob.values().size(), 1.0 / knob.values().size());
    }
    knobs.push_back(std::move(j));
  }
  return {{"agent", "random"}, {"knobs", std::move(knobs)}};
}

void CemParams::check() const {
  if (batch_size == 0) throw ConfigError("cem.batch_size must be positive");
  if (!(elite_fraction > 0.0 && elite_fraction <= 1.0)) {
    throw ConfigError("cem.elite_fraction must lie in (0, 1]");
  }
  if (!(smoothing >= 0.0 && smoothing <= 1.0)) throw ConfigError("cem.smoothing must lie in [0, 1]");
  if (!(stddev_floor_fraction > 0.0)) throw ConfigError("cem.stddev_floor_fraction must be positive");
  if (!(probability_floor >= 0.0 && probability_floor < 1.0)) {
    throw ConfigError("cem.probability_floor must lie in [0, 1)");
  }
}

std::size_t CemParams::elite_count() const {
  // The epsilon keeps 0.2 * 50 at 10 whatever the rounding of the product.
  auto n = static_cast<std::size_t>(std::ceil(elite_fraction * static_cast<double>(batch_size) - 1e-9));
  return std::clamp<std::size_t>(n, 1, batch_size);
}

CemAgent::CemAgent(ActionSpace space, CemParams params)
    : space_(std::move(space)), params_(params) {
  params_.check();
  for (const auto& knob : space_.knobs()) {
    if (knob.is_discrete()) {
      const std::size_t n = knob.values().size();
      const std::vector<double> uniform(n, 1.0 / static_cast<double>(n));
      // Applying the floor up front keeps the invariant true from episode 0
      // even for a large value set.
      state_.dists.emplace_back(CategoricalDist{floor_and_normalize(uniform, params_.probability_floor)});
    } else {
      const double width = knob.hi() - knob.lo();
      state_.dists.emplace_back(ContinuousDist{
          (knob.lo() + knob.hi()) / 2.0, width / 2.0, params_.stddev_floor_fraction * width});
    }
  }
}

void CemAgent::set_distributions(std::vector<KnobDist> dists) {
  if (dists.size() != space_.size()) throw ContractViolation("one distribution per knob required");
  for (std::size_t k = 0; k < dists.size(); ++k) {
    const bool categorical = std::holds_alternative<CategoricalDist>(dists[k]);
    if (categorical != space_[k].is_discrete()) {
      throw ContractViolation("distribution kind does not match knob " + std::to_string(k));
    }
    if (categorical && std::get<CategoricalDist>(dists[k]).probs.size() != space_[k].values().size()) {
      throw ContractViolation("probability vector length does not match knob " + std::to_string(k));
    }
  }
  state_.dists = std::move(dists);
}

double sample_truncated_normal(double mean, double stddev, double lo, double hi, Rng& rng) {
  std::normal_distribution<double> normal(mean, stddev);
  for (;;) {
    const double x = normal(rng);
    if (x >= lo && x <= hi) return x;
  }
}

std::vector<double> floor_and_normalize(std::vector<double> p, double floor) {
  const std::size_t n = p.size();
  if (n == 0) return p;
  if (floor * static_cast<double>(n) >= 1.0) {
    std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(n));
    return p;
  }
  for (double& x : p) x = std::max(x, 0.0);
  // Pin components at the floor one round at a time; the free ones share the
  // remaining mass in proportion to their current weight.
  std::vector<bool> pinned(n, false);
  for (;;) {
    double free_mass = 0.0;
    std::size_t n_pinned = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (pinned[i]) ++n_pinned;
      else free_mass += p[i];
    }
    const double budget = 1.0 - floor * static_cast<double>(n_pinned);
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (pinned[i]) continue;
      const double scaled = free_mass > 0.0 ? p[i] * budget / free_mass
                                            : budget / static_cast<double>(n - n_pinned);
      if (scaled < floor) {
        pinned[i] = true;
        changed = true;
      }
    }
    if (changed) continue;
    for (std::size_t i = 0; i < n; ++i) {
      if (pinned[i]) p[i] = floor;
      else p[i] = free_mass > 0.0 ? p[i] * budget / free_mass : budget / static_cast<double>(n - n_pinned);
    }
    return p;
  }
}

Action CemAgent::propose(Rng& rng) {
  Action a;
  a.values.reserve(space_.size());
  for (std::size_t k = 0; k < space_.size(); ++k) {
    const KnobSpec& knob = space_[k];
    if (const auto* cat = std::get_if<CategoricalDist>(&state_.dists[k])) {
      std::discrete_distribution<std::size_t> pick(cat->probs.begin(), cat->probs.end());
      a.values.push_back(knob.values()[pick(rng)]);
    } else {
      const auto& c = std::get<ContinuousDist>(state_.dists[k]);
      a.values.push_back(sample_truncated_normal(c.mean, c.stddev, knob.lo(), knob.hi(), rng));
    }
  }
  return a;
}

void CemAgent::observe(const Action& action, double reward) {
  state_.buffer.emplace_back(action, reward);
  if (state_.buffer.size() >= params_.batch_size) refit();
}

std::vector<std::size_t> select_elites(const std::vector<std::pair<Action, double>>& buffer,
                                       std::size_t count) {
  std::vector<std::size_t> order(buffer.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return buffer[a].second > buffer[b].second; });
  order.resize(std::min(count, order.size()));
  return order;
}

void CemAgent::refit() {
  const auto elites = select_elites(state_.buffer, params_.elite_count());
  const double alpha = params_.smoothing;
  const double n_elite = static_cast<double>(elites.size());

  for (std::size_t k = 0; k < space_.size(); ++k) {
    const KnobSpec& knob = space_[k];
    if (auto* cat = std::get_if<CategoricalDist>(&state_.dists[k])) {
      std::vector<double> freq(knob.values().size(), 0.0);
      for (std::size_t e : elites) {
        const std::size_t idx = knob.index_of(state_.buffer[e].first.values[k]);
        if (idx != KnobSpec::npos) freq[idx] += 1.0;
      }
      std::vector<double> next(freq.size());
      for (std::size_t i = 0; i < freq.size(); ++i) {
        next[i] = alpha * (freq[i] / n_elite) + (1.0 - alpha) * cat->probs[i];
      }
      cat->probs = floor_and_normalize(std::move(next), params_.probability_floor);
    } else {
      auto& c = std::get<ContinuousDist>(state_.dists[k]);
      double mean = 0.0;
      for (std::size_t e : elites) mean += state_.buffer[e].first.values[k];
      mean /= n_elite;
      double var = 0.0;
      for (std::size_t e : elites) {
        const double d = state_.buffer[e].first.values[k] - mean;
        var += d * d;
      }
      const double stddev = std::sqrt(var / n_elite);
      c.mean = alpha * mean + (1.0 - alpha) * c.mean;
      c.stddev = std::max(c.stddev_floor, alpha * stddev + (1.0 - alpha) * c.stddev);
    }
  }
  state_.buffer.clear();
  ++state_.refits;
}

nlohmann::json CemAgent::snapshot() const {
  nlohmann::json knobs = nlohmann::json::array();
  for (std::size_t k = 0; k < space_.size(); ++k) {
    nlohmann::json j = knob_json(space_[k]);
    if (const auto* cat = std::get_if<CategoricalDist>(&state_.dists[k])) {
      j["probs"] = cat->probs;
    } else {
      const auto& c = std::get<ContinuousDist>(state_.dists[k]);
      j["mean"] = c.mean;
      j["stddev"] = c.stddev;
      j["stddev_floor"] = c.stddev_floor;
    }
    knobs.push_back(std::move(j));
  }
  return {{"agent", "cem"},
          {"refits", state_.refits},
          {"buffered", state_.buffer.size()},
          {"params",
           {{"batch_size", params_.batch_size},
            {"elite_fraction", params_.elite_fraction},
            {"smoothing", params_.smoothing},
            {"stddev_floor_fraction", params_.stddev_floor_fraction},
            {"probability_floor", params_.probability_floor}}},
          {"knobs", std::move(knobs)}};
}

std::unique_ptr<Agent> make_agent(const std::string& kind, const ActionSpace& space,
                                  const CemParams& params) {
  if (kind == "random") return std::make_unique<RandomAgent>(space);
  if (kind == "cem") return std::make_unique<CemAgent>(space, params);
  throw ConfigError("unknown agent '" + kind + "' (expected random or cem)");
}

}  // namespace rlv
