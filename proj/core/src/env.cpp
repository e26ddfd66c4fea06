#include "rlverif/env.hpp"

#include "rlverif/agents.hpp"
#include "rlverif/errors.hpp"
#include "rlverif/rng.hpp"

namespace rlv {

Environment::Environment(std::unique_ptr<DutModel> dut, std::vector<EventSpec> events,
                         std::size_t max_steps)
    : dut_(std::move(dut)), events_(std::move(events)), max_steps_(max_steps) {
  if (!dut_) throw ContractViolation("environment needs a DUT model");
  if (max_steps_ == 0) throw ContractViolation("max_steps must be at least 1");
  const auto names = dut_->event_names();
  if (names.size() != events_.size()) {
    throw ContractViolation("event list has " + std::to_string(events_.size()) +
                            " entries, DUT reports " + std::to_string(names.size()));
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (events_[i].id != i || events_[i].name != names[i]) {
      throw ContractViolation("event " + std::to_string(i) + " does not match DUT event '" +
                              names[i] + "'");
    }
  }
}

Observation Environment::reset(std::uint64_t seed) {
  Observation obs = dut_->reset(seed);
  steps_ = 0;
  started_ = true;
  done_ = false;
  return obs;
}

StepResult Environment::step(const Action& action) {
  if (!started_) throw ProtocolError("step before reset");
  if (done_) throw ProtocolError("step after episode finished");
  require_valid(dut_->action_space(), action);

  DutStepOutput out = dut_->step(action);
  ++steps_;
  StepResult result;
  result.reward = compute_reward(out.counts, events_);
  result.counts = std::move(out.counts);
  result.observation = std::move(out.observation);
  result.done = steps_ >= max_steps_;
  done_ = result.done;
  return result;
}

CumulativeCoverage run_campaign(Environment& env, Agent& agent, std::uint64_t episodes,
                                std::uint64_t seed, EpisodeSink& sink) {
  if (episodes == 0) throw ContractViolation("campaign needs at least one episode");
  CumulativeCoverage cumulative(env.events().size());
  try {
    for (std::uint64_t ep = 0; ep < episodes; ++ep) {
      env.reset(episode_seed(seed, ep, Stream::dut));
      Rng rng(episode_seed(seed, ep, Stream::agent));
      // Multi-step environments log one row per step under the same index.
      do {
        Action action = agent.propose(rng);
        StepResult r = env.step(action);
        agent.observe(action, r.reward);
        cumulative = merge(std::move(cumulative), r.counts);
        sink.write({ep, std::move(action), std::move(r.counts), r.reward, std::move(r.observation)});
      } while (!env.done());
    }
  } catch (...) {
    sink.flush();
    throw;
  }
  sink.flush();
  return cumulative;
}

}  // namespace rlv
