#include "rlverif/run.hpp"

#include <algorithm>
#include <fstream>

#include "rlverif/agents.hpp"
#include "rlverif/bridge.hpp"
#include "rlverif/episode_log.hpp"
#include "rlverif/errors.hpp"

namespace rlv {

namespace {

// Tees records to the CSV while keeping what the summary needs.
class RecordingSink final : public EpisodeSink {
 public:
  explicit RecordingSink(CsvEpisodeLog& csv) : csv_(csv) {}
  void write(const EpisodeRecord& r) override {
    csv_.write(r);
    actions.push_back(r.action.values);
    total_reward += r.reward;
  }
  void flush() override { csv_.flush(); }

  std::vector<std::vector<double>> actions;
  double total_reward = 0.0;

 private:
  CsvEpisodeLog& csv_;
};

void write_histograms_csv(const std::filesystem::path& path, const std::vector<KnobHistogram>& hists) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << "knob,bin_lo,bin_hi,count\n";
  for (const auto& h : hists) {
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
      out << h.knob << ',' << format_real(h.bin_lo[i]) << ',' << format_real(h.bin_hi[i]) << ',' << h.counts[i]
          << '\n';
    }
  }
}

}  // namespace

std::vector<KnobHistogram> knob_histograms(const ActionSpace& space, const std::vector<std::vector<double>>& actions,
                                           std::size_t continuous_bins) {
  std::vector<KnobHistogram> out;
  for (std::size_t k = 0; k < space.size(); ++k) {
    const KnobSpec& knob = space[k];
    KnobHistogram h;
    h.knob = knob.name();
    h.discrete = knob.is_discrete();
    if (h.discrete) {
      h.bin_lo = knob.values();
      h.bin_hi = knob.values();
      h.counts.assign(knob.values().size(), 0);
      for (const auto& a : actions) {
        const std::size_t idx = knob.index_of(a.at(k));
        if (idx != KnobSpec::npos) ++h.counts[idx];
      }
    } else {
      const double span = knob.hi() - knob.lo();
      const auto bins = static_cast<double>(continuous_bins);
      const auto edge = [&](std::size_t i) { return knob.lo() + span * static_cast<double>(i) / bins; };
      for (std::size_t b = 0; b < continuous_bins; ++b) {
        h.bin_lo.push_back(edge(b));
        h.bin_hi.push_back(b + 1 == continuous_bins ? knob.hi() : edge(b + 1));
      }
      h.counts.assign(continuous_bins, 0);
      for (const auto& a : actions) {
        const auto b = static_cast<std::size_t>((a.at(k) - knob.lo()) * bins / span);
        ++h.counts[std::min(b, continuous_bins - 1)];
      }
    }
    out.push_back(std::move(h));
  }
  return out;
}

RunOutcome run_campaign_to_directory(const RunConfig& config, Environment& env) {
  std::filesystem::create_directories(config.output_dir);
  RunOutcome outcome;
  outcome.episodes_csv = config.output_dir / "episodes.csv";
  outcome.summary_json = config.output_dir / "summary.json";
  outcome.histograms_csv = config.output_dir / "histograms.csv";

  const ActionSpace& space = env.action_space();
  std::vector<std::string> event_names;
  for (const auto& e : env.events()) event_names.push_back(e.name);

  std::size_t obs_columns = 0;
  if (config.log_observation) obs_columns = env.reset(config.seed).state.size();

  auto agent = make_agent(config.agent, space, config.cem);
  CsvEpisodeLog csv(outcome.episodes_csv, space.names(), event_names, obs_columns);
  RecordingSink sink(csv);
  outcome.coverage = run_campaign(env, *agent, config.episodes, config.seed, sink);
  outcome.total_reward = sink.total_reward;
  outcome.scoreboard_mismatches = env.dut().scoreboard_mismatches();

  const auto hists = knob_histograms(space, sink.actions);
  write_histograms_csv(outcome.histograms_csv, hists);

  nlohmann::json events = nlohmann::json::array();
  nlohmann::json totals = nlohmann::json::object();
  for (std::size_t i = 0; i < env.events().size(); ++i) {
    const EventSpec& e = env.events()[i];
    events.push_back({{"name", e.name}, {"multiplier", e.multiplier}, {"total", outcome.coverage.totals[i]}});
    totals[e.name] = outcome.coverage.totals[i];
  }
  nlohmann::json histograms = nlohmann::json::object();
  for (const auto& h : hists) {
    if (!h.discrete) continue;
    nlohmann::json bins = nlohmann::json::object();
    for (std::size_t i = 0; i < h.counts.size(); ++i) bins[format_real(h.bin_lo[i])] = h.counts[i];
    histograms[h.knob] = std::move(bins);
  }
  nlohmann::json summary{{"dut", config.dut},
                         {"agent", config.agent},
                         {"seed", config.seed},
                         {"episodes", config.episodes},
                         {"steps", outcome.coverage.episodes},
                         {"knobs", space.names()},
                         {"action_space", bridge::action_space_to_json(space)},
                         {"events", std::move(events)},
                         {"totals", std::move(totals)},
                         {"total_reward", outcome.total_reward},
                         {"histograms", std::move(histograms)},
                         {"agent_snapshot", agent->snapshot()},
                         {"scoreboard_mismatches", outcome.scoreboard_mismatches},
                         {"config", config_to_json(config)},
                         {"defaults_applied", config.defaults_applied}};
  std::ofstream out(outcome.summary_json, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + outcome.summary_json.string() + " for writing");
  out << summary.dump(2) << '\n';
  return outcome;
}

RunOutcome cmd_run(const RunConfig& config) {
  auto dut = make_dut(config);
  auto events = resolve_events(config, dut->event_names());
  Environment env(std::move(dut), std::move(events));
  return run_campaign_to_directory(config, env);
}

}  // namespace rlv
