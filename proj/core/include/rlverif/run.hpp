#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rlverif/config.hpp"
#include "rlverif/coverage.hpp"
#include "rlverif/env.hpp"

namespace rlv {

struct RunOutcome {
  CumulativeCoverage coverage;
  double total_reward = 0.0;
  std::uint64_t scoreboard_mismatches = 0;
  std::filesystem::path episodes_csv;
  std::filesystem::path summary_json;
  std::filesystem::path histograms_csv;
};

/// Per-knob value frequencies. Discrete knobs get one bin per value;
/// continuous knobs get `continuous_bins` equal-width bins over [lo, hi].
struct KnobHistogram {
  std::string knob;
  bool discrete = true;
  std::vector<double> bin_lo;
  std::vector<double> bin_hi;
  std::vector<std::uint64_t> counts;
};

std::vector<KnobHistogram> knob_histograms(const ActionSpace& space,
                                           const std::vector<std::vector<double>>& actions,
                                           std::size_t continuous_bins = 10);

/// Runs the campaign described by `config` and writes episodes.csv,
/// summary.json and histograms.csv into config.output_dir. On failure the
/// partial episodes.csv is kept and the exception propagates.
RunOutcome cmd_run(const RunConfig& config);

/// Same, over an already-built environment (used by tests to inject DUTs).
RunOutcome run_campaign_to_directory(const RunConfig& config, Environment& env);

}  // namespace rlv
