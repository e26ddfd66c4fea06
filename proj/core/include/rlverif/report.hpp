#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rlverif/action_space.hpp"
#include "rlverif/episode_log.hpp"

namespace rlv {

/// One run's episodes.csv plus the column roles from its summary.json.
struct RunLog {
  std::string label;
  std::filesystem::path csv;
  ActionSpace space;
  std::vector<std::string> events;
  EpisodeTable table;
};

/// `path` is a run directory or the episodes.csv inside one; summary.json
/// must sit next to the CSV.
RunLog load_run_log(const std::filesystem::path& path);

struct Report {
  nlohmann::json data;
  std::string text;
};

/// Per-event totals for every run, ratios of the first run against each
/// other run, and per-knob histograms. All logs must share knob and event
/// columns; throws ReportError otherwise.
Report cmd_report(const std::vector<std::filesystem::path>& logs);

}  // namespace rlv
