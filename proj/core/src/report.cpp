#include "rlverif/report.hpp"

#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "rlverif/bridge.hpp"
#include "rlverif/errors.hpp"
#include "rlverif/run.hpp"

namespace rlv {

using nlohmann::json;

RunLog load_run_log(const std::filesystem::path& path) {
  RunLog log;
  log.csv = std::filesystem::is_directory(path) ? path / "episodes.csv" : path;
  const auto dir = log.csv.parent_path();
  const auto summary_path = dir / "summary.json";
  std::ifstream in(summary_path);
  if (!in) throw ReportError("missing " + summary_path.string() + " next to the episode log");
  json summary;
  try {
    summary = json::parse(in);
    log.space = bridge::action_space_from_json(summary.at("action_space"));
    for (const auto& e : summary.at("events")) log.events.push_back(e.at("name").get<std::string>());
  } catch (const std::exception& e) {
    throw ReportError("unreadable " + summary_path.string() + ": " + e.what());
  }
  log.label = dir.filename().string();
  if (log.label.empty() || log.label == ".") log.label = std::filesystem::absolute(dir).filename().string();
  log.table = read_episode_table(log.csv);

  std::vector<std::string> expected{"episode"};
  for (const auto& n : log.space.names()) expected.push_back(n);
  for (const auto& n : log.events) expected.push_back(n);
  expected.push_back("reward");
  if (log.table.header.size() < expected.size() ||
      !std::equal(expected.begin(), expected.end(), log.table.header.begin())) {
    throw ReportError(log.csv.string() + ": header does not match its summary.json");
  }
  return log;
}

Report cmd_report(const std::vector<std::filesystem::path>& paths) {
  if (paths.empty()) throw ReportError("report needs at least one log");
  std::vector<RunLog> runs;
  for (const auto& p : paths) runs.push_back(load_run_log(p));
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].space.names() != runs[0].space.names() || runs[r].events != runs[0].events) {
      throw ReportError("schema mismatch: " + runs[r].csv.string() + " does not share the columns of " +
                        runs[0].csv.string());
    }
  }
  std::set<std::string> seen;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    if (!seen.insert(runs[r].label).second) runs[r].label += "#" + std::to_string(r);
  }

  const auto& events = runs[0].events;
  std::vector<std::vector<double>> totals(runs.size(), std::vector<double>(events.size(), 0.0));
  json runs_json = json::array();
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const RunLog& run = runs[r];
    const std::size_t reward_col = run.table.column("reward");
    double reward = 0.0;
    json tot = json::object();
    for (std::size_t e = 0; e < events.size(); ++e) {
      const std::size_t col = run.table.column(events[e]);
      for (const auto& row : run.table.rows) totals[r][e] += row[col];
      tot[events[e]] = static_cast<std::uint64_t>(totals[r][e]);
    }
    std::vector<std::vector<double>> actions;
    for (const auto& row : run.table.rows) {
      reward += row[reward_col];
      actions.emplace_back(row.begin() + 1, row.begin() + 1 + static_cast<std::ptrdiff_t>(run.space.size()));
    }
    json hists = json::object();
    for (const auto& h : knob_histograms(run.space, actions)) {
      json bins = json::array();
      for (std::size_t i = 0; i < h.counts.size(); ++i) {
        bins.push_back({{"lo", h.bin_lo[i]}, {"hi", h.bin_hi[i]}, {"count", h.counts[i]}});
      }
      hists[h.knob] = std::move(bins);
    }
    runs_json.push_back({{"label", run.label},
                         {"path", run.csv.string()},
                         {"episodes", run.table.rows.size()},
                         {"totals", std::move(tot)},
                         {"total_reward", reward},
                         {"histograms", std::move(hists)}});
  }

  json ratios = json::array();
  for (std::size_t r = 1; r < runs.size(); ++r) {
    json per_event = json::object();
    for (std::size_t e = 0; e < events.size(); ++e) {
      if (totals[r][e] == 0.0) per_event[events[e]] = nullptr;
      else per_event[events[e]] = totals[0][e] / totals[r][e];
    }
    ratios.push_back({{"numerator", runs[0].label}, {"denominator", runs[r].label}, {"events", std::move(per_event)}});
  }

  std::ostringstream text;
  std::size_t name_w = 5;
  for (const auto& e : events) name_w = std::max(name_w, e.size());
  // One width per column: wide enough for its header and for any count.
  std::vector<int> count_w, ratio_w;
  for (const auto& run : runs) count_w.push_back(static_cast<int>(std::max<std::size_t>(14, run.label.size())));
  for (std::size_t r = 1; r < runs.size(); ++r) {
    ratio_w.push_back(static_cast<int>(std::max<std::size_t>(14, runs[r].label.size() + 6)));
  }
  text << std::left << std::setw(static_cast<int>(name_w)) << "event";
  for (std::size_t r = 0; r < runs.size(); ++r) text << "  " << std::right << std::setw(count_w[r]) << runs[r].label;
  for (std::size_t r = 1; r < runs.size(); ++r) text << "  " << std::setw(ratio_w[r - 1]) << ("ratio/" + runs[r].label);
  text << '\n';
  for (std::size_t e = 0; e < events.size(); ++e) {
    text << std::left << std::setw(static_cast<int>(name_w)) << events[e] << std::right;
    for (std::size_t r = 0; r < runs.size(); ++r) {
      text << "  " << std::setw(count_w[r]) << static_cast<std::uint64_t>(totals[r][e]);
    }
    for (std::size_t r = 1; r < runs.size(); ++r) {
      std::ostringstream cell;
      if (totals[r][e] == 0.0) cell << "-";
      else cell << std::fixed << std::setprecision(2) << totals[0][e] / totals[r][e];
      text << "  " << std::setw(ratio_w[r - 1]) << cell.str();
    }
    text << '\n';
  }

  Report report;
  report.data = {{"events", events}, {"runs", std::move(runs_json)}, {"ratios", std::move(ratios)}};
  report.text = text.str();
  return report;
}

}  // namespace rlv
