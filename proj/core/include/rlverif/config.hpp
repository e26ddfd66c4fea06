#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rlverif/agents.hpp"
#include "rlverif/coverage.hpp"
#include "rlverif/dut_axi.hpp"
#include "rlverif/env.hpp"

namespace rlv {

/// A campaign as described by a JSON config file. Every key is optional
/// except "dut"; see configs/ for annotated examples.
struct RunConfig {
  std::string dut;  // "rle", "axi" or "bridge:<endpoint>"
  std::string agent = "random";
  std::uint64_t episodes = 1000;
  std::uint64_t seed = 0;
  std::map<std::string, double> multipliers;
  CemParams cem;
  axi::AxiConfig axi;
  std::chrono::milliseconds bridge_timeout{30'000};
  std::filesystem::path output_dir = "run";
  bool log_observation = false;

  /// Keys that were filled from defaults, in schema order.
  std::vector<std::string> defaults_applied;

  bool is_bridge() const noexcept { return dut.rfind("bridge:", 0) == 0; }
  std::string bridge_endpoint() const { return dut.substr(7); }
};

/// Throws ConfigError naming the offending key.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config_file(const std::filesystem::path& path);

nlohmann::json config_to_json(const RunConfig& config);

/// Event names of a bundled DUT kind; empty for bridge DUTs.
std::vector<std::string> known_event_names(const std::string& dut);

/// Builds the DUT model; bridge endpoints are connected here.
std::unique_ptr<DutModel> make_dut(const RunConfig& config);

/// Events with multipliers from the config; unmentioned events get 0.
/// Throws ConfigError for a multiplier naming an unknown event.
std::vector<EventSpec> resolve_events(const RunConfig& config, const std::vector<std::string>& names);

}  // namespace rlv
