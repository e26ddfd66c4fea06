#include "rlverif/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "rlverif/bridge.hpp"
#include "rlverif/dut_rle.hpp"
#include "rlverif/errors.hpp"

namespace rlv {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, const std::string& prefix) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + prefix + key + "'");
  }
}

std::uint64_t get_unsigned(const json& j, const std::string& key, bool positive) {
  // Values built in code arrive as signed integers, parsed ones as unsigned.
  if (!j.is_number_integer() || (!j.is_number_unsigned() && j.get<std::int64_t>() < 0)) {
    throw ConfigError("'" + key + "' must be a " + (positive ? "positive" : "non-negative") + " integer");
  }
  const auto v = j.get<std::uint64_t>();
  if (positive && v == 0) throw ConfigError("'" + key + "' must be a positive integer");
  return v;
}

double get_real(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError("'" + key + "' must be a number");
  return j.get<double>();
}

// Reads obj[key] into `out` with `read`, or records the default.
template <typename T, typename Read>
void field(const json& obj, const std::string& key, const std::string& prefix, T& out,
           std::vector<std::string>& defaults, Read read) {
  if (obj.contains(key)) out = read(obj.at(key), prefix + key);
  else defaults.push_back(prefix + key);
}

}  // namespace

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown_keys(doc,
                      {"dut", "agent", "episodes", "seed", "multipliers", "cem", "axi", "bridge",
                       "output_dir", "log_observation"},
                      "");
  RunConfig cfg;
  auto& defaults = cfg.defaults_applied;

  if (!doc.contains("dut") || !doc["dut"].is_string()) throw ConfigError("'dut' is required (rle, axi or bridge:<endpoint>)");
  cfg.dut = doc["dut"].get<std::string>();
  if (cfg.dut != "rle" && cfg.dut != "axi" && !cfg.is_bridge()) {
    throw ConfigError("'dut' must be rle, axi or bridge:<endpoint>, got '" + cfg.dut + "'");
  }

  auto as_string = [](const json& j, const std::string& key) {
    if (!j.is_string()) throw ConfigError("'" + key + "' must be a string");
    return j.get<std::string>();
  };
  field(doc, "agent", "", cfg.agent, defaults, as_string);
  if (cfg.agent != "random" && cfg.agent != "cem") throw ConfigError("'agent' must be random or cem");
  field(doc, "episodes", "", cfg.episodes, defaults,
        [](const json& j, const std::string& k) { return get_unsigned(j, k, true); });
  field(doc, "seed", "", cfg.seed, defaults,
        [](const json& j, const std::string& k) { return get_unsigned(j, k, false); });

  if (doc.contains("multipliers")) {
    const json& m = doc["multipliers"];
    if (!m.is_object()) throw ConfigError("'multipliers' must map event names to numbers");
    for (const auto& [name, value] : m.items()) cfg.multipliers[name] = get_real(value, "multipliers." + name);
  } else {
    defaults.push_back("multipliers");
  }
  if (!cfg.is_bridge()) (void)resolve_events(cfg, known_event_names(cfg.dut));

  const json empty = json::object();
  const json& cem = doc.contains("cem") ? doc["cem"] : empty;
  if (!cem.is_object()) throw ConfigError("'cem' must be an object");
  reject_unknown_keys(cem, {"batch_size", "elite_fraction", "smoothing", "stddev_floor_fraction", "probability_floor"},
                      "cem.");
  field(cem, "batch_size", "cem.", cfg.cem.batch_size, defaults,
        [](const json& j, const std::string& k) { return static_cast<std::size_t>(get_unsigned(j, k, true)); });
  field(cem, "elite_fraction", "cem.", cfg.cem.elite_fraction, defaults, get_real);
  field(cem, "smoothing", "cem.", cfg.cem.smoothing, defaults, get_real);
  field(cem, "stddev_floor_fraction", "cem.", cfg.cem.stddev_floor_fraction, defaults, get_real);
  field(cem, "probability_floor", "cem.", cfg.cem.probability_floor, defaults, get_real);
  cfg.cem.check();

  const json& ax = doc.contains("axi") ? doc["axi"] : empty;
  if (!ax.is_object()) throw ConfigError("'axi' must be an object");
  reject_unknown_keys(ax, {"fifo_depth", "drain_period", "cycles_per_step", "region_size"}, "axi.");
  auto as_size = [](const json& j, const std::string& k) { return static_cast<std::size_t>(get_unsigned(j, k, false)); };
  field(ax, "fifo_depth", "axi.", cfg.axi.fifo_depth, defaults, as_size);
  field(ax, "drain_period", "axi.", cfg.axi.drain_period, defaults, as_size);
  field(ax, "cycles_per_step", "axi.", cfg.axi.cycles_per_step, defaults, as_size);
  field(ax, "region_size", "axi.", cfg.axi.region_size, defaults,
        [](const json& j, const std::string& k) { return get_unsigned(j, k, true); });
  cfg.axi.check();

  const json& br = doc.contains("bridge") ? doc["bridge"] : empty;
  if (!br.is_object()) throw ConfigError("'bridge' must be an object");
  reject_unknown_keys(br, {"timeout_seconds"}, "bridge.");
  field(br, "timeout_seconds", "bridge.", cfg.bridge_timeout, defaults, [](const json& j, const std::string& k) {
    const double s = get_real(j, k);
    if (!(s > 0.0)) throw ConfigError("'" + k + "' must be positive");
    return std::chrono::milliseconds(static_cast<std::int64_t>(s * 1000.0));
  });

  field(doc, "output_dir", "", cfg.output_dir, defaults,
        [&](const json& j, const std::string& k) { return std::filesystem::path(as_string(j, k)); });
  field(doc, "log_observation", "", cfg.log_observation, defaults, [](const json& j, const std::string& k) {
    if (!j.is_boolean()) throw ConfigError("'" + k + "' must be true or false");
    return j.get<bool>();
  });
  return cfg;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

json config_to_json(const RunConfig& c) {
  return {{"dut", c.dut},
          {"agent", c.agent},
          {"episodes", c.episodes},
          {"seed", c.seed},
          {"multipliers", c.multipliers},
          {"cem",
           {{"batch_size", c.cem.batch_size},
            {"elite_fraction", c.cem.elite_fraction},
            {"smoothing", c.cem.smoothing},
            {"stddev_floor_fraction", c.cem.stddev_floor_fraction},
            {"probability_floor", c.cem.probability_floor}}},
          {"axi",
           {{"fifo_depth", c.axi.fifo_depth},
            {"drain_period", c.axi.drain_period},
            {"cycles_per_step", c.axi.cycles_per_step},
            {"region_size", c.axi.region_size}}},
          {"bridge", {{"timeout_seconds", static_cast<double>(c.bridge_timeout.count()) / 1000.0}}},
          {"output_dir", c.output_dir.string()},
          {"log_observation", c.log_observation}};
}

std::vector<std::string> known_event_names(const std::string& dut) {
  if (dut == "rle") return rle::RleDut().event_names();
  if (dut == "axi") return axi::AxiDut().event_names();
  return {};
}

std::unique_ptr<DutModel> make_dut(const RunConfig& config) {
  if (config.dut == "rle") return std::make_unique<rle::RleDut>();
  if (config.dut == "axi") return std::make_unique<axi::AxiDut>(config.axi);
  if (config.is_bridge()) {
    return std::make_unique<bridge::RemoteDut>(bridge::open_endpoint(config.bridge_endpoint(), config.bridge_timeout));
  }
  throw ConfigError("unknown dut '" + config.dut + "'");
}

std::vector<EventSpec> resolve_events(const RunConfig& config, const std::vector<std::string>& names) {
  std::vector<EventSpec> events = make_events(names);
  for (const auto& [name, m] : config.multipliers) {
    auto it = std::find_if(events.begin(), events.end(), [&](const EventSpec& e) { return e.name == name; });
    if (it == events.end()) throw ConfigError("unknown event '" + name + "' in multipliers");
    it->multiplier = m;
  }
  return events;
}

}  // namespace rlv
