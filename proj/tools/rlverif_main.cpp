// rlverif: run coverage-directed verification campaigns, compare their logs,
// and serve the bundled DUT models over the bridge protocol.

#include <signal.h>
#include <unistd.h>

#include <fstream>
#include <iostream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rlverif/bridge.hpp"
#include "rlverif/config.hpp"
#include "rlverif/dut_axi.hpp"
#include "rlverif/dut_rle.hpp"
#include "rlverif/errors.hpp"
#include "rlverif/report.hpp"
#include "rlverif/run.hpp"

namespace {

void drop_default(rlv::RunConfig& cfg, const std::string& key) {
  std::erase(cfg.defaults_applied, key);
}

std::unique_ptr<rlv::DutModel> make_local_dut(const std::string& kind, const rlv::axi::AxiConfig& axi) {
  if (kind == "rle") return std::make_unique<rlv::rle::RleDut>();
  return std::make_unique<rlv::axi::AxiDut>(axi);
}

}  // namespace

int main(int argc, char** argv) {
  // Bridge peers may vanish mid-write; that is reported as a TransportError.
  ::signal(SIGPIPE, SIG_IGN);

  CLI::App app{"Coverage-directed stimulus generation for hardware verification"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a verification campaign from a config file");
  std::string config_path;
  std::optional<std::uint64_t> seed, episodes;
  std::optional<std::string> agent, out_dir;
  run->add_option("--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Campaign seed (overrides config)");
  run->add_option("--episodes", episodes, "Episode count (overrides config)")->check(CLI::PositiveNumber);
  run->add_option("--agent", agent, "Agent kind (overrides config)")->check(CLI::IsMember({"random", "cem"}));
  run->add_option("--out", out_dir, "Output directory (overrides config)");

  auto* report = app.add_subcommand("report", "Compare the episode logs of one or more runs");
  std::vector<std::string> logs;
  std::string report_out = "report.json";
  report->add_option("logs", logs, "Run directories or episodes.csv files")->required();
  report->add_option("--out", report_out, "Where to write the report data (JSON)");

  auto* serve = app.add_subcommand("serve", "Serve a bundled DUT over the bridge protocol");
  std::string serve_dut = "rle";
  bool use_stdio = false;
  std::uint16_t port = 7700;
  bool once = false;
  std::string serve_config;
  serve->add_option("--dut", serve_dut, "DUT model")->check(CLI::IsMember({"rle", "axi"}));
  auto* stdio_flag = serve->add_flag("--stdio", use_stdio, "Speak the protocol on stdin/stdout");
  serve->add_option("--port", port, "TCP port to listen on (127.0.0.1)")->excludes(stdio_flag);
  serve->add_flag("--once", once, "Exit after the first TCP session");
  serve->add_option("--config", serve_config, "Config file supplying axi overrides")->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      rlv::RunConfig cfg = rlv::parse_config_file(config_path);
      if (seed) cfg.seed = *seed, drop_default(cfg, "seed");
      if (episodes) cfg.episodes = *episodes, drop_default(cfg, "episodes");
      if (agent) cfg.agent = *agent, drop_default(cfg, "agent");
      if (out_dir) cfg.output_dir = *out_dir, drop_default(cfg, "output_dir");
      for (const auto& key : cfg.defaults_applied) std::cerr << "default applied: " << key << '\n';

      const rlv::RunOutcome outcome = rlv::cmd_run(cfg);
      std::cout << "episodes: " << outcome.coverage.episodes << '\n'
                << "total reward: " << outcome.total_reward << '\n'
                << "scoreboard mismatches: " << outcome.scoreboard_mismatches << '\n'
                << "log: " << outcome.episodes_csv.string() << '\n';
      return outcome.scoreboard_mismatches == 0 ? 0 : 3;
    }

    if (*report) {
      std::vector<std::filesystem::path> paths(logs.begin(), logs.end());
      const rlv::Report rep = rlv::cmd_report(paths);
      std::ofstream out(report_out, std::ios::binary | std::ios::trunc);
      if (!out) throw rlv::Error("cannot write " + report_out);
      out << rep.data.dump(2) << '\n';
      std::cout << rep.text;
      return 0;
    }

    if (*serve) {
      rlv::axi::AxiConfig axi_cfg;
      if (!serve_config.empty()) {
        rlv::RunConfig cfg = rlv::parse_config_file(serve_config);
        axi_cfg = cfg.axi;
      }
      if (use_stdio) {
        auto dut = make_local_dut(serve_dut, axi_cfg);
        rlv::bridge::FdTransport io(STDIN_FILENO, STDOUT_FILENO, false);
        rlv::bridge::serve_dut(*dut, io);
        return 0;
      }
      rlv::bridge::TcpListener listener(port);
      std::cerr << "serving " << serve_dut << " on 127.0.0.1:" << listener.port() << '\n';
      std::vector<std::jthread> sessions;
      do {
        std::shared_ptr<rlv::bridge::FdTransport> conn = listener.accept();
        auto session = [conn, serve_dut, axi_cfg] {
          try {
            auto dut = make_local_dut(serve_dut, axi_cfg);
            rlv::bridge::serve_dut(*dut, *conn);
          } catch (const std::exception& e) {
            std::cerr << "session ended: " << e.what() << '\n';
          }
        };
        if (once) session();
        else sessions.emplace_back(session);
      } while (!once);
      return 0;
    }
  } catch (const rlv::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
