#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "rlverif/env.hpp"

namespace rlv {

/// Shortest decimal form that parses back to the same double ("6", "0.4").
std::string format_real(double v);

/// CSV episode log:
///   episode,<knob names...>,<event names...>,reward[,obs_0,...]
/// One row per step, comma separated, '\n' terminated, no quoting.
class CsvEpisodeLog final : public EpisodeSink {
 public:
  CsvEpisodeLog(const std::filesystem::path& path, const std::vector<std::string>& knob_names,
                const std::vector<std::string>& event_names, std::size_t observation_columns = 0);

  void write(const EpisodeRecord& record) override;
  void flush() override;

  std::uint64_t rows() const noexcept { return rows_; }

 private:
  std::ofstream out_;
  std::size_t knobs_;
  std::size_t events_;
  std::size_t obs_;
  std::uint64_t rows_ = 0;
};

/// Collects records in memory.
class MemoryEpisodeLog final : public EpisodeSink {
 public:
  void write(const EpisodeRecord& record) override { records.push_back(record); }
  std::vector<EpisodeRecord> records;
};

/// Parsed episodes.csv. Column roles come from the caller, since the header
/// alone does not say where the knob columns end.
struct EpisodeTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;  // every column parsed as a double

  std::size_t column(const std::string& name) const;  // throws ReportError
};

EpisodeTable read_episode_table(const std::filesystem::path& path);

}  // namespace rlv
