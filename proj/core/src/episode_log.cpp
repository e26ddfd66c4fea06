#include "rlverif/episode_log.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "rlverif/errors.hpp"

namespace rlv {

std::string format_real(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

CsvEpisodeLog::CsvEpisodeLog(const std::filesystem::path& path, const std::vector<std::string>& knob_names,
                             const std::vector<std::string>& event_names, std::size_t observation_columns)
    : out_(path, std::ios::binary | std::ios::trunc),
      knobs_(knob_names.size()),
      events_(event_names.size()),
      obs_(observation_columns) {
  if (!out_) throw Error("cannot open " + path.string() + " for writing");
  out_ << "episode";
  for (const auto& n : knob_names) out_ << ',' << n;
  for (const auto& n : event_names) out_ << ',' << n;
  out_ << ",reward";
  for (std::size_t i = 0; i < obs_; ++i) out_ << ",obs_" << i;
  out_ << '\n';
}

void CsvEpisodeLog::write(const EpisodeRecord& r) {
  if (r.action.values.size() != knobs_ || r.counts.size() != events_) {
    throw ContractViolation("episode record does not match the log's columns");
  }
  out_ << r.episode;
  for (double v : r.action.values) out_ << ',' << format_real(v);
  for (std::uint64_t c : r.counts.counts) out_ << ',' << c;
  out_ << ',' << format_real(r.reward);
  for (std::size_t i = 0; i < obs_; ++i) {
    out_ << ',' << (i < r.observation.state.size() ? format_real(r.observation.state[i]) : std::string("0"));
  }
  out_ << '\n';
  ++rows_;
}

void CsvEpisodeLog::flush() { out_.flush(); }

std::size_t EpisodeTable::column(const std::string& name) const {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw ReportError("log has no column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

EpisodeTable read_episode_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ReportError("cannot open " + path.string());
  EpisodeTable t;
  std::string line;
  if (!std::getline(in, line)) throw ReportError(path.string() + " is empty");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.header.push_back(cell);
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    row.reserve(t.header.size());
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (true) {
      double v = 0.0;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc{}) throw ReportError(path.string() + ":" + std::to_string(lineno) + ": bad number");
      row.push_back(v);
      if (next == end) break;
      if (*next != ',') throw ReportError(path.string() + ":" + std::to_string(lineno) + ": expected ','");
      p = next + 1;
    }
    if (row.size() != t.header.size()) {
      throw ReportError(path.string() + ":" + std::to_string(lineno) + ": wrong column count");
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace rlv
