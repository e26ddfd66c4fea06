#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rlverif/action_space.hpp"
#include "rlverif/env.hpp"
#include "rlverif/transport.hpp"

namespace rlv::bridge {

// Wire protocol, version 1: one JSON object per line, '\n' terminated, with a
// "type" field naming the variant. Unknown fields are rejected.
//
//   serving side: hello, then one reset_ack / step_ack / error per request
//   driving side: reset, step

inline constexpr int kProtocolVersion = 1;

struct Reset {
  std::uint64_t seed = 0;
  friend bool operator==(const Reset&, const Reset&) = default;
};

struct ResetAck {
  std::vector<double> observation;
  friend bool operator==(const ResetAck&, const ResetAck&) = default;
};

struct Step {
  std::vector<double> action;
  friend bool operator==(const Step&, const Step&) = default;
};

struct StepAck {
  std::vector<double> observation;
  std::vector<std::uint64_t> counts;
  bool done = false;
  friend bool operator==(const StepAck&, const StepAck&) = default;
};

struct Hello {
  std::int64_t protocol_version = kProtocolVersion;
  ActionSpace action_space;
  std::vector<std::string> events;
  friend bool operator==(const Hello&, const Hello&) = default;
};

struct ErrorMsg {
  std::string code;
  std::string detail;
  friend bool operator==(const ErrorMsg&, const ErrorMsg&) = default;
};

using Message = std::variant<Reset, ResetAck, Step, StepAck, Hello, ErrorMsg>;

/// Wire name of the message's variant ("reset", "step_ack", ...).
std::string_view type_name(const Message& msg);

/// One line, including the trailing '\n'.
std::string encode(const Message& msg);

/// Accepts a line with or without its '\n'. Throws DecodeError.
Message decode(std::string_view line);

nlohmann::json action_space_to_json(const ActionSpace& space);
ActionSpace action_space_from_json(const nlohmann::json& j);

/// Serve `dut` on `transport` until the peer closes the stream.
void serve_dut(DutModel& dut, LineTransport& transport, std::size_t max_steps = 1);

inline constexpr std::chrono::milliseconds kDefaultTimeout{30'000};

/// DutModel whose reset/step are request/response round trips over a
/// transport. The action space and event names come from the peer's hello.
class RemoteDut final : public DutModel {
 public:
  /// Reads the hello; throws ConnectError on a missing hello or a version
  /// other than kProtocolVersion.
  explicit RemoteDut(std::unique_ptr<LineTransport> transport);

  const ActionSpace& action_space() const override { return space_; }
  std::vector<std::string> event_names() const override { return events_; }
  Observation reset(std::uint64_t seed) override;
  DutStepOutput step(const Action& action) override;

  bool last_done() const noexcept { return last_done_; }

 private:
  Message round_trip(const Message& request);

  std::unique_ptr<LineTransport> transport_;
  ActionSpace space_;
  std::vector<std::string> events_;
  bool last_done_ = false;
};

/// Endpoint syntax: "tcp:HOST:PORT" or "exec:COMMAND".
std::unique_ptr<LineTransport> open_endpoint(const std::string& endpoint,
                                             std::chrono::milliseconds timeout = kDefaultTimeout);

}  // namespace rlv::bridge
