#include "rlverif/bridge.hpp"

#include <cmath>
#include <initializer_list>
#include <set>

#include <nlohmann/json.hpp>

#include "rlverif/errors.hpp"

namespace rlv::bridge {

using nlohmann::json;

namespace {

// Integral doubles go out as JSON integers so knob values read naturally
// ([0.4,6,300], not [0.4,6.0,300.0]). Both forms decode to the same double.
json real_to_json(double v) {
  if (std::isfinite(v) && v == std::trunc(v) && std::fabs(v) < 9.007199254740992e15 &&
      !(v == 0.0 && std::signbit(v))) {
    return static_cast<std::int64_t>(v);
  }
  return v;
}

json reals_to_json(const std::vector<double>& values) {
  json arr = json::array();
  for (double v : values) arr.push_back(real_to_json(v));
  return arr;
}

void require_fields(const json& obj, std::initializer_list<const char*> fields) {
  std::set<std::string> allowed{"type"};
  for (const char* f : fields) {
    allowed.insert(f);
    if (!obj.contains(f)) throw DecodeError(std::string("missing field '") + f + "'");
  }
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) throw DecodeError("unknown field '" + key + "'");
  }
}

double json_to_real(const json& j, const char* field) {
  if (!j.is_number()) throw DecodeError(std::string("field '") + field + "' must hold numbers");
  return j.get<double>();
}

std::vector<double> json_to_reals(const json& j, const char* field) {
  if (!j.is_array()) throw DecodeError(std::string("field '") + field + "' must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(json_to_real(v, field));
  return out;
}

std::uint64_t json_to_unsigned(const json& j, const char* field) {
  if (!j.is_number_unsigned()) {
    throw DecodeError(std::string("field '") + field + "' must be a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

std::string json_to_string(const json& j, const char* field) {
  if (!j.is_string()) throw DecodeError(std::string("field '") + field + "' must be a string");
  return j.get<std::string>();
}

}  // namespace

json action_space_to_json(const ActionSpace& space) {
  json knobs = json::array();
  for (const auto& k : space.knobs()) {
    if (k.is_discrete()) {
      knobs.push_back({{"name", k.name()}, {"kind", "discrete"}, {"values", reals_to_json(k.values())}});
    } else {
      knobs.push_back({{"name", k.name()}, {"kind", "continuous"}, {"lo", real_to_json(k.lo())},
                       {"hi", real_to_json(k.hi())}});
    }
  }
  return {{"knobs", std::move(knobs)}};
}

ActionSpace action_space_from_json(const json& j) {
  if (!j.is_object() || j.size() != 1 || !j.contains("knobs") || !j["knobs"].is_array()) {
    throw DecodeError("action_space must be an object with exactly a 'knobs' array");
  }
  std::vector<KnobSpec> knobs;
  try {
    for (const auto& k : j["knobs"]) {
      if (!k.is_object()) throw DecodeError("knob must be an object");
      const std::string kind = k.contains("kind") ? json_to_string(k["kind"], "kind") : "";
      const std::string name = k.contains("name") ? json_to_string(k["name"], "name") : "";
      if (kind == "continuous") {
        if (k.size() != 4 || !k.contains("lo") || !k.contains("hi")) {
          throw DecodeError("continuous knob needs exactly name, kind, lo, hi");
        }
        knobs.push_back(KnobSpec::continuous(name, json_to_real(k["lo"], "lo"), json_to_real(k["hi"], "hi")));
      } else if (kind == "discrete") {
        if (k.size() != 3 || !k.contains("values")) throw DecodeError("discrete knob needs exactly name, kind, values");
        knobs.push_back(KnobSpec::discrete(name, json_to_reals(k["values"], "values")));
      } else {
        throw DecodeError("knob kind must be 'continuous' or 'discrete'");
      }
    }
    return ActionSpace(std::move(knobs));
  } catch (const ContractViolation& e) {
    throw DecodeError(std::string("invalid action space: ") + e.what());
  }
}

std::string_view type_name(const Message& msg) {
  static constexpr std::string_view names[] = {"reset", "reset_ack", "step", "step_ack", "hello", "error"};
  return names[msg.index()];
}

std::string encode(const Message& msg) {
  json j = std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Reset>) {
          return {{"seed", m.seed}};
        } else if constexpr (std::is_same_v<T, ResetAck>) {
          return {{"observation", reals_to_json(m.observation)}};
        } else if constexpr (std::is_same_v<T, Step>) {
          return {{"action", reals_to_json(m.action)}};
        } else if constexpr (std::is_same_v<T, StepAck>) {
          return {{"observation", reals_to_json(m.observation)}, {"counts", m.counts}, {"done", m.done}};
        } else if constexpr (std::is_same_v<T, Hello>) {
          return {{"protocol_version", m.protocol_version},
                  {"action_space", action_space_to_json(m.action_space)},
                  {"events", m.events}};
        } else {
          return {{"code", m.code}, {"detail", m.detail}};
        }
      },
      msg);
  // "type" leads so the line reads naturally; json objects sort their keys.
  std::string body = j.dump(-1, ' ', false, json::error_handler_t::replace);
  std::string out = "{\"type\":\"" + std::string(type_name(msg)) + "\"";
  if (body.size() > 2) out += "," + body.substr(1);
  else out += "}";
  out.push_back('\n');
  return out;
}

Message decode(std::string_view line) {
  if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw DecodeError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw DecodeError("message must be a JSON object");
  if (!j.contains("type") || !j["type"].is_string()) throw DecodeError("missing field 'type'");
  const std::string type = j["type"].get<std::string>();

  if (type == "reset") {
    require_fields(j, {"seed"});
    return Reset{json_to_unsigned(j["seed"], "seed")};
  }
  if (type == "reset_ack") {
    require_fields(j, {"observation"});
    return ResetAck{json_to_reals(j["observation"], "observation")};
  }
  if (type == "step") {
    require_fields(j, {"action"});
    return Step{json_to_reals(j["action"], "action")};
  }
  if (type == "step_ack") {
    require_fields(j, {"observation", "counts", "done"});
    StepAck ack;
    ack.observation = json_to_reals(j["observation"], "observation");
    if (!j["counts"].is_array()) throw DecodeError("field 'counts' must be an array");
    for (const auto& c : j["counts"]) ack.counts.push_back(json_to_unsigned(c, "counts"));
    if (!j["done"].is_boolean()) throw DecodeError("field 'done' must be a boolean");
    ack.done = j["done"].get<bool>();
    return ack;
  }
  if (type == "hello") {
    require_fields(j, {"protocol_version", "action_space", "events"});
    Hello hello;
    if (!j["protocol_version"].is_number_integer()) throw DecodeError("field 'protocol_version' must be an integer");
    hello.protocol_version = j["protocol_version"].get<std::int64_t>();
    hello.action_space = action_space_from_json(j["action_space"]);
    if (!j["events"].is_array()) throw DecodeError("field 'events' must be an array");
    for (const auto& e : j["events"]) hello.events.push_back(json_to_string(e, "events"));
    return hello;
  }
  if (type == "error") {
    require_fields(j, {"code", "detail"});
    return ErrorMsg{json_to_string(j["code"], "code"), json_to_string(j["detail"], "detail")};
  }
  throw DecodeError("unknown type '" + type + "'");
}

void serve_dut(DutModel& dut, LineTransport& transport, std::size_t max_steps) {
  auto send = [&](const Message& m) {
    std::string line = encode(m);
    line.pop_back();
    transport.write_line(line);
  };
  send(Hello{kProtocolVersion, dut.action_space(), dut.event_names()});

  bool have_reset = false;
  std::size_t steps = 0;
  while (auto line = transport.read_line()) {
    Message msg;
    try {
      msg = decode(*line);
    } catch (const DecodeError& e) {
      send(ErrorMsg{"decode", e.what()});
      continue;
    }
    if (const auto* r = std::get_if<Reset>(&msg)) {
      try {
        send(ResetAck{dut.reset(r->seed).state});
        have_reset = true;
        steps = 0;
      } catch (const std::exception& e) {
        have_reset = false;
        send(ErrorMsg{"dut_fault", e.what()});
      }
    } else if (const auto* s = std::get_if<Step>(&msg)) {
      if (!have_reset) {
        send(ErrorMsg{"protocol", "step before reset"});
        continue;
      }
      if (steps >= max_steps) {
        send(ErrorMsg{"protocol", "step after episode finished"});
        continue;
      }
      const Action action{s->action};
      if (auto violations = validate(dut.action_space(), action); !violations.empty()) {
        send(ErrorMsg{"invalid_action", violations.front().message});
        continue;
      }
      try {
        DutStepOutput out = dut.step(action);
        ++steps;
        send(StepAck{std::move(out.observation.state), std::move(out.counts.counts), steps >= max_steps});
      } catch (const std::exception& e) {
        send(ErrorMsg{"dut_fault", e.what()});
      }
    } else {
      send(ErrorMsg{"protocol", "unexpected '" + std::string(type_name(msg)) + "' message"});
    }
  }
}

RemoteDut::RemoteDut(std::unique_ptr<LineTransport> transport) : transport_(std::move(transport)) {
  auto line = transport_->read_line();
  if (!line) throw ConnectError("peer closed before sending hello");
  Message msg;
  try {
    msg = decode(*line);
  } catch (const DecodeError& e) {
    throw ConnectError(std::string("bad hello: ") + e.what());
  }
  auto* hello = std::get_if<Hello>(&msg);
  if (!hello) throw ConnectError("expected hello, got '" + std::string(type_name(msg)) + "'");
  if (hello->protocol_version != kProtocolVersion) {
    throw ConnectError("unsupported protocol version " + std::to_string(hello->protocol_version));
  }
  space_ = std::move(hello->action_space);
  events_ = std::move(hello->events);
}

Message RemoteDut::round_trip(const Message& request) {
  std::string line = encode(request);
  line.pop_back();
  transport_->write_line(line);
  auto reply = transport_->read_line();
  if (!reply) throw TransportError("peer closed the connection");
  Message msg = decode(*reply);
  if (auto* err = std::get_if<ErrorMsg>(&msg)) throw RemoteError(err->code, err->detail);
  return msg;
}

Observation RemoteDut::reset(std::uint64_t seed) {
  Message msg = round_trip(Reset{seed});
  auto* ack = std::get_if<ResetAck>(&msg);
  if (!ack) throw ProtocolError("expected reset_ack, got '" + std::string(type_name(msg)) + "'");
  last_done_ = false;
  return {std::move(ack->observation)};
}

DutStepOutput RemoteDut::step(const Action& action) {
  Message msg = round_trip(Step{action.values});
  auto* ack = std::get_if<StepAck>(&msg);
  if (!ack) throw ProtocolError("expected step_ack, got '" + std::string(type_name(msg)) + "'");
  if (ack->counts.size() != events_.size()) {
    throw ProtocolError("step_ack carries " + std::to_string(ack->counts.size()) + " counts for " +
                        std::to_string(events_.size()) + " events");
  }
  last_done_ = ack->done;
  return {{std::move(ack->observation)}, {std::move(ack->counts)}};
}

std::unique_ptr<LineTransport> open_endpoint(const std::string& endpoint, std::chrono::milliseconds timeout) {
  if (endpoint.rfind("exec:", 0) == 0) {
    return std::make_unique<ProcessTransport>(endpoint.substr(5), timeout);
  }
  if (endpoint.rfind("tcp:", 0) == 0) {
    const std::string rest = endpoint.substr(4);
    const auto colon = rest.rfind(':');
    if (colon == std::string::npos) throw ConfigError("tcp endpoint needs HOST:PORT: " + endpoint);
    unsigned long port = 0;
    try {
      port = std::stoul(rest.substr(colon + 1));
    } catch (const std::exception&) {
      port = 0;
    }
    if (port == 0 || port > 65535) throw ConfigError("bad port in endpoint " + endpoint);
    return tcp_connect(rest.substr(0, colon), static_cast<std::uint16_t>(port), timeout);
  }
  throw ConfigError("endpoint must start with tcp: or exec: (got '" + endpoint + "')");
}

}  // namespace rlv::bridge
