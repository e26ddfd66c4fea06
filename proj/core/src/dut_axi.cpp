#include "rlverif/dut_axi.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "rlverif/errors.hpp"

namespace rlv::axi {

void AxiConfig::check() const {
  if (fifo_depth == 0) throw ConfigError("axi.fifo_depth must be positive");
  if (region_size == 0) throw ConfigError("axi.region_size must be positive");
  if (drain_period == 0) throw ConfigError("axi.drain_period must be positive");
}

ActionSpace action_space() {
  return ActionSpace({KnobSpec::integer_range("lower_slave", 0, kSlaves - 1),
                      KnobSpec::integer_range("upper_slave", 0, kSlaves - 1)});
}

AddressRange decode_action(const Action& action, const AxiConfig& config) {
  if (action.values.size() != 2) throw ContractViolation("AXI action needs 2 values");
  const auto a = static_cast<std::uint64_t>(action.values[0]);
  const auto b = static_cast<std::uint64_t>(action.values[1]);
  return {std::min(a, b) * config.region_size, (std::max(a, b) + 1) * config.region_size};
}

std::size_t decode_address(std::uint64_t addr, const AxiConfig& config) {
  if (addr >= config.address_map_end()) {
    std::ostringstream msg;
    msg << "address 0x" << std::hex << addr << " is outside the slave map";
    throw DecodeError(msg.str());
  }
  return static_cast<std::size_t>(addr / config.region_size);
}

void SlaveFifo::enqueue(const Request& r) {
  if (!not_full()) throw ContractViolation("enqueue into a full FIFO");
  queue_.push_back(r);
}

Request SlaveFifo::dequeue() {
  if (!not_empty()) throw ContractViolation("dequeue from an empty FIFO");
  Request r = queue_.front();
  queue_.pop_front();
  return r;
}

Crossbar::Crossbar(AxiConfig config) : config_(config) {
  config_.check();
  fifos_.assign(kSlaves, SlaveFifo(config_.fifo_depth));
}

void Crossbar::reset() {
  for (auto& f : fifos_) f.clear();
  cycle_ = 0;
  next_id_ = 0;
}

StepOutcome Crossbar::step(const AddressRange& range, Rng& rng, std::vector<TraceEntry>* trace) {
  if (range.lo >= range.hi || range.hi > config_.address_map_end()) {
    throw ContractViolation("address range outside the slave map");
  }
  StepOutcome out;
  out.counts.counts.assign(kSlaves, 0);
  std::uniform_int_distribution<std::uint64_t> pick_addr(range.lo, range.hi - 1);

  for (std::size_t c = 0; c < config_.cycles_per_step; ++c, ++cycle_) {
    // Fixed priority: master 0 is granted before master 1.
    for (std::size_t m = 0; m < kMasters; ++m) {
      const Request req{next_id_++, pick_addr(rng), m};
      const std::size_t slave = decode_address(req.addr, config_);
      SlaveFifo& fifo = fifos_[slave];
      const bool accepted = fifo.not_full();
      if (accepted) fifo.enqueue(req);
      if (trace) trace->push_back({cycle_, accepted ? TraceKind::enqueue : TraceKind::reject, slave, req});
    }
    if (c % config_.drain_period == 0) {
      for (std::size_t s = 0; s < kSlaves; ++s) {
        if (!fifos_[s].not_empty()) continue;
        const Request r = fifos_[s].dequeue();
        if (trace) trace->push_back({cycle_, TraceKind::dequeue, s, r});
      }
    }
    for (std::size_t s = 0; s < kSlaves; ++s) {
      if (!fifos_[s].not_full()) ++out.counts.counts[s];
    }
  }
  out.occupancy.reserve(kSlaves);
  for (const auto& f : fifos_) out.occupancy.push_back(f.occupancy());
  return out;
}

std::vector<TraceViolation> golden_check(const std::vector<TraceEntry>& trace,
                                         const AxiConfig& config) {
  using Kind = TraceViolation::Kind;
  std::vector<std::vector<std::uint64_t>> queues(kSlaves);
  std::vector<std::size_t> heads(kSlaves, 0);
  std::vector<TraceViolation> out;

  auto occupancy = [&](std::size_t s) { return queues[s].size() - heads[s]; };

  for (const TraceEntry& t : trace) {
    if (t.slave >= kSlaves) {
      out.push_back({Kind::misrouted, t.cycle, t.slave, "slave index out of range"});
      continue;
    }
    switch (t.kind) {
      case TraceKind::enqueue:
      case TraceKind::reject: {
        const std::uint64_t owner = t.request.addr / config.region_size;
        if (owner != t.slave) {
          out.push_back({Kind::misrouted, t.cycle, t.slave,
                         "request " + std::to_string(t.request.id) + " belongs to slave " +
                             std::to_string(owner)});
        }
        const bool full = occupancy(t.slave) >= config.fifo_depth;
        if (t.kind == TraceKind::enqueue) {
          if (full) {
            out.push_back({Kind::enqueue_when_full, t.cycle, t.slave,
                           "request " + std::to_string(t.request.id) + " accepted while full"});
          }
          queues[t.slave].push_back(t.request.id);
        } else if (!full) {
          out.push_back({Kind::spurious_reject, t.cycle, t.slave,
                         "request " + std::to_string(t.request.id) + " rejected with room left"});
        }
        break;
      }
      case TraceKind::dequeue: {
        if (occupancy(t.slave) == 0) {
          out.push_back({Kind::dequeue_when_empty, t.cycle, t.slave, "dequeue from empty FIFO"});
          break;
        }
        const std::uint64_t expected = queues[t.slave][heads[t.slave]++];
        if (expected != t.request.id) {
          out.push_back({Kind::fifo_order, t.cycle, t.slave,
                         "dequeued request " + std::to_string(t.request.id) + ", expected " +
                             std::to_string(expected)});
        }
        break;
      }
    }
  }
  return out;
}

AxiDut::AxiDut(AxiConfig config) : space_(axi::action_space()), xbar_(config) {}

std::vector<std::string> AxiDut::event_names() const {
  std::vector<std::string> names;
  for (std::size_t s = 0; s < kSlaves; ++s) names.push_back("fifo_full_slave_" + std::to_string(s));
  return names;
}

Observation AxiDut::reset(std::uint64_t seed) {
  rng_.seed(seed);
  xbar_.reset();
  trace_.clear();
  return {std::vector<double>(kSlaves, 0.0)};
}

DutStepOutput AxiDut::step(const Action& action) {
  const AddressRange range = decode_action(action, xbar_.config());
  StepOutcome outcome = xbar_.step(range, rng_, &trace_);
  if (!golden_check(trace_, xbar_.config()).empty()) ++mismatches_;

  DutStepOutput out;
  out.counts = std::move(outcome.counts);
  out.observation.state.assign(outcome.occupancy.begin(), outcome.occupancy.end());
  return out;
}

}  // namespace rlv::axi
