#include "rlverif/dut_rle.hpp"

#include <random>

#include "rlverif/errors.hpp"

namespace rlv::rle {

void RleConfig::check() const {
  if (count_width < 1 || count_width > kMaxCountWidth) {
    throw ContractViolation("count_width must be in [1, 8], got " + std::to_string(count_width));
  }
}

const std::array<std::string, kNumEvents>& event_names() {
  static const std::array<std::string, kNumEvents> names{
      "e0_word_full", "e1_zc_full", "e2_counter_mid", "e3_partial_count"};
  return names;
}

namespace {

void flush_zc_if_full(RleState& s, EventCounts& ev) {
  if (s.zc_bits_used < kZcCapacityBits) return;
  ++ev[zc_full];
  s.emitted.zc_blocks.push_back(s.zc_vec);
  s.zc_vec = 0;
  s.zc_bits_used = 0;
  if (s.next_count_width != 0) {
    s.zc_vec = s.next_count;
    s.zc_bits_used = s.next_count_width;
    s.next_count = 0;
    s.next_count_width = 0;
  }
}

void emit_count(RleState& s, const RleConfig& cfg, std::uint64_t count, EventCounts& ev) {
  const unsigned width = cfg.count_width;
  const unsigned room = kZcCapacityBits - s.zc_bits_used;  // always >= 1 here
  if (room >= width) {
    s.zc_vec |= count << s.zc_bits_used;
    s.zc_bits_used += width;
  } else {
    s.zc_vec |= (count & ((std::uint64_t{1} << room) - 1)) << s.zc_bits_used;
    s.next_count = count >> room;
    s.next_count_width = width - room;
    s.zc_bits_used = kZcCapacityBits;
    ++ev[partial_count];
  }
  flush_zc_if_full(s, ev);
}

}  // namespace

EventCounts rle_step(RleState& s, const RleConfig& cfg, std::uint32_t word) {
  EventCounts ev{};
  if (word == 0) {
    s.in_zero_run = true;
    ++s.counter;
    if (cfg.count_width >= 2 && s.counter == (1u << (cfg.count_width - 2))) ++ev[counter_mid];
    if (s.counter == cfg.saturation()) {
      emit_count(s, cfg, s.counter, ev);
      s.counter = 0;
    }
    return ev;
  }

  if (s.in_zero_run) {
    emit_count(s, cfg, s.counter, ev);
    s.counter = 0;
  }
  s.word_vec.push_back({word, s.in_zero_run});
  s.in_zero_run = false;
  if (s.word_vec.size() == kWordCapacity) {
    ++ev[word_full];
    s.emitted.word_blocks.push_back(std::move(s.word_vec));
    s.word_vec.clear();
  }
  return ev;
}

RleRun rle_run(const RleConfig& config, std::span<const std::uint32_t> sequence) {
  config.check();
  RleRun run;
  for (std::uint32_t w : sequence) {
    const EventCounts ev = rle_step(run.final_state, config, w);
    for (std::size_t i = 0; i < kNumEvents; ++i) run.events[i] += ev[i];
  }
  return run;
}

RleBlocks rle_golden(const RleConfig& config, std::span<const std::uint32_t> sequence) {
  config.check();
  const std::uint64_t sat = config.saturation();

  std::vector<std::uint64_t> fields;
  std::vector<WordEntry> words;
  std::uint64_t zeros = 0;
  for (std::uint32_t w : sequence) {
    if (w == 0) {
      ++zeros;
      continue;
    }
    fields.insert(fields.end(), zeros / sat, sat);
    if (zeros > 0) fields.push_back(zeros % sat);
    words.push_back({w, zeros > 0});
    zeros = 0;
  }
  fields.insert(fields.end(), zeros / sat, sat);

  RleBlocks out;
  for (std::size_t i = 0; i + kWordCapacity <= words.size(); i += kWordCapacity) {
    out.word_blocks.emplace_back(words.begin() + static_cast<std::ptrdiff_t>(i),
                                 words.begin() + static_cast<std::ptrdiff_t>(i + kWordCapacity));
  }
  std::uint64_t acc = 0;
  unsigned filled = 0;
  for (std::uint64_t f : fields) {
    for (unsigned b = 0; b < config.count_width; ++b) {
      acc |= ((f >> b) & 1u) << filled;
      if (++filled == kZcCapacityBits) {
        out.zc_blocks.push_back(acc);
        acc = 0;
        filled = 0;
      }
    }
  }
  return out;
}

std::vector<std::uint32_t> rle_decompress(const RleBlocks& blocks, const RleState& final_state,
                                          const RleConfig& config) {
  config.check();
  const unsigned width = config.count_width;
  const std::uint64_t sat = config.saturation();

  // Reassemble the count-field bit stream: flushed vectors, the live vector,
  // then any carry still parked in the next-count register.
  std::vector<bool> bits;
  auto append_bits = [&bits](std::uint64_t v, unsigned n) {
    for (unsigned b = 0; b < n; ++b) bits.push_back(((v >> b) & 1u) != 0);
  };
  for (std::uint64_t block : blocks.zc_blocks) append_bits(block, kZcCapacityBits);
  append_bits(final_state.zc_vec, final_state.zc_bits_used);
  append_bits(final_state.next_count, final_state.next_count_width);
  if (bits.size() % width != 0) {
    throw CorruptionError("count stream ends inside a field (" + std::to_string(bits.size() % width) +
                          " stray bits)");
  }
  std::vector<std::uint64_t> fields(bits.size() / width, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) fields[i / width] |= std::uint64_t{1} << (i % width);
  }

  std::vector<WordEntry> words;
  for (const auto& wb : blocks.word_blocks) words.insert(words.end(), wb.begin(), wb.end());
  words.insert(words.end(), final_state.word_vec.begin(), final_state.word_vec.end());

  std::vector<std::uint32_t> out;
  std::size_t next_field = 0;
  for (const WordEntry& w : words) {
    if (w.after_zeros) {
      for (;;) {
        if (next_field == fields.size()) throw CorruptionError("zero run has no terminating count");
        const std::uint64_t f = fields[next_field++];
        out.insert(out.end(), f, 0u);
        if (f != sat) break;
      }
    }
    out.push_back(w.value);
  }
  for (; next_field < fields.size(); ++next_field) {
    if (fields[next_field] != sat) throw CorruptionError("unterminated count after the last word");
    out.insert(out.end(), sat, 0u);
  }
  out.insert(out.end(), final_state.counter, 0u);
  return out;
}

ActionSpace action_space() {
  return ActionSpace({KnobSpec::continuous("zero_prob", 0.0, 1.0),
                      KnobSpec::integer_range("count_width", 1, 8),
                      KnobSpec::integer_range("length", 100, 1000, 100)});
}

RleStimulus decode_action(const Action& action, Rng& rng) {
  if (action.values.size() != 3) throw ContractViolation("RLE action needs 3 values");
  const double p_zero = action.values[0];
  RleStimulus stim;
  stim.count_width = static_cast<unsigned>(action.values[1]);
  const auto length = static_cast<std::size_t>(action.values[2]);
  stim.sequence.reserve(length);
  std::bernoulli_distribution is_zero(p_zero);
  std::uniform_int_distribution<std::uint32_t> word(1, 255);
  for (std::size_t i = 0; i < length; ++i) {
    stim.sequence.push_back(is_zero(rng) ? 0u : word(rng));
  }
  return stim;
}

Observation observe(const RleState& s) {
  return {{static_cast<double>(s.word_vec.size()), static_cast<double>(s.zc_bits_used),
           static_cast<double>(s.counter), static_cast<double>(s.next_count)}};
}

RleDut::RleDut() : space_(rle::action_space()) {}

std::vector<std::string> RleDut::event_names() const {
  const auto& names = rle::event_names();
  return {names.begin(), names.end()};
}

Observation RleDut::reset(std::uint64_t seed) {
  rng_.seed(seed);
  state_ = RleState{};
  last_stimulus_ = RleStimulus{};
  return observe(state_);
}

DutStepOutput RleDut::step(const Action& action) {
  last_stimulus_ = decode_action(action, rng_);
  const RleConfig config{last_stimulus_.count_width};
  RleRun run = rle_run(config, last_stimulus_.sequence);

  // Scoreboard: reference blocks and lossless roundtrip.
  bool ok = rle_golden(config, last_stimulus_.sequence) == run.final_state.emitted;
  if (ok) {
    try {
      ok = rle_decompress(run.final_state.emitted, run.final_state, config) == last_stimulus_.sequence;
    } catch (const CorruptionError&) {
      ok = false;
    }
  }
  if (!ok) ++mismatches_;

  state_ = std::move(run.final_state);
  DutStepOutput out;
  out.observation = observe(state_);
  out.counts.counts.assign(run.events.begin(), run.events.end());
  return out;
}

}  // namespace rlv::rle
