#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rlverif/env.hpp"
#include "rlverif/rng.hpp"

namespace rlv::rle {

// Run-length-encoding compressor for sparse word streams.
//
// Non-zero words go to a 16-entry word vector. Runs of zeros are counted in a
// count_width-bit counter and written as count_width-bit fields, LSB first,
// into a 64-bit zero-count vector. A field that does not fit in the bits left
// in the vector is split: the low bits fill the vector, the high bits are held
// in the next-count register and become the first bits of the next vector.
// Full vectors are flushed as blocks; nothing is flushed at end of input.
//
// Each stored word carries a flag saying whether a zero run preceded it. A run
// is stored as zero or more saturated fields (value 2^cw - 1, "run continues")
// followed by one terminating field < 2^cw - 1, written when the next non-zero
// word arrives. With the flag this makes the block stream decodable.

inline constexpr std::size_t kWordCapacity = 16;
inline constexpr unsigned kZcCapacityBits = 64;
inline constexpr unsigned kMaxCountWidth = 8;

struct RleConfig {
  unsigned count_width = 4;

  std::uint32_t saturation() const noexcept { return (1u << count_width) - 1u; }
  /// Throws ContractViolation unless 1 <= count_width <= 8.
  void check() const;
};

struct WordEntry {
  std::uint32_t value = 0;
  bool after_zeros = false;

  friend bool operator==(const WordEntry&, const WordEntry&) = default;
};

struct RleBlocks {
  std::vector<std::vector<WordEntry>> word_blocks;
  std::vector<std::uint64_t> zc_blocks;

  friend bool operator==(const RleBlocks&, const RleBlocks&) = default;
};

enum Event : std::size_t { word_full = 0, zc_full = 1, counter_mid = 2, partial_count = 3 };
inline constexpr std::size_t kNumEvents = 4;
using EventCounts = std::array<std::uint64_t, kNumEvents>;

const std::array<std::string, kNumEvents>& event_names();

struct RleState {
  std::vector<WordEntry> word_vec;
  std::uint64_t zc_vec = 0;
  unsigned zc_bits_used = 0;
  std::uint32_t counter = 0;
  std::uint64_t next_count = 0;
  unsigned next_count_width = 0;
  bool in_zero_run = false;
  RleBlocks emitted;
};

/// Advance the compressor by one input word; returns the events it fired.
EventCounts rle_step(RleState& state, const RleConfig& config, std::uint32_t word);

struct RleRun {
  EventCounts events{};
  RleState final_state;
};

RleRun rle_run(const RleConfig& config, std::span<const std::uint32_t> sequence);

/// Reference model: tokenises the input into (zero run, word) pairs and packs
/// the count fields bit by bit. Shares no code with rle_step.
RleBlocks rle_golden(const RleConfig& config, std::span<const std::uint32_t> sequence);

/// Inverse of the compressor given its blocks plus the unflushed final state.
/// Throws CorruptionError for a truncated field or a dangling run.
std::vector<std::uint32_t> rle_decompress(const RleBlocks& blocks, const RleState& final_state,
                                          const RleConfig& config);

struct RleStimulus {
  std::vector<std::uint32_t> sequence;
  unsigned count_width = 1;
};

/// Knobs: zero probability in [0, 1], count_width in {1..8}, length in
/// {100, ..., 1000}. Non-zero words are uniform on [1, 255].
ActionSpace action_space();
RleStimulus decode_action(const Action& action, Rng& rng);

/// Observation layout: word counter, zero-counter bits, counter, next count.
Observation observe(const RleState& state);

class RleDut final : public DutModel {
 public:
  RleDut();

  const ActionSpace& action_space() const override { return space_; }
  std::vector<std::string> event_names() const override;
  Observation reset(std::uint64_t seed) override;
  DutStepOutput step(const Action& action) override;
  std::uint64_t scoreboard_mismatches() const override { return mismatches_; }

  /// The last step's stimulus and run, for tests and debugging.
  const RleStimulus& last_stimulus() const noexcept { return last_stimulus_; }
  const RleState& state() const noexcept { return state_; }

 private:
  ActionSpace space_;
  Rng rng_;
  RleState state_;
  RleStimulus last_stimulus_;
  std::uint64_t mismatches_ = 0;
};

}  // namespace rlv::rle
