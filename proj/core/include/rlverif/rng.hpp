#pragma once

#include <cstdint>
#include <random>

namespace rlv {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Independent random streams used inside one episode.
enum class Stream : std::uint64_t { dut = 1, agent = 2 };

/// Counter-based split: the seed of (campaign seed, episode, stream) is a
/// pure function of its inputs, so any single episode can be replayed alone.
constexpr std::uint64_t episode_seed(std::uint64_t campaign_seed,
                                     std::uint64_t episode,
                                     Stream stream) noexcept {
  return mix64(mix64(campaign_seed) ^ mix64(episode * 4 + static_cast<std::uint64_t>(stream)));
}

}  // namespace rlv
