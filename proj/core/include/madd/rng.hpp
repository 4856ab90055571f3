#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string_view>

namespace madd {

/// SplitMix64 finalizer. Used both as a hash mixer and as the step function
/// of the keyed substream generator below.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// 64-bit FNV-1a over raw bytes; stable across platforms and runs.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Order-sensitive combination of integer keys into one 64-bit key.
std::uint64_t combine_keys(std::initializer_list<std::uint64_t> keys) noexcept;

/// Small counter-based generator satisfying UniformRandomBitGenerator.
///
/// Streams are addressed by key (run seed, agent, step, purpose, ...) so a
/// draw never depends on how many draws other agents made before it. Paired
/// runs that differ only in intervention therefore share random numbers.
class Substream {
 public:
  using result_type = std::uint64_t;

  explicit Substream(std::uint64_t key) noexcept : state_(mix64(key)) {}
  Substream(std::initializer_list<std::uint64_t> keys) noexcept
      : Substream(combine_keys(keys)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) noexcept { return uniform() < p; }

 private:
  std::uint64_t state_;
};

/// Purposes tag the independent decision streams of one agent at one step.
enum class DrawPurpose : std::uint64_t {
  activation = 1,
  share = 2,
  share_mode = 3,
  belief = 4,
  schedule = 5,
  bot_influence = 6,
};

}  // namespace madd
