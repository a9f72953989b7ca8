#pragma once

#include <cstdint>
#include <random>

namespace semibandit {

using Engine = std::mt19937_64;

// splitmix64 finalizer: a bijective 64-bit avalanche mixer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(mix64(master) ^ (index * 0xD1B54A32D192ED03ULL + 1));
}

// Top 53 bits mapped to [0, 1).
constexpr double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double uniform01(Engine& engine) { return to_unit(engine()); }

// Named streams hanging off one path seed.
enum class Stream : std::uint64_t { kEnvironment = 1, kPolicy = 2 };

constexpr std::uint64_t stream_seed(std::uint64_t path_seed, Stream stream) {
  return derive_seed(path_seed, static_cast<std::uint64_t>(stream));
}

// Counter-based uniforms: the value for (round, item) depends only on the
// seed and those two counters, never on which other items were drawn.
class OutcomeStream {
 public:
  explicit OutcomeStream(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::int64_t round() const { return round_; }
  void advance() { ++round_; }

  double uniform(int item) const {
    const std::uint64_t round_key =
        mix64(seed_ ^ (static_cast<std::uint64_t>(round_) * 0xA24BAED4963EE407ULL));
    return to_unit(
        mix64(round_key + static_cast<std::uint64_t>(item) * 0x9FB21C651E98DF25ULL));
  }

 private:
  std::uint64_t seed_;
  std::int64_t round_ = 0;
};

}  // namespace semibandit
