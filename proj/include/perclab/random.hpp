#pragma once

// Seeded random streams and exact samplers over the center population.
//
// Every trial draws from its own engine, seeded from (master seed, stream
// tag, trial index) through splitmix64, so results never depend on how
// trials are scheduled across workers.

#include <cstdint>
#include <random>
#include <unordered_map>
#include <vector>

namespace perclab {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Stream tags keep the independent random sources of one experiment apart.
enum class Stream : std::uint64_t {
  kDisorder = 1,
  kArrivals = 2,
  kVectors = 3,
  kPairs = 4,
  kSuite = 5,
  kReference = 6,
  kRemoval = 7,
};

inline Rng stream_rng(std::uint64_t master, Stream tag, std::uint64_t index) {
  const std::uint64_t a = splitmix64(master);
  const std::uint64_t b = splitmix64(a ^ (static_cast<std::uint64_t>(tag) * 0xD1B54A32D192ED03ULL));
  return Rng(splitmix64(b + index));
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform integer in [0, bound).
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(rng);
}

/// Binomial(trials, p), with the degenerate ends handled exactly.
std::uint64_t sample_binomial(Rng& rng, std::uint64_t trials, double p);

/// Fisher-Yates over the virtual array [0, population) backed by a hash map,
/// so drawing k distinct values costs O(k) time and memory.
class SparseShuffle {
 public:
  explicit SparseShuffle(std::uint64_t population) : population_(population) {}

  [[nodiscard]] std::uint64_t population() const noexcept { return population_; }
  [[nodiscard]] std::uint64_t drawn() const noexcept { return drawn_; }
  [[nodiscard]] bool exhausted() const noexcept { return drawn_ == population_; }
  /// Next value of a uniformly random permutation of [0, population).
  std::uint64_t next(Rng& rng);

 private:
  std::uint64_t at(std::uint64_t i) const;

  std::uint64_t population_;
  std::uint64_t drawn_ = 0;
  std::unordered_map<std::uint64_t, std::uint64_t> swapped_;
};

/// k distinct values uniform from [0, population), in draw order.
std::vector<std::uint64_t> sample_without_replacement(Rng& rng, std::uint64_t population, std::uint64_t k);

}  // namespace perclab
