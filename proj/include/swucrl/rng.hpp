#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace swucrl {

/// SplitMix64 finalizer. Used to derive independent stream seeds from a
/// (base seed, salt) pair.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) noexcept {
  return splitmix64(splitmix64(base) ^ (salt * 0xD1B54A32D192ED03ULL));
}

/// Seedable generator on top of std::mt19937_64.
///
/// The engine's output sequence is fixed by the standard; the distribution
/// helpers below are written out by hand instead of using <random>
/// distributions, whose algorithms are implementation-defined. Together this
/// makes every trace reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard exponential variate (inverse CDF on (0, 1]).
  double exponential();

  /// Index drawn from a probability vector by inverse CDF. Mass lost to
  /// rounding lands on the last index with positive probability.
  std::size_t categorical(std::span<const double> probs);

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace swucrl
