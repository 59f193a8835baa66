#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <random>

namespace sprkit {

// Anything that hands out uniforms in [0, 1). Algorithms take this instead of
// a concrete engine so tests can script the exact draws.
template <class U>
concept UniformSource = requires(U& u) {
  { u.uniform() } -> std::convertible_to<double>;
};

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Child seed for (master, trial, class): each component is folded in through
/// one splitmix64 round, so a trace is reproducible from the triple alone.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial, std::uint64_t cls = 0) {
  return mix64(mix64(mix64(master) ^ trial) ^ cls);
}

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  // 53 random mantissa bits; never returns 1.0.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::size_t index(std::size_t bound) { return static_cast<std::size_t>(uniform() * static_cast<double>(bound)); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // UniformRandomBitGenerator, for std::shuffle and friends.
  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace sprkit
