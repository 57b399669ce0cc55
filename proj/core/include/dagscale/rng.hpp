#pragma once

#include <cstdint>

namespace dagscale {

// splitmix64 finalizer (Steele, Lea, Flood 2014). Used both as a sequential
// generator and, with stream_draw, as a counter-based generator with O(1)
// random access: draw k of a stream depends only on (seed, k), never on the
// order of queries. Workload streams rely on that for reproducibility.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kSplitmixGamma = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t stream_draw(std::uint64_t seed, std::uint64_t index) noexcept {
  return splitmix64_mix(seed + (index + 1) * kSplitmixGamma);
}

// Uniform double in [0, 1) from the top 53 bits.
constexpr double to_unit_double(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

constexpr double unit_draw(std::uint64_t seed, std::uint64_t index) noexcept {
  return to_unit_double(stream_draw(seed, index));
}

// Sequential convenience wrapper for places that just need a stream of
// reproducible draws (the DAG synthesizer).
class splitmix_sequence {
 public:
  explicit splitmix_sequence(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    state_ += kSplitmixGamma;
    return splitmix64_mix(state_);
  }

  double next_unit() noexcept { return to_unit_double(next()); }

  double next_in(double lo, double hi) noexcept { return lo + next_unit() * (hi - lo); }

  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t next_below(std::uint64_t n) noexcept { return next() % n; }

 private:
  std::uint64_t state_;
};

}  // namespace dagscale
