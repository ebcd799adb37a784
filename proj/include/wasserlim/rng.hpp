#pragma once

#include <cstdint>

namespace wasserlim {

// Counter-based generator: the k-th draw of stream `key` is
// splitmix64_finalize(key + k * 0x9E3779B97F4A7C15), k = 1, 2, ...
// The stream is fully determined by the key, so draws are reproducible
// byte for byte across platforms and independent of thread scheduling.
class CounterRng {
public:
  explicit CounterRng(std::uint64_t seed) noexcept : key_(mix(seed)) {}

  std::uint64_t next() noexcept;

  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n) noexcept;

  // Independent child stream; does not advance this generator.
  CounterRng split(std::uint64_t stream) const noexcept;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

  static std::uint64_t mix(std::uint64_t z) noexcept;

private:
  struct FromKey {};
  CounterRng(FromKey, std::uint64_t key) noexcept : key_(key) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace wasserlim
