#pragma once

#include <cstdint>
#include <limits>

namespace mobgen {

/// Independent draw purposes; each gets its own stream so that toggling one
/// kind of draw never shifts another.
enum class Purpose : std::uint64_t {
  placement = 1,
  destination = 2,
  distance = 3,
  speed = 4,
};

std::uint64_t splitmix64(std::uint64_t x);

/// Stream key for (seed, pep, t, purpose).
std::uint64_t stream_key(std::uint64_t seed, std::uint64_t pep, std::int64_t t, Purpose purpose);

/// Counter-based generator: output n is splitmix64(key + n * golden). Cheap to
/// construct per (pep, step), so streams are order-independent and parallel.
/// Satisfies UniformRandomBitGenerator.
class StreamRng {
 public:
  using result_type = std::uint64_t;

  explicit StreamRng(std::uint64_t key) : key_(key) {}
  StreamRng(std::uint64_t seed, std::uint64_t pep, std::int64_t t, Purpose purpose)
      : key_(stream_key(seed, pep, t, purpose)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();
  /// Standard normal via Box-Muller (no cached second variate).
  double normal();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace mobgen
