#include "mobgen/rng.hpp"

#include <cmath>
#include <numbers>

namespace mobgen {
namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t pep, std::int64_t t, Purpose purpose) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ pep);
  h = splitmix64(h ^ static_cast<std::uint64_t>(t));
  return splitmix64(h ^ static_cast<std::uint64_t>(purpose));
}

StreamRng::result_type StreamRng::operator()() { return splitmix64(key_ + kGolden * counter_++); }

double StreamRng::uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double StreamRng::normal() {
  const double u1 = 1.0 - uniform01();  // (0, 1]
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace mobgen
