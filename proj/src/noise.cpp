#include "trapcool/noise.hpp"

#include <cmath>
#include <numbers>

namespace trapcool {

namespace {

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// (0, 1]
double to_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

NoiseStream::NoiseStream(std::uint64_t seed, std::uint64_t stream, bool antithetic)
    : seed_(seed), stream_(stream), key_(mix(mix(seed) ^ mix(~stream))), antithetic_(antithetic) {}

double NoiseStream::normal(std::uint64_t step) const {
  const std::uint64_t base = mix(key_ ^ mix(step));
  const double u1 = to_unit(mix(base));
  const double u2 = to_unit(mix(base + 0x632be59bd9b4e019ULL));
  const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  return antithetic_ ? -z : z;
}

}  // namespace trapcool
