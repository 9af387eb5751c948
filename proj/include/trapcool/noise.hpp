#pragma once

#include <cstdint>

namespace trapcool {

/// Counter-based Gaussian deviates: the value for (seed, stream, step) does not
/// depend on evaluation order, so trajectories can run on any thread.
class NoiseStream {
 public:
  NoiseStream(std::uint64_t seed, std::uint64_t stream, bool antithetic = false);

  /// Standard normal deviate for the given step.
  double normal(std::uint64_t step) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  bool antithetic() const { return antithetic_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
  bool antithetic_;
};

}  // namespace trapcool
