#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace nrange {

/// Portable counter-based generator: output k of stream `key` is
/// splitmix64(key + k * 0x9E3779B97F4A7C15). Every draw is a pure function
/// of (key, counter), so independent streams can be derived for concurrent
/// work without sharing state.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : key_(mix(seed)) {}

  /// Independent child stream, a pure function of (this key, stream id).
  [[nodiscard]] CounterRng derive(std::uint64_t stream) const;

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller (one of the pair is discarded).
  double normal();
  /// Vector of i.i.d. standard normals.
  Eigen::VectorXd normal_vector(Eigen::Index n);

  [[nodiscard]] std::uint64_t counter() const { return counter_; }

  static std::uint64_t mix(std::uint64_t z);

 private:
  CounterRng(std::uint64_t key, bool) : key_(key) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace nrange
