#pragma once

#include <cstdint>
#include <random>

namespace apelt {

/// Seedable, portable random source.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Uniform variates are built from the top 53 bits of each draw and
/// normal variates by inverting the standard normal CDF, so a given seed
/// yields the same numbers on every conforming platform.
///
/// Independent streams (one per Monte-Carlo replication) are derived with
/// `Rng::stream(seed, index)`, which hashes (seed, index) through splitmix64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng stream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next() { return engine_(); }
  /// Uniform on the open interval (0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Standard normal quantile function.
double normal_quantile(double u);

}  // namespace apelt
