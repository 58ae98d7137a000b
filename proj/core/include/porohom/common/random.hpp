#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace porohom {

/// Seeded random stream with platform-independent draws.
///
/// std::uniform_real_distribution is implementation-defined, so the mapping
/// from engine output to doubles is done here to keep packings and datasets
/// reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  /// Standard normal draw (Box-Muller, one value per call).
  double normal();

  std::uint64_t next() { return engine_(); }

  /// Fisher-Yates permutation of 0..n-1.
  std::vector<std::size_t> permutation(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace porohom
