#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace qgp {

/// Deterministic uniform random source.
///
/// All randomness in the library flows through this wrapper. The raw engine
/// is never exposed and the standard library's distribution templates are
/// never used, so a given seed produces the same draws on every platform and
/// standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform double in [0, 1) with 53-bit resolution.
  double uniform01();

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi);

  /// Unbiased uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_below(std::uint64_t n);

  /// Independent child stream derived from (seed, stream). Deriving the same
  /// stream id twice yields identical generators; distinct ids decorrelate.
  Rng derive(std::uint64_t stream) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// Fisher-Yates shuffle driven by Rng (std::shuffle is implementation
/// defined and would break cross-platform reproducibility).
template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng.uniform_below(i)]);
  }
}

}  // namespace qgp
