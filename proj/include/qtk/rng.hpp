#pragma once

#include <cstdint>

namespace qtk {

/// Counter-based generator: the k-th draw is a SplitMix64 finalizer applied to
/// seed + k * golden-gamma, so a (seed, counter) pair fully determines the
/// stream. substream() derives independent child streams for per-shot work.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal via Box-Muller (portable, unlike std::normal_distribution).
  double normal();

  Rng substream(std::uint64_t stream) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace qtk
