#pragma once

#include <cstdint>

namespace toepcov {

/// Counter-based generator: the i-th draw of stream (seed, stream) is a pure function
/// of (seed, stream, i), so streams can be split across workers and extended
/// without disturbing earlier draws.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  /// Uniform on (0, 1], 53 bits.
  double next_uniform();
  /// Standard normal via Box-Muller on two uniforms; the second variate is cached.
  double next_normal();

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Derives an independent seed from a base seed and a tag (trial, point, ...).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag);

}  // namespace toepcov
