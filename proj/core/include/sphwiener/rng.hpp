#pragma once

// Counter-based random streams.
//
// Every stream is identified by (seed, stream id). Its k-th 64-bit output is
// splitmix64(key + (k + 1) * golden), where key mixes seed and stream id, so
// draws depend only on their coordinates and never on scheduling. Gaussians
// use the Marsaglia polar method on the stream's uniforms, which keeps
// results bit-identical across platforms.

#include <cstdint>

namespace sphwiener {

/// The SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Deterministic child seed for coordinates (a, b) under `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) noexcept;

class StreamRng {
 public:
  StreamRng(std::uint64_t seed, std::uint64_t stream) noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform on the open interval (0, 1) with 53 random bits.
  double next_uniform() noexcept;
  /// Standard normal variate (polar method; the second variate of each
  /// accepted pair is kept for the next call).
  double next_gaussian() noexcept;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace sphwiener
