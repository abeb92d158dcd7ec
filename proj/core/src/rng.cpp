#include "sphwiener/rng.hpp"

#include <cmath>

namespace sphwiener {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) noexcept {
  return splitmix64(splitmix64(splitmix64(master) ^ a) ^ (b * kGolden + 0x632BE59BD9B4E019ULL));
}

StreamRng::StreamRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_(splitmix64(seed ^ splitmix64(stream + 0xD1B54A32D192ED03ULL))) {}

std::uint64_t StreamRng::next_u64() noexcept {
  ++counter_;
  return splitmix64(key_ + counter_ * kGolden);
}

double StreamRng::next_uniform() noexcept {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double StreamRng::next_gaussian() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * next_uniform() - 1.0;
    v = 2.0 * next_uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

}  // namespace sphwiener
