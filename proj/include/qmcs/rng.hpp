#pragma once

#include <cstdint>
#include <limits>

namespace qmcs {

/// SplitMix64 finalizer. Used both as a stream generator and as a stateless
/// hash for counter-based draws.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derive an independent seed for substream `stream` of `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

/// Stateless draw number `counter` of substream `stream`.
constexpr std::uint64_t counter_draw(std::uint64_t seed, std::uint64_t stream,
                                     std::uint64_t counter) noexcept {
  return mix64(derive_seed(seed, stream) + counter * 0x9e3779b97f4a7c15ULL);
}

/// Map 64 random bits to [0, 1) with 53 bits of precision.
constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Splittable counter-based generator. Every trial, restart or reservoir gets
/// its own substream through split(), so results do not depend on the order in
/// which work is executed.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_(derive_seed(seed, stream)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept { return mix64(key_ + (counter_++) * 0x9e3779b97f4a7c15ULL); }

  Rng split(std::uint64_t stream) const noexcept { return Rng(key_, stream); }

  /// Uniform in [0, 1).
  double uniform() noexcept { return to_unit((*this)()); }

  /// Uniform in (0, 1].
  double uniform_positive() noexcept { return 1.0 - uniform(); }

  /// Uniform integer in [0, bound). Bound must be positive.
  std::uint64_t below(std::uint64_t bound) noexcept {
    // Lemire's multiply-shift with rejection.
    unsigned __int128 product = static_cast<unsigned __int128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        product = static_cast<unsigned __int128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(product);
      }
    }
    return static_cast<std::uint64_t>(product >> 64);
  }

  bool coin() noexcept { return ((*this)() >> 63) != 0; }

  /// Standard normal via Box-Muller (one value per call).
  double normal() noexcept;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace qmcs
