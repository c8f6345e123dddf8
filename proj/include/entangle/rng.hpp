#pragma once

// Keyed random streams. Every sample of an experiment draws from its own
// stream derived from (seed, experiment, subcollection, sample), so results
// do not depend on evaluation order or thread count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include "entangle/geometry.hpp"

namespace entangle {

struct StreamKey {
  std::uint64_t experiment = 0;
  std::uint64_t subcollection = 0;
  std::uint64_t sample = 0;
};

namespace detail {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// SplitMix64 generator whose initial state is a hash of the seed and key.
/// Satisfies UniformRandomBitGenerator.
class KeyedRng {
 public:
  using result_type = std::uint64_t;

  constexpr explicit KeyedRng(std::uint64_t seed, StreamKey key = {}) noexcept
      : state_(derive(seed, key)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    state_ += detail::kGolden;
    return detail::mix64(state_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  constexpr double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// Uniform on the unit sphere (Archimedes: z uniform on [-1, 1], azimuth uniform).
  Vec3 unit_vector() noexcept {
    const double z = 2.0 * uniform() - 1.0;
    const double phi = 2.0 * std::numbers::pi * uniform();
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
  }

  Direction direction() { return Direction(unit_vector()); }

  Point3 unit_cube_point() noexcept {
    const double x = uniform();
    const double y = uniform();
    const double z = uniform();
    return {x, y, z};
  }

  /// Child stream for a nested key (e.g. a resample attempt).
  constexpr KeyedRng fork(std::uint64_t tag) const noexcept {
    KeyedRng child(0);
    child.state_ = detail::mix64(state_ ^ detail::mix64(tag + detail::kGolden));
    return child;
  }

 private:
  static constexpr std::uint64_t derive(std::uint64_t seed, StreamKey key) noexcept {
    std::uint64_t h = detail::mix64(seed + detail::kGolden);
    h = detail::mix64(h ^ (key.experiment + 0x632BE59BD9B4E019ULL));
    h = detail::mix64(h ^ (key.subcollection + 0x8CB92BA72F3D8DD7ULL));
    h = detail::mix64(h ^ (key.sample + 0xD6E8FEB86659FD93ULL));
    return h;
  }

  std::uint64_t state_;
};

}  // namespace entangle
