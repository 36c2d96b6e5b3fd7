#pragma once

#include <cstdint>

namespace qtdt {

/// Seedable, splittable pseudo-random generator on the splitmix64 sequence
/// (Steele, Lea & Flood's SplittableRandom; output finalizer by Vigna).
///
/// Every stochastic operation in the library takes an explicit Rng handle.
/// Independent sub-streams are derived by integer key from a stream's
/// immutable id, never from its draw position, so a derived stream is a pure
/// function of (seed, key path) and results do not depend on scheduling or
/// on how many draws the parent has made.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept
      : id_(mix(seed ^ 0x6a09e667f3bcc909ULL)), state_(id_) {}

  /// Next raw 64-bit word.
  std::uint64_t next_u64() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double next_double() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double strictly inside (0, 1).
  double next_double_open() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  bool next_bernoulli(double p) noexcept { return next_double() < p; }

  /// Unbiased uniform integer in [0, bound).
  std::uint64_t next_below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t r;
    do {
      r = next_u64();
    } while (r >= limit);
    return r % bound;
  }

  /// Standard normal variate (inverse-CDF; exactly one word consumed).
  double next_normal() noexcept;

  /// Independent stream addressed by (this stream's id, key).
  Rng derive(std::uint64_t key) const noexcept {
    return Rng(raw{}, mix(id_ ^ mix(key * 0x9e3779b97f4a7c15ULL + 0x9e3779b97f4a7c15ULL)));
  }

  std::uint64_t stream_id() const noexcept { return id_; }

 private:
  struct raw {};
  Rng(raw, std::uint64_t id) noexcept : id_(id), state_(id) {}

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t id_;
  std::uint64_t state_;
};

}  // namespace qtdt
