#pragma once

#include <cstdint>
#include <numbers>

namespace zx {

/// Small deterministic generator (splitmix64). Used everywhere randomness is
/// needed so that audits and samplers reproduce exactly for a given seed,
/// independent of platform and standard-library version.
class Prng {
  public:
    explicit Prng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [0, 2π).
    double next_angle() { return next_double() * 2.0 * std::numbers::pi; }

    /// Uniform in {0, …, n−1}; n must be positive.
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    /// Independent child stream; deterministic function of the parent state.
    Prng split() { return Prng(next_u64() ^ 0xd1b54a32d192ed03ULL); }

  private:
    std::uint64_t state_;
};

}  // namespace zx
