#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace masim {

// Deterministic random source. Distinct (seed, stream_id) pairs give
// independent streams; identical pairs give identical draws on every
// platform (distributions are generated locally instead of through the
// implementation-defined <random> distribution adaptors).
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream_id = 0) {
    engine_.seed(mix(mix(seed) ^ mix(stream_id ^ 0x9e3779b97f4a7c15ull)));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Index uniform in [0, n).
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
  }

  // Standard normal via Box-Muller.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  // Circularly-symmetric complex Gaussian with E|z|^2 = variance.
  std::complex<double> cnormal(double variance) {
    const double s = std::sqrt(variance / 2.0);
    return {s * normal(), s * normal()};
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace masim
