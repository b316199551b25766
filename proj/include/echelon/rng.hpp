#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>

namespace echelon {

// splitmix64 finaliser; used to derive independent seeds from (seed, key...) tuples.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Derives a child seed from a parent seed and a path of integer keys.
/// The mapping is a pure function, so any stream can be reconstructed without
/// replaying its siblings: derive_seed(s, {market}) for demand,
/// derive_seed(s, {generation, pair}) for NSGA-II offspring, and so on.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t h = splitmix64(seed);
  for (std::uint64_t k : keys) h = splitmix64(h ^ splitmix64(k + 0x632BE59BD9B4E019ULL));
  return h;
}

// Stream keys shared across modules.
namespace stream {
inline constexpr std::uint64_t demand = 1;
inline constexpr std::uint64_t nsga_init = 2;
inline constexpr std::uint64_t nsga_offspring = 3;
inline constexpr std::uint64_t nsga_trace = 4;
inline constexpr std::uint64_t subproblem = 5;
inline constexpr std::uint64_t eval_trace = 6;
inline constexpr std::uint64_t bounds = 7;
inline constexpr std::uint64_t policy_init = 8;
}  // namespace stream

/// Random source with platform-independent variates.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The std:: distributions are implementation-defined, so uniform,
/// normal and Poisson variates are produced here from raw engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % n;
  }

  // Box-Muller, one variate per pair of uniforms (no cached state).
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double mean, double std_dev) { return mean + std_dev * normal(); }

  std::int64_t poisson(double rate) {
    if (rate <= 0.0) return 0;
    if (rate < 30.0) return poisson_small(rate);
    return poisson_ptrs(rate);
  }

 private:
  // Knuth's multiplication method.
  std::int64_t poisson_small(double rate) {
    const double limit = std::exp(-rate);
    std::int64_t k = 0;
    double p = uniform();
    while (p > limit) {
      ++k;
      p *= uniform();
    }
    return k;
  }

  // Hormann's transformed rejection with squeeze (PTRS), valid for rate >= 10.
  std::int64_t poisson_ptrs(double rate) {
    const double slam = std::sqrt(rate);
    const double loglam = std::log(rate);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
      const double u = uniform() - 0.5;
      const double v = uniform();
      const double us = 0.5 - std::fabs(u);
      const double k = std::floor((2.0 * a / us + b) * u + rate + 0.43);
      if (us >= 0.07 && v <= vr) return static_cast<std::int64_t>(k);
      if (k < 0.0 || (us < 0.013 && v > us)) continue;
      if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
          -rate + k * loglam - std::lgamma(k + 1.0)) {
        return static_cast<std::int64_t>(k);
      }
    }
  }

  std::mt19937_64 engine_;
};

}  // namespace echelon
