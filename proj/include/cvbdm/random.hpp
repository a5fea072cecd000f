#ifndef CVBDM_RANDOM_HPP
#define CVBDM_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace cvbdm {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Used to turn (master seed, stream index) pairs into
/// well-separated engine seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of stream `stream` under `master`:
///   splitmix64(splitmix64(master) ^ splitmix64(stream + 1)).
/// Streams 0 and 1 are reserved for the two populations of a comparison;
/// replication r of a study uses stream r and splits again for its
/// populations.
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::uint64_t stream) noexcept {
  return splitmix64(splitmix64(master) ^ splitmix64(stream + 1));
}

inline Rng make_rng(std::uint64_t seed) { return Rng{seed}; }

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>{0.0, 1.0}(rng);
}

inline double std_normal(Rng& rng) {
  return std::normal_distribution<double>{0.0, 1.0}(rng);
}

/// Gamma variate with the given shape and *rate*.
inline double gamma_rate(Rng& rng, double shape, double rate) {
  return std::gamma_distribution<double>{shape, 1.0 / rate}(rng);
}

/// Draw from N(mean, sd^2) truncated to (0, inf).
///
/// Plain rejection when the lower bound sits below the bulk, otherwise
/// Robert's translated-exponential proposal, which stays efficient however
/// far into the tail the truncation point lies.
inline double positive_truncated_normal(Rng& rng, double mean, double sd) {
  const double lower = -mean / sd;  // truncation point in standard units
  if (lower < 0.45) {
    for (;;) {
      const double z = std_normal(rng);
      if (z > lower) return mean + sd * z;
    }
  }
  const double rate = 0.5 * (lower + std::sqrt(lower * lower + 4.0));
  for (;;) {
    const double z = lower - std::log(1.0 - uniform01(rng)) / rate;
    const double log_accept = -0.5 * (z - rate) * (z - rate);
    if (std::log(uniform01(rng)) <= log_accept) return mean + sd * z;
  }
}

}  // namespace cvbdm

#endif  // CVBDM_RANDOM_HPP
