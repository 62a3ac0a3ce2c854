#ifndef CADFLOW_RNG_HPP
#define CADFLOW_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "cadflow/errors.hpp"

namespace cadflow {

// splitmix64 step, used to derive independent substream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic substream seed for (seed, salt). Changing the salt decouples
// streams so e.g. mark draws never perturb inter-arrival draws.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t s = seed;
  splitmix64(s);
  s ^= 0x94d049bb133111ebULL * (salt + 1);
  splitmix64(s);
  return splitmix64(s);
}

// mt19937_64 with hand-rolled variate transforms. The engine's output sequence
// is fixed by the standard, and the transforms below avoid the
// implementation-defined std:: distributions, so draws are bit-reproducible
// across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }

  // uniform on [0, 1), 53-bit resolution
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  double exponential(double rate) { return -std::log1p(-uniform01()) / rate; }

  // Inverse-CDF draw from a finite weight vector (weights need not be
  // normalized; they must be non-negative with a positive sum).
  int discrete(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw ConfigError("discrete draw needs a positive total weight");
    double u = uniform01() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      acc += weights[i];
      if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace cadflow

#endif
