#pragma once

#include <cstdint>
#include <cmath>
#include <random>
#include <span>

namespace seeker::rng {

using Engine = std::mt19937_64;

// SplitMix64 mixer, used to derive decorrelated sub-stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Independent engine for (seed, stream). Streams with distinct tags never
// share state, so scene generation, oracle noise and policy sampling can be
// seeded separately.
inline Engine make_engine(std::uint64_t seed, std::uint64_t stream = 0) {
  std::uint64_t s = seed;
  (void)splitmix64(s);
  s ^= 0x632be59bd9b4e019ULL * (stream + 1);
  const std::uint64_t a = splitmix64(s);
  const std::uint64_t b = splitmix64(s);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return Engine(seq);
}

// Uniform double in [0, 1). Hand-rolled instead of
// std::uniform_real_distribution: the standard leaves distribution output
// unspecified across library implementations, and run-to-run byte-identical
// metrics are part of the harness contract.
inline double uniform_unit(Engine& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n). Rejection sampling keeps it exactly unbiased.
inline std::uint64_t uniform_below(Engine& g, std::uint64_t n) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t v = g();
  while (v >= limit) v = g();
  return v % n;
}

// Standard normal via Box-Muller (no caching of the second value).
inline double normal(Engine& g) {
  const double u1 = 1.0 - uniform_unit(g);  // (0, 1]
  const double u2 = uniform_unit(g);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

// Index draw from a normalized probability vector by inverse CDF.
inline std::size_t categorical(Engine& g, std::span<const double> probs) {
  const double u = uniform_unit(g);
  double cum = 0.0;
  for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
    cum += probs[i];
    if (u < cum) return i;
  }
  return probs.empty() ? 0 : probs.size() - 1;
}

}  // namespace seeker::rng
