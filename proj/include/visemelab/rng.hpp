#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace visemelab {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Folds a list of integers into one well-mixed seed. Used to give every
/// (run, word, sample) its own stream so results do not depend on scheduling.
inline std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (auto p : parts) h = splitmix64(h ^ splitmix64(p));
  return h;
}

/// Stable 64-bit tag for a short string, for mixing names into seeds.
inline std::uint64_t seed_tag(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

using Rng = std::mt19937_64;

}  // namespace visemelab
