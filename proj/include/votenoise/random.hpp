#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace votenoise {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to turn structured keys into well-mixed seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Keyed seed derivation: the seed of a work item depends only on the master
// seed and the item's coordinates, never on which worker runs it.
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t h = mix64(master);
  for (std::uint64_t k : keys) {
    h = mix64(h ^ mix64(k + 0x632be59bd9b4e019ULL));
  }
  return h;
}

inline Rng make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> keys) {
  return Rng{derive_seed(master, keys)};
}

}  // namespace votenoise
