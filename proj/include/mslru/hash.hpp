#pragma once

#include <cstddef>
#include <cstdint>

namespace mslru {

/// MurmurHash3 64-bit finalizer (fmix64). A bijection on 64-bit words with
/// full avalanche; the seed is fixed at zero.
constexpr std::uint64_t fmix64(std::uint64_t k) {
  k ^= k >> 33;
  k *= 0xff51afd7ed558ccdULL;
  k ^= k >> 33;
  k *= 0xc4ceb9fe1a85ec53ULL;
  k ^= k >> 33;
  return k;
}

inline std::size_t hash_to_set(std::uint64_t key, std::size_t num_sets) {
  return static_cast<std::size_t>(fmix64(key) % num_sets);
}

}  // namespace mslru
