#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace sinrperc {

using Rng = std::mt19937_64;

/// One step of the splitmix64 generator; advances `state`.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Seed splitting rule: sub-stream `stream` of `parent`, item `index`.
/// Depends only on its arguments, so replicas can be scheduled on any
/// number of workers without changing results.
inline std::uint64_t derive_seed(std::uint64_t parent, std::string_view stream,
                                 std::uint64_t index = 0) {
  std::uint64_t state = parent ^ fnv1a(stream);
  splitmix64(state);
  state ^= index * 0xd1b54a32d192ed03ULL;
  return splitmix64(state);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

}  // namespace sinrperc
