#pragma once

#include <cstdint>
#include <random>

namespace cnselmer {

// Every random stream in the library is a std::mt19937_64. Parallel work is
// cut into fixed-size chunks and each chunk gets its own stream whose seed is
// derived from (master seed, chunk index), so results never depend on how
// chunks are scheduled onto threads.
using Rng = std::mt19937_64;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return mix64(mix64(master) + (stream + 1) * 0x9e3779b97f4a7c15ULL);
}

inline Rng make_stream(std::uint64_t master, std::uint64_t stream) {
  return Rng(derive_seed(master, stream));
}

}  // namespace cnselmer
