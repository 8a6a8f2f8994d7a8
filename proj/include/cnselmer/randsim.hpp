#pragma once

// Rank distributions of Laplace matrices of uniform random undirected graphs,
// by exhaustive enumeration and by Monte Carlo.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cnselmer/constants.hpp"
#include "cnselmer/f2linalg.hpp"
#include "cnselmer/parallel.hpp"
#include "cnselmer/rng.hpp"

namespace cnselmer {

enum class SimMode { EXACT, MONTE_CARLO };

inline const char* to_string(SimMode m) { return m == SimMode::EXACT ? "EXACT" : "MONTE_CARLO"; }

// counts[e] = number of graphs with 2^{e+1} even partitions, e = 0..k-1.
struct RankDistribution {
  int k = 0;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;
  SimMode mode = SimMode::EXACT;
  std::optional<std::uint64_t> seed;

  long double frequency(int e) const {
    return total == 0 ? 0.0L : static_cast<long double>(counts[e]) / static_cast<long double>(total);
  }

  bool operator==(const RankDistribution&) const = default;
};

// Monte Carlo trials are cut into chunks of this size; chunk c draws from
// make_stream(seed, c). Changing it changes every Monte Carlo result.
inline constexpr std::uint64_t kTrialChunk = 1 << 14;

inline constexpr int kMaxExactK = 6;
inline constexpr int kMaxSimK = 64;

namespace detail {

inline int exponent_of(const BitMatrix& laplacian) {
  return static_cast<int>(kernel_dimension(laplacian)) - 1;
}

}  // namespace detail

inline RankDistribution enumerate_rank_distribution(int k) {
  if (k < 1 || k > kMaxExactK) {
    throw UsageError("exact enumeration needs 1 <= k <= " + std::to_string(kMaxExactK));
  }
  RankDistribution dist;
  dist.k = k;
  dist.mode = SimMode::EXACT;
  dist.counts.assign(k, 0);
  const std::uint64_t graphs = std::uint64_t{1} << upper_entry_count(k);
  for (std::uint64_t mask = 0; mask < graphs; ++mask) {
    ++dist.counts[detail::exponent_of(symmetric_from_mask(k, mask))];
  }
  dist.total = graphs;
  return dist;
}

inline RankDistribution montecarlo_rank_distribution(int k, std::uint64_t trials, std::uint64_t seed,
                                                     std::size_t threads = 1) {
  if (k < 1 || k > kMaxSimK) throw UsageError("Monte Carlo needs 1 <= k <= " + std::to_string(kMaxSimK));
  if (trials < 1) throw UsageError("trials must be at least 1");
  const std::uint64_t chunks = (trials + kTrialChunk - 1) / kTrialChunk;
  auto partial = parallel_chunks(chunks, threads, [&](std::size_t c) {
    std::vector<std::uint64_t> counts(k, 0);
    Rng rng = make_stream(seed, c);
    const std::uint64_t n = std::min(kTrialChunk, trials - c * kTrialChunk);
    for (std::uint64_t t = 0; t < n; ++t) ++counts[detail::exponent_of(random_symmetric(k, rng))];
    return counts;
  });
  RankDistribution dist;
  dist.k = k;
  dist.mode = SimMode::MONTE_CARLO;
  dist.seed = seed;
  dist.total = trials;
  dist.counts.assign(k, 0);
  for (const auto& part : partial)
    for (int e = 0; e < k; ++e) dist.counts[e] += part[e];
  return dist;
}

struct FullRankFrequency {
  int k = 0;
  int j = 0;
  std::uint64_t full_rank = 0;
  std::uint64_t total = 0;
  SimMode mode = SimMode::EXACT;

  constants::Rational exact() const { return constants::Rational(full_rank, total); }
  long double frequency() const {
    return static_cast<long double>(full_rank) / static_cast<long double>(total);
  }
};

inline constexpr std::size_t kMaxExactUpperBits = 30;

// Share of symmetric k x k matrices with row-sum vector (0..0,1..1) (j ones)
// that have full rank. trials == 0 selects exhaustive enumeration.
inline FullRankFrequency conditioned_fullrank_probability(int k, int j, std::uint64_t trials = 0,
                                                          std::uint64_t seed = 0, std::size_t threads = 1) {
  if (k < 1 || k > kMaxSimK) throw UsageError("conditioned rank needs 1 <= k <= " + std::to_string(kMaxSimK));
  if (j < 1 || j > k) {
    throw UsageError("row-sum weight j must satisfy 1 <= j <= k, got j = " + std::to_string(j));
  }
  FullRankFrequency out;
  out.k = k;
  out.j = j;
  const std::size_t kk = static_cast<std::size_t>(k);
  if (trials == 0) {
    if (upper_entry_count(kk) > kMaxExactUpperBits) {
      throw UsageError("exact conditioned rank needs C(k,2) <= " + std::to_string(kMaxExactUpperBits));
    }
    out.mode = SimMode::EXACT;
    out.total = std::uint64_t{1} << upper_entry_count(kk);
    for (std::uint64_t mask = 0; mask < out.total; ++mask) {
      if (rank(symmetric_from_mask(kk, mask, static_cast<std::size_t>(j))) == kk) ++out.full_rank;
    }
    return out;
  }
  out.mode = SimMode::MONTE_CARLO;
  out.total = trials;
  const std::uint64_t chunks = (trials + kTrialChunk - 1) / kTrialChunk;
  auto partial = parallel_chunks(chunks, threads, [&](std::size_t c) {
    Rng rng = make_stream(seed, c);
    std::uint64_t hits = 0;
    const std::uint64_t n = std::min(kTrialChunk, trials - c * kTrialChunk);
    for (std::uint64_t t = 0; t < n; ++t)
      if (rank(random_symmetric_with_rowsum(kk, static_cast<std::size_t>(j), rng)) == kk) ++hits;
    return hits;
  });
  for (auto h : partial) out.full_rank += h;
  return out;
}

}  // namespace cnselmer
