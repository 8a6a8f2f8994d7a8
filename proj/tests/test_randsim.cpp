#include <gtest/gtest.h>

#include <cmath>

#include "cnselmer/randsim.hpp"

using namespace cnselmer;
using constants::Rational;

namespace {

// Kernel dimension by dense elimination, independent of BitMatrix::rank.
int kernel_oracle(std::vector<std::vector<int>> a) {
  const std::size_t n = a.size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < n; ++c) {
    std::size_t piv = r;
    while (piv < n && !a[piv][c]) ++piv;
    if (piv == n) continue;
    std::swap(a[piv], a[r]);
    for (std::size_t i = 0; i < n; ++i)
      if (i != r && a[i][c])
        for (std::size_t j = 0; j < n; ++j) a[i][j] ^= a[r][j];
    ++r;
  }
  return static_cast<int>(n - r);
}

}  // namespace

TEST(Exact, SmallCases) {
  auto d1 = enumerate_rank_distribution(1);
  EXPECT_EQ(d1.counts, (std::vector<std::uint64_t>{1}));
  auto d2 = enumerate_rank_distribution(2);
  EXPECT_EQ(d2.counts, (std::vector<std::uint64_t>{1, 1}));
  auto d4 = enumerate_rank_distribution(4);
  EXPECT_EQ(d4.counts[0], 28u);
  EXPECT_EQ(d4.total, 64u);
  EXPECT_THROW(enumerate_rank_distribution(0), UsageError);
  EXPECT_THROW(enumerate_rank_distribution(7), UsageError);
}

TEST(Exact, MatchesFormulaAndOracle) {
  for (int k = 1; k <= 6; ++k) {
    const auto d = enumerate_rank_distribution(k);
    // Independent enumeration of labeled graphs via adjacency lists.
    std::vector<std::uint64_t> oracle(k, 0);
    const int pairs = k * (k - 1) / 2;
    for (std::uint64_t mask = 0; mask < (1ULL << pairs); ++mask) {
      std::vector<std::vector<int>> lap(k, std::vector<int>(k, 0));
      int b = 0;
      for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j, ++b)
          if ((mask >> b) & 1) lap[i][j] = lap[j][i] = 1, lap[i][i] ^= 1, lap[j][j] ^= 1;
      ++oracle[kernel_oracle(lap) - 1];
    }
    ASSERT_EQ(d.counts, oracle) << k;
    for (int e = 0; e < k; ++e) ASSERT_EQ(Rational(d.counts[e], d.total), constants::q(k, e)) << k << " " << e;
  }
}

TEST(Conditioned, ExactExamples) {
  EXPECT_EQ(conditioned_fullrank_probability(2, 1).exact(), Rational(1, 2));
  EXPECT_EQ(conditioned_fullrank_probability(1, 1).exact(), 1);
  EXPECT_EQ(conditioned_fullrank_probability(3, 2).exact(), Rational(1, 2));
  EXPECT_THROW(conditioned_fullrank_probability(3, 0), UsageError);
  EXPECT_THROW(conditioned_fullrank_probability(3, 4), UsageError);
  EXPECT_THROW(conditioned_fullrank_probability(9, 1), UsageError);  // 36 upper bits
}

TEST(Conditioned, IndependentOfJForOddK) {
  for (int k = 1; k <= 7; k += 2)
    for (int j = 1; j <= k; ++j) ASSERT_EQ(conditioned_fullrank_probability(k, j).exact(), constants::q(k, 0));
}

TEST(Conditioned, EvenKDependsOnParityOfJ) {
  // k = 2, j = 2: the only admissible matrices are I and [[0,1],[1,0]].
  EXPECT_EQ(conditioned_fullrank_probability(2, 2).exact(), 1);
  for (int k = 2; k <= 7; ++k)
    for (int j = 1; j <= k; ++j)
      ASSERT_EQ(conditioned_fullrank_probability(k, j).exact(), constants::fullrank_given_rowsum(k, j))
          << k << " " << j;
}

TEST(Conditioned, MonteCarloWithinFiveSigma) {
  const std::uint64_t trials = 200000;
  for (int j : {1, 4, 9}) {
    const auto f = conditioned_fullrank_probability(9, j, trials, 17);
    const double p = static_cast<double>(constants::to_float(constants::q(9, 0)));
    const double se = std::sqrt(p * (1 - p) / trials);
    EXPECT_LT(std::fabs(static_cast<double>(f.frequency()) - p), 5 * se) << j;
  }
}

TEST(MonteCarlo, KTwoHalf) {
  const auto d = montecarlo_rank_distribution(2, 100000, 1);
  EXPECT_NEAR(static_cast<double>(d.frequency(0)), 0.5, 0.01);
}

TEST(MonteCarlo, WithinFiveSigma) {
  const std::uint64_t trials = 300000;
  for (int k : {3, 7, 12}) {
    const auto d = montecarlo_rank_distribution(k, trials, 99);
    for (int e = 0; e < k; ++e) {
      const double p = static_cast<double>(constants::to_float(constants::q(k, e)));
      const double se = std::sqrt(p * (1 - p) / trials);
      EXPECT_LE(std::fabs(static_cast<double>(d.frequency(e)) - p), 5 * se + 1e-12) << k << " " << e;
    }
  }
}

TEST(MonteCarlo, DeterministicAcrossThreads) {
  const auto base = montecarlo_rank_distribution(10, 100000, 7, 1);
  EXPECT_EQ(montecarlo_rank_distribution(10, 100000, 7, 1), base);
  for (std::size_t t : {2, 4, 8}) EXPECT_EQ(montecarlo_rank_distribution(10, 100000, 7, t), base);
  EXPECT_NE(montecarlo_rank_distribution(10, 100000, 8, 1).counts, base.counts);
  const auto c1 = conditioned_fullrank_probability(8, 3, 50000, 5, 1);
  const auto c4 = conditioned_fullrank_probability(8, 3, 50000, 5, 4);
  EXPECT_EQ(c1.full_rank, c4.full_rank);
}

TEST(MonteCarlo, Errors) {
  EXPECT_THROW(montecarlo_rank_distribution(0, 10, 1), UsageError);
  EXPECT_THROW(montecarlo_rank_distribution(65, 10, 1), UsageError);
  EXPECT_THROW(montecarlo_rank_distribution(3, 0, 1), UsageError);
}
