#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "cnselmer/f2linalg.hpp"
#include "cnselmer/rng.hpp"

using namespace cnselmer;

namespace {

// Plain elimination over vector<vector<int>>, the oracle for rank().
std::size_t rank_oracle(std::vector<std::vector<int>> a) {
  std::size_t r = 0;
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
    std::size_t piv = r;
    while (piv < a.size() && !a[piv][c]) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[piv], a[r]);
    for (std::size_t i = 0; i < a.size(); ++i)
      if (i != r && a[i][c])
        for (std::size_t j = 0; j < cols; ++j) a[i][j] ^= a[r][j];
    ++r;
  }
  return r;
}

BitMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  BitMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j, rng() & 1);
  return m;
}

std::vector<std::vector<int>> dense(const BitMatrix& m) {
  std::vector<std::vector<int>> a(m.rows(), std::vector<int>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = m.get(i, j);
  return a;
}

}  // namespace

TEST(Rank, Examples) {
  EXPECT_EQ(rank(BitMatrix::zero(3, 3)), 0u);
  for (std::size_t k = 1; k <= 130; k += 13) EXPECT_EQ(rank(BitMatrix::identity(k)), k);
  const auto ones = BitMatrix::from_rows({{1, 1}, {1, 1}});
  EXPECT_EQ(rank(ones), 1u);
  EXPECT_EQ(kernel_dimension(BitMatrix::zero(2, 2)), 2u);
  EXPECT_EQ(kernel_dimension(BitMatrix::identity(4)), 0u);
  EXPECT_EQ(kernel_dimension(ones), 1u);
  EXPECT_EQ(rank(BitMatrix(0, 0)), 0u);
}

TEST(Rank, DoesNotModifyInput) {
  const auto m = BitMatrix::from_rows({{1, 0, 1}, {1, 1, 0}, {0, 1, 1}});
  const auto copy = m;
  EXPECT_EQ(rank(m), 2u);
  EXPECT_EQ(m, copy);
}

TEST(Rank, MatchesOracleAndTranspose) {
  Rng rng(5);
  for (int t = 0; t < 300; ++t) {
    const std::size_t r = 1 + rng() % 70, c = 1 + rng() % 70;
    const auto m = random_matrix(r, c, rng);
    const auto rk = rank(m);
    ASSERT_EQ(rk, rank_oracle(dense(m)));
    ASSERT_LE(rk, std::min(r, c));
    ASSERT_EQ(rank(m.transposed()), rk);
    ASSERT_EQ(rk + kernel_dimension(m), c);
  }
}

TEST(Rank, RowPermutationInvariant) {
  Rng rng(6);
  for (int t = 0; t < 100; ++t) {
    const std::size_t r = 1 + rng() % 40, c = 1 + rng() % 40;
    const auto m = random_matrix(r, c, rng);
    std::vector<std::size_t> perm(r);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    BitMatrix p(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) p.set(i, j, m.get(perm[i], j));
    ASSERT_EQ(rank(p), rank(m));
  }
}

TEST(BitMatrix, TailBitsStayClear) {
  BitMatrix m(2, 70);
  m.set(0, 69, true);
  m.flip(1, 0);
  EXPECT_TRUE(m.get(0, 69));
  EXPECT_EQ(m.row_words(0).size(), 2u);
  EXPECT_EQ(m.row_words(0)[1] >> 6, 0u);
  EXPECT_TRUE(m.row_parity(0));
  EXPECT_EQ(m.transposed().transposed(), m);
}

TEST(RandomSymmetric, KOneIsZero) {
  Rng rng(1);
  for (int t = 0; t < 10; ++t) EXPECT_EQ(random_symmetric(1, rng), BitMatrix::zero(1, 1));
  EXPECT_THROW(random_symmetric(0, rng), UsageError);
}

TEST(RandomSymmetric, RowSumsVanish) {
  Rng rng(2);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t k = 1 + t % 40;
    const auto m = random_symmetric(k, rng);
    ASSERT_TRUE(m.is_symmetric());
    for (std::size_t i = 0; i < k; ++i) ASSERT_FALSE(m.row_parity(i));
    ASSERT_LE(rank(m), k - 1);
  }
}

TEST(RandomSymmetric, KTwoOutcomes) {
  Rng rng(3);
  std::set<std::string> seen;
  for (int t = 0; t < 200; ++t) seen.insert(random_symmetric(2, rng).to_string());
  const std::set<std::string> expected = {BitMatrix::zero(2, 2).to_string(),
                                          BitMatrix::from_rows({{1, 1}, {1, 1}}).to_string()};
  EXPECT_EQ(seen, expected);
}

TEST(RandomSymmetric, OffDiagonalMean) {
  Rng rng(4);
  std::uint64_t ones = 0, total = 0;
  for (int t = 0; t < 100000; ++t) {
    const auto m = random_symmetric(6, rng);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = i + 1; j < 6; ++j) {
        ones += m.get(i, j);
        ++total;
      }
  }
  EXPECT_NEAR(static_cast<double>(ones) / total, 0.5, 0.01);
}

TEST(RandomSymmetric, DeterministicForSeed) {
  Rng a = make_stream(9, 3), b = make_stream(9, 3), c = make_stream(9, 4);
  bool differs = false;
  for (int t = 0; t < 20; ++t) {
    const auto x = random_symmetric(12, a);
    ASSERT_EQ(x, random_symmetric(12, b));
    differs |= !(x == random_symmetric(12, c));
  }
  EXPECT_TRUE(differs);
}

TEST(RandomSymmetricRowsum, Forced) {
  Rng rng(7);
  EXPECT_EQ(random_symmetric_with_rowsum(1, 1, rng), BitMatrix::from_rows({{1}}));
  EXPECT_THROW(random_symmetric_with_rowsum(3, 0, rng), UsageError);
  EXPECT_THROW(random_symmetric_with_rowsum(3, 4, rng), UsageError);
}

TEST(RandomSymmetricRowsum, RowSumVector) {
  Rng rng(8);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t k = 1 + t % 20, j = 1 + t % k;
    const auto m = random_symmetric_with_rowsum(k, j, rng);
    ASSERT_TRUE(m.is_symmetric());
    for (std::size_t i = 0; i < k; ++i) ASSERT_EQ(m.row_parity(i), i + j >= k);
  }
}

TEST(SymmetricFromMask, EnumeratesDistinctMatrices) {
  // k = 3, j = 1: all 8 upper patterns give distinct matrices with the
  // prescribed row sums.
  std::set<std::string> seen;
  for (std::uint64_t mask = 0; mask < 8; ++mask) {
    const auto m = symmetric_from_mask(3, mask, 1);
    EXPECT_FALSE(m.row_parity(0));
    EXPECT_FALSE(m.row_parity(1));
    EXPECT_TRUE(m.row_parity(2));
    seen.insert(m.to_string());
  }
  EXPECT_EQ(seen.size(), 8u);
  // Mask bit order: bit 0 is entry (0,1), bit 1 is (0,2), bit 2 is (1,2).
  EXPECT_TRUE(symmetric_from_mask(3, 0b100).get(1, 2));
  EXPECT_TRUE(symmetric_from_mask(3, 0b010).get(0, 2));
}
