#include <gtest/gtest.h>

#include "cnselmer/graphs.hpp"

using namespace cnselmer;

namespace {

const SieveCache& sieve() {
  static const SieveCache c = build_sieve(100000);
  return c;
}

FactoredInteger F(std::uint64_t n) { return *factor(n, sieve()); }

// Legendre symbol by Euler's criterion, independent of jacobi().
int legendre(std::int64_t a, std::int64_t p) {
  std::int64_t r = 1, b = ((a % p) + p) % p, e = (p - 1) / 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r == 1 ? 1 : r == 0 ? 0 : -1;
}

using Edges = std::vector<std::pair<VertexLabel, VertexLabel>>;

}  // namespace

TEST(BuildG, Examples) {
  EXPECT_EQ(build_G(F(15)).edges(), (Edges{{3, 5}, {5, 3}}));
  EXPECT_EQ(build_G(F(21)).edges(), (Edges{{3, 7}}));
  EXPECT_TRUE(build_G(F(219)).edges().empty());
  EXPECT_EQ(build_G(F(7)).vertices, (std::vector<VertexLabel>{7}));
}

TEST(BuildG, Errors) {
  EXPECT_THROW(build_G(F(10)), DomainError);
  EXPECT_THROW(build_G_neg(F(6)), DomainError);
  EXPECT_THROW(build_G_prime(F(14)), DomainError);
}

TEST(BuildGNeg, Examples) {
  const auto g3 = build_G_neg(F(3));
  EXPECT_EQ(g3.vertices, (std::vector<VertexLabel>{-1, 3}));
  EXPECT_EQ(g3.edges(), (Edges{{-1, 3}}));
  // 3 = 3 mod 4 loses its out-edge 3 -> 7; -1 -> 3 only.
  EXPECT_EQ(build_G_neg(F(21)).edges(), (Edges{{-1, 3}}));
  EXPECT_EQ(build_G_neg(F(17)).edges(), Edges{});
}

TEST(BuildGPrime, Examples) {
  const auto g5 = build_G_prime(F(5));
  EXPECT_EQ(g5.vertices, (std::vector<VertexLabel>{5, 2}));
  EXPECT_EQ(g5.edges(), (Edges{{5, 2}}));
  EXPECT_EQ(laplace(g5), BitMatrix::from_rows({{1, 1}, {0, 0}}));
  EXPECT_EQ(build_G_prime(F(13)).edges(), (Edges{{13, 2}}));
  EXPECT_TRUE(build_G_prime(F(17)).edges().empty());
  const auto lone = build_G_prime(FactoredInteger::from_primes({}));
  EXPECT_EQ(lone.vertices, (std::vector<VertexLabel>{2}));
  EXPECT_EQ(even_partition_count(lone), 2u);
}

TEST(Laplace, Examples) {
  EXPECT_EQ(laplace(build_G(F(15))), BitMatrix::from_rows({{1, 1}, {1, 1}}));
  EXPECT_EQ(laplace(build_G(F(7))), BitMatrix::zero(1, 1));
}

TEST(EvenPartitions, Examples) {
  EXPECT_EQ(even_partition_count(build_G(F(7))), 2u);
  EXPECT_EQ(even_partition_count(build_G(F(15))), 2u);
  EXPECT_EQ(even_partition_count_bruteforce(build_G(F(15))), 2u);
  EXPECT_EQ(even_partition_count(build_G(F(21))), even_partition_count_bruteforce(build_G(F(21))));
  EXPECT_TRUE(is_odd_graph(build_G(F(7))));
  EXPECT_TRUE(is_odd_graph(build_G(F(15))));
  EXPECT_FALSE(is_odd_graph(build_G(F(219))));
  // 3*5*7*11*13 is squarefree with five primes; edgeless variants checked below.
  for (std::size_t k = 1; k <= 6; ++k) {
    PrimeGraph g;
    g.vertices.assign(k, 0);
    g.adjacency = BitMatrix(k, k);
    EXPECT_EQ(even_partition_count(g), std::uint64_t{1} << k);
    EXPECT_EQ(even_partition_count_bruteforce(g), std::uint64_t{1} << k);
  }
}

TEST(EvenPartitions, BruteForceLimit) {
  PrimeGraph g;
  g.vertices.assign(25, 0);
  g.adjacency = BitMatrix(25, 25);
  EXPECT_THROW(even_partition_count_bruteforce(g), UsageError);
}

// Edges re-derived from the definitions with Euler's criterion.
TEST(Graphs, EdgesMatchDefinitions) {
  for (std::uint64_t n = 3; n <= 20000; n += 2) {
    auto f = factor(n, sieve());
    if (!f) continue;
    const auto& p = f->factors;
    Edges g, gneg, gprime;
    for (auto a : p)
      for (auto b : p)
        if (a != b && legendre(a, b) == -1) g.emplace_back(a, b);
    for (auto b : p)
      if (b % 8 == 3 || b % 8 == 5) gneg.emplace_back(-1, b);
    for (auto a : p)
      for (auto b : p)
        if (a != b && a % 4 == 1 && legendre(a, b) == -1) gneg.emplace_back(a, b), gprime.emplace_back(a, b);
    for (auto a : p)
      if (a % 8 == 3 || a % 8 == 5) gprime.emplace_back(a, 2);
    auto sorted = [](Edges e) {
      std::sort(e.begin(), e.end());
      return e;
    };
    ASSERT_EQ(sorted(build_G(*f).edges()), sorted(g)) << n;
    ASSERT_EQ(sorted(build_G_neg(*f).edges()), sorted(gneg)) << n;
    ASSERT_EQ(sorted(build_G_prime(*f).edges()), sorted(gprime)) << n;
  }
}

TEST(Graphs, OracleAgreementAndBounds) {
  for (std::uint64_t n = 3; n <= 30000; n += 2) {
    auto f = factor(n, sieve());
    if (!f) continue;
    for (const auto& g : {build_G(*f), build_G_neg(*f), build_G_prime(*f)}) {
      const auto fast = even_partition_count(g);
      ASSERT_EQ(fast, even_partition_count_bruteforce(g)) << n << " " << to_string(g.kind);
      ASSERT_GE(fast, 2u);
      ASSERT_LE(rank(laplace(g)), g.size() - 1);
    }
  }
}

TEST(Graphs, SymmetricWhenAll1Mod4) {
  for (std::uint64_t n = 5; n <= 100000; n += 4) {
    auto f = factor(n, sieve());
    if (!f || !std::all_of(f->factors.begin(), f->factors.end(), [](auto p) { return p % 4 == 1; })) continue;
    ASSERT_TRUE(build_G(*f).adjacency.is_symmetric()) << n;
  }
}

TEST(Graphs, MinusOneIsolatedDoubles) {
  int checked = 0;
  for (std::uint64_t n = 17; n <= 100000; n += 8) {
    auto f = factor(n, sieve());
    if (!f || !std::all_of(f->factors.begin(), f->factors.end(), [](auto p) { return p % 8 == 1; })) continue;
    ASSERT_EQ(even_partition_count(build_G_neg(*f)), 2 * even_partition_count(build_G(*f))) << n;
    ++checked;
  }
  EXPECT_GT(checked, 100);
}
