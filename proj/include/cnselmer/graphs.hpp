#pragma once

// Legendre-symbol graphs G(n), G(-n), G'(n) and their even partitions.

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cnselmer/arith.hpp"
#include "cnselmer/f2linalg.hpp"

namespace cnselmer {

enum class GraphKind { G, G_NEG, G_PRIME };

inline const char* to_string(GraphKind k) {
  switch (k) {
    case GraphKind::G: return "G";
    case GraphKind::G_NEG: return "G_NEG";
    case GraphKind::G_PRIME: return "G_PRIME";
  }
  return "?";
}

// Vertex labels are primes, or -1 for the auxiliary "-1" vertex of G(-n).
// The auxiliary "2" vertex of G'(m) is labelled 2; m is odd so it never
// collides with a prime label.
using VertexLabel = std::int64_t;
inline constexpr VertexLabel kMinusOne = -1;
inline constexpr VertexLabel kTwo = 2;

struct PrimeGraph {
  GraphKind kind = GraphKind::G;
  std::vector<VertexLabel> vertices;  // -1 first, primes ascending, 2 last
  BitMatrix adjacency;                // adjacency.get(i, j): edge vertices[i] -> vertices[j]

  std::size_t size() const { return vertices.size(); }
  bool has_edge(std::size_t from, std::size_t to) const { return adjacency.get(from, to); }

  std::vector<std::pair<VertexLabel, VertexLabel>> edges() const {
    std::vector<std::pair<VertexLabel, VertexLabel>> out;
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = 0; j < size(); ++j)
        if (has_edge(i, j)) out.emplace_back(vertices[i], vertices[j]);
    return out;
  }
};

namespace detail {

inline void require_odd(const FactoredInteger& n, const char* who, bool allow_one) {
  if (n.is_even) throw DomainError(std::string(who) + ": n must be odd, got " + std::to_string(n.value));
  if (!allow_one && n.factors.empty()) throw DomainError(std::string(who) + ": n must be at least 3");
}

// Prime-to-prime block shared by all three graphs, placed at vertex offset
// `base`. With skip_3mod4 set, primes = 3 mod 4 never act as edge sources.
inline void add_prime_edges(PrimeGraph& g, std::span<const std::uint32_t> primes, std::size_t base,
                            bool skip_3mod4) {
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (skip_3mod4 && primes[i] % 4 == 3) continue;
    for (std::size_t j = 0; j < primes.size(); ++j) {
      if (i != j && jacobi(primes[i], primes[j]) == -1) g.adjacency.set(base + i, base + j, true);
    }
  }
}

}  // namespace detail

inline PrimeGraph build_G(const FactoredInteger& n) {
  detail::require_odd(n, "build_G", false);
  PrimeGraph g;
  g.kind = GraphKind::G;
  g.vertices.assign(n.factors.begin(), n.factors.end());
  g.adjacency = BitMatrix(g.size(), g.size());
  detail::add_prime_edges(g, n.factors, 0, false);
  return g;
}

inline PrimeGraph build_G_neg(const FactoredInteger& n) {
  detail::require_odd(n, "build_G_neg", false);
  PrimeGraph g;
  g.kind = GraphKind::G_NEG;
  g.vertices.push_back(kMinusOne);
  g.vertices.insert(g.vertices.end(), n.factors.begin(), n.factors.end());
  g.adjacency = BitMatrix(g.size(), g.size());
  detail::add_prime_edges(g, n.factors, 1, true);
  for (std::size_t j = 0; j < n.factors.size(); ++j) {
    const auto r = n.factors[j] % 8;
    if (r == 3 || r == 5) g.adjacency.set(0, j + 1, true);
  }
  return g;
}

// m is the odd part; m = 1 gives the lone vertex 2.
inline PrimeGraph build_G_prime(const FactoredInteger& m) {
  detail::require_odd(m, "build_G_prime", true);
  PrimeGraph g;
  g.kind = GraphKind::G_PRIME;
  g.vertices.assign(m.factors.begin(), m.factors.end());
  g.vertices.push_back(kTwo);
  const std::size_t two = g.size() - 1;
  g.adjacency = BitMatrix(g.size(), g.size());
  detail::add_prime_edges(g, m.factors, 0, true);
  for (std::size_t j = 0; j < m.factors.size(); ++j) {
    const auto r = m.factors[j] % 8;
    if (r == 3 || r == 5) g.adjacency.set(j, two, true);
  }
  return g;
}

// diag(d_1..d_k) + A with d_i the out-degree mod 2; every row sums to 0.
inline BitMatrix laplace(const PrimeGraph& g) {
  BitMatrix l = g.adjacency;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (l.row_parity(i)) l.set(i, i, true);
  return l;
}

// log2 of the number of even partitions: |V| - rank L(G).
inline int even_partition_exponent(const PrimeGraph& g) {
  return static_cast<int>(kernel_dimension(laplace(g)));
}

inline std::uint64_t even_partition_count(const PrimeGraph& g) {
  const int e = even_partition_exponent(g);
  if (e >= 64) throw DomainError("even partition count exceeds 2^63");
  return std::uint64_t{1} << e;
}

inline constexpr std::size_t kBruteForceMaxVertices = 24;

// Counts partitions (S, T) directly from the definition: every vertex has an
// even number of out-edges into the other side. Bit v of the mask puts
// vertex v in T.
inline std::uint64_t even_partition_count_bruteforce(const PrimeGraph& g) {
  const std::size_t k = g.size();
  if (k > kBruteForceMaxVertices) {
    throw UsageError("brute-force partition count limited to " +
                     std::to_string(kBruteForceMaxVertices) + " vertices");
  }
  std::vector<std::uint32_t> out(k, 0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (g.has_edge(i, j)) out[i] |= std::uint32_t{1} << j;
  std::uint64_t count = 0;
  const std::uint32_t all = k == 32 ? ~0U : ((std::uint32_t{1} << k) - 1);
  for (std::uint32_t t = 0; t <= all; ++t) {
    bool even = true;
    for (std::size_t v = 0; v < k && even; ++v) {
      const bool in_t = (t >> v) & 1U;
      const std::uint32_t other_side = in_t ? (~t & all) : t;
      even = std::popcount(out[v] & other_side) % 2 == 0;
    }
    if (even) ++count;
    if (t == all) break;
  }
  return count;
}

inline bool is_odd_graph(const PrimeGraph& g) { return even_partition_exponent(g) == 1; }

}  // namespace cnselmer
