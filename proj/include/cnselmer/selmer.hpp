#pragma once

// Isogeny Selmer group sizes of E_n: y^2 = x^3 - n^2 x read off the symbol
// graphs, plus classical family membership and the BSD classes B3, B2, D1.
//
// Size conventions: |S^phi| = 2^{s_phi}, |S^phihat| = 2^{2 + s_phihat}, and
// r(n) <= s_phi + s_phihat.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cnselmer/arith.hpp"
#include "cnselmer/graphs.hpp"

namespace cnselmer {

// Which criterion produced a profile.
//   ODD_TRIVIALITY   n = +-3 mod 8: triviality decided by G(n)
//   EVEN_TRIVIALITY  2 || n: triviality decided by G'(n/2)
//   SIZES_5MOD8      n = 5 mod 8, all p = 1 mod 4: |S^phi| = e(G), |S^phihat| = 2e(G)
//   SIZES_1MOD8      all p = 1 mod 8: |S^phi| = 2e(G), |S^phihat| = e(G(-n))
enum class Coverage { ODD_TRIVIALITY, EVEN_TRIVIALITY, SIZES_5MOD8, SIZES_1MOD8, NOT_COVERED };

inline const char* to_string(Coverage c) {
  switch (c) {
    case Coverage::ODD_TRIVIALITY: return "ODD_TRIVIALITY";
    case Coverage::EVEN_TRIVIALITY: return "EVEN_TRIVIALITY";
    case Coverage::SIZES_5MOD8: return "SIZES_5MOD8";
    case Coverage::SIZES_1MOD8: return "SIZES_1MOD8";
    case Coverage::NOT_COVERED: return "NOT_COVERED";
  }
  return "?";
}

struct SelmerProfile {
  FactoredInteger n;
  Coverage coverage = Coverage::NOT_COVERED;
  std::optional<int> phi_size_log2;
  std::optional<int> phihat_size_log2;
  std::optional<int> s_phi;
  std::optional<int> s_phihat;
  std::optional<int> rank_upper_bound;
  // s_phi = s_phihat = 0, when the covering criterion decides it.
  std::optional<bool> selmer_trivial;
  bool non_congruent_certified = false;
};

// Outcome of the odd-n triviality criterion.
struct OddTrivialityCheck {
  bool in_scope = false;        // n = +-3 mod 8, where the criterion is an iff
  bool hypothesis = false;      // n = 3 mod 8, exactly one prime 3 mod 4, others 1 mod 4
  bool graph_odd = false;
  std::optional<bool> trivial;  // absent outside scope: inconclusive
};

// Outcome of the 2 || n triviality criterion.
struct EvenTrivialityCheck {
  bool all_odd_primes_1mod4 = false;
  bool has_prime_5mod8 = false;
  bool graph_odd = false;  // G'(n/2)
  bool trivial = false;
};

enum class Family { HEEGNER, MONSKY, LAGRANGE, ISKRA, NONE };
enum class Verdict { CONGRUENT, NON_CONGRUENT, UNKNOWN };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::HEEGNER: return "HEEGNER";
    case Family::MONSKY: return "MONSKY";
    case Family::LAGRANGE: return "LAGRANGE";
    case Family::ISKRA: return "ISKRA";
    case Family::NONE: return "NONE";
  }
  return "?";
}

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::CONGRUENT: return "CONGRUENT";
    case Verdict::NON_CONGRUENT: return "NON_CONGRUENT";
    case Verdict::UNKNOWN: return "UNKNOWN";
  }
  return "?";
}

struct FamilyTag {
  Family family = Family::NONE;
  Verdict verdict = Verdict::UNKNOWN;
  bool operator==(const FamilyTag&) const = default;
};

enum class BsdSet { B3, B2, D1, NONE };

inline const char* to_string(BsdSet s) {
  switch (s) {
    case BsdSet::B3: return "B3";
    case BsdSet::B2: return "B2";
    case BsdSet::D1: return "D1";
    case BsdSet::NONE: return "NONE";
  }
  return "?";
}

struct BsdStatus {
  BsdSet set = BsdSet::NONE;
  bool verified = false;
  // D1 only.
  std::optional<bool> graph_odd;
  std::optional<int> delta;
  // verified implies r(n) = 0 in every class: B3/B2 through trivial Selmer
  // groups, D1 through s_phi = 2, s_phihat = 0 and Sha[2] = (Z/2)^2.
  bool rank_zero() const { return verified; }
};

namespace detail {

inline bool all_factors_mod(const FactoredInteger& n, unsigned m, unsigned r) {
  return std::all_of(n.factors.begin(), n.factors.end(), [&](std::uint32_t p) { return p % m == r; });
}

inline std::size_t count_factors_mod(const FactoredInteger& n, unsigned m, unsigned r) {
  return static_cast<std::size_t>(
      std::count_if(n.factors.begin(), n.factors.end(), [&](std::uint32_t p) { return p % m == r; }));
}

inline FactoredInteger odd_part(const FactoredInteger& n) {
  if (!n.is_even) return n;
  std::vector<std::uint32_t> odd(n.factors.begin() + 1, n.factors.end());
  return FactoredInteger::from_primes(std::move(odd));
}

inline void fill_sizes(SelmerProfile& prof, int phi_log2, int phihat_log2) {
  prof.phi_size_log2 = phi_log2;
  prof.phihat_size_log2 = phihat_log2;
  prof.s_phi = phi_log2;
  prof.s_phihat = phihat_log2 - 2;
  prof.rank_upper_bound = *prof.s_phi + *prof.s_phihat;
  prof.selmer_trivial = *prof.rank_upper_bound == 0;
  prof.non_congruent_certified = *prof.rank_upper_bound == 0;
}

}  // namespace detail

inline OddTrivialityCheck selmer_trivial_3mod8(const FactoredInteger& n) {
  if (n.is_even) throw DomainError("selmer_trivial_3mod8: n must be odd, got " + std::to_string(n.value));
  if (n.factors.empty()) throw DomainError("selmer_trivial_3mod8: n must be at least 3");
  OddTrivialityCheck c;
  c.in_scope = n.residue_mod8 == 3 || n.residue_mod8 == 5;
  c.hypothesis = n.residue_mod8 == 3 && detail::count_factors_mod(n, 4, 3) == 1;
  c.graph_odd = is_odd_graph(build_G(n));
  if (c.in_scope) c.trivial = c.hypothesis && c.graph_odd;
  return c;
}

inline EvenTrivialityCheck selmer_trivial_2mod8(const FactoredInteger& n) {
  if (n.value % 4 != 2) throw DomainError("selmer_trivial_2mod8: need n = 2 mod 4, got " + std::to_string(n.value));
  const FactoredInteger m = detail::odd_part(n);
  EvenTrivialityCheck c;
  c.all_odd_primes_1mod4 = detail::all_factors_mod(m, 4, 1);
  c.has_prime_5mod8 = detail::count_factors_mod(m, 8, 5) > 0;
  c.graph_odd = is_odd_graph(build_G_prime(m));
  c.trivial = c.all_odd_primes_1mod4 && c.has_prime_5mod8 && c.graph_odd;
  return c;
}

inline SelmerProfile selmer_sizes_5mod8(const FactoredInteger& n) {
  SelmerProfile prof;
  prof.n = n;
  if (n.is_even || n.residue_mod8 != 5 || !detail::all_factors_mod(n, 4, 1)) return prof;
  const int e = even_partition_exponent(build_G(n));
  prof.coverage = Coverage::SIZES_5MOD8;
  detail::fill_sizes(prof, e, e + 1);
  return prof;
}

inline SelmerProfile selmer_sizes_1mod8(const FactoredInteger& n) {
  SelmerProfile prof;
  prof.n = n;
  if (n.is_even || n.factors.empty() || n.residue_mod8 != 1 || !detail::all_factors_mod(n, 8, 1)) return prof;
  const int e = even_partition_exponent(build_G(n));
  const int e_neg = even_partition_exponent(build_G_neg(n));
  prof.coverage = Coverage::SIZES_1MOD8;
  detail::fill_sizes(prof, e + 1, e_neg);
  return prof;
}

namespace detail {

inline bool is_heegner(const FactoredInteger& n) {
  return n.is_even && n.omega() == 2 && n.factors[1] % 8 == 3;
}

inline bool is_monsky(const FactoredInteger& n) {
  if (!n.is_even || n.omega() != 3) return false;
  const std::uint32_t a = n.factors[1], b = n.factors[2];
  auto fits = [](std::uint32_t p, std::uint32_t q) {
    return p % 8 == 1 && (q % 8 == 3 || q % 8 == 7) && jacobi(p, q) == -1;
  };
  return fits(a, b) || fits(b, a);
}

inline bool is_lagrange(const FactoredInteger& n) {
  if (n.is_even || n.omega() != 3) return false;
  const auto& f = n.factors;
  for (int r = 0; r < 3; ++r) {
    if (f[r] % 8 != 3) continue;
    const std::uint32_t x = f[(r + 1) % 3], y = f[(r + 2) % 3];
    if (x % 8 != 1 || y % 8 != 1) continue;
    for (auto [p, q] : {std::pair{x, y}, std::pair{y, x}}) {
      if (jacobi(p, q) == -1 && jacobi(p, f[r]) == -1) return true;
    }
  }
  return false;
}

// Needs an ordering p_1..p_l with (p_j/p_k) = -1 for all j < k. For primes
// 3 mod 4 exactly one of (p/q), (q/p) is -1, so such an ordering must list
// primes by decreasing count of -1 symbols; check that candidate.
inline bool is_iskra(const FactoredInteger& n) {
  if (n.is_even || n.factors.empty() || !all_factors_mod(n, 8, 3)) return false;
  const auto& f = n.factors;
  std::vector<std::pair<int, std::uint32_t>> order;
  for (auto p : f) {
    int wins = 0;
    for (auto q : f)
      if (p != q && jacobi(p, q) == -1) ++wins;
    order.emplace_back(-wins, p);
  }
  std::sort(order.begin(), order.end());
  for (std::size_t j = 0; j < order.size(); ++j)
    for (std::size_t k = j + 1; k < order.size(); ++k)
      if (jacobi(order[j].second, order[k].second) != -1) return false;
  return true;
}

}  // namespace detail

// First match in the order Heegner, Monsky, Lagrange, Iskra.
inline FamilyTag classify_family(const FactoredInteger& n) {
  if (detail::is_heegner(n)) return {Family::HEEGNER, Verdict::CONGRUENT};
  if (detail::is_monsky(n)) return {Family::MONSKY, Verdict::CONGRUENT};
  if (detail::is_lagrange(n)) return {Family::LAGRANGE, Verdict::NON_CONGRUENT};
  if (detail::is_iskra(n)) return {Family::ISKRA, Verdict::NON_CONGRUENT};
  return {};
}

inline bool in_b3(const FactoredInteger& n) {
  return !n.is_even && n.residue_mod8 == 3 && detail::count_factors_mod(n, 8, 3) == 1 &&
         detail::count_factors_mod(n, 8, 1) + 1 == n.factors.size();
}

inline bool in_b2(const FactoredInteger& n) {
  return n.is_even && n.residue_mod8 == 2 && n.omega() >= 2 && detail::all_factors_mod(detail::odd_part(n), 4, 1);
}

inline bool in_d1(const FactoredInteger& n) {
  return !n.is_even && !n.factors.empty() && detail::all_factors_mod(n, 8, 1);
}

// Sufficient direction only for D1: verified means G(n) odd and delta(n) = 1.
inline BsdStatus bsd_status(const FactoredInteger& n) {
  BsdStatus s;
  if (in_b3(n)) {
    s.set = BsdSet::B3;
    s.verified = selmer_trivial_3mod8(n).trivial.value_or(false);
  } else if (in_b2(n)) {
    s.set = BsdSet::B2;
    s.verified = selmer_trivial_2mod8(n).trivial;
  } else if (in_d1(n)) {
    s.set = BsdSet::D1;
    s.graph_odd = is_odd_graph(build_G(n));
    s.delta = delta_n(n);
    s.verified = *s.graph_odd && *s.delta == 1;
  }
  return s;
}

// Dispatches on n mod 8 and factor residues. Fields no criterion covers stay empty.
inline SelmerProfile selmer_profile(const FactoredInteger& n) {
  SelmerProfile prof;
  prof.n = n;
  if (n.is_even) {
    prof.coverage = Coverage::EVEN_TRIVIALITY;
    const bool trivial = selmer_trivial_2mod8(n).trivial;
    if (trivial) {
      detail::fill_sizes(prof, 0, 2);
    } else {
      prof.selmer_trivial = false;
    }
    return prof;
  }
  if (n.factors.empty()) return prof;
  const auto r = n.residue_mod8;
  if (r == 5 && detail::all_factors_mod(n, 4, 1)) return selmer_sizes_5mod8(n);
  if (r == 3 || r == 5) {
    prof.coverage = Coverage::ODD_TRIVIALITY;
    if (selmer_trivial_3mod8(n).trivial.value_or(false)) {
      detail::fill_sizes(prof, 0, 2);
    } else {
      prof.selmer_trivial = false;
    }
    return prof;
  }
  if (r == 1 && detail::all_factors_mod(n, 8, 1)) return selmer_sizes_1mod8(n);
  return prof;
}

struct Analysis {
  std::uint64_t value = 0;
  bool squarefree = false;
  // Remaining fields are meaningful only when squarefree.
  SelmerProfile profile;
  FamilyTag family;
  BsdStatus bsd;
  std::vector<PrimeGraph> graphs;
};

inline Analysis analyze(const FactoredInteger& n) {
  Analysis a;
  a.value = n.value;
  a.squarefree = true;
  a.profile = selmer_profile(n);
  a.family = classify_family(n);
  a.bsd = bsd_status(n);
  if (n.is_even) {
    a.graphs.push_back(build_G_prime(detail::odd_part(n)));
  } else if (!n.factors.empty()) {
    a.graphs.push_back(build_G(n));
    a.graphs.push_back(build_G_neg(n));
  }
  return a;
}

inline Analysis analyze(std::uint64_t n, const SieveCache& cache) {
  auto f = factor(n, cache);
  if (!f) {
    Analysis a;
    a.value = n;
    a.squarefree = false;
    return a;
  }
  return analyze(*f);
}

}  // namespace cnselmer
