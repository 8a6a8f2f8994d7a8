#pragma once

// Exact probability constants for ranks of random symmetric F_2 matrices,
// Selmer-triviality densities, and the analytic main terms they multiply.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cnselmer/error.hpp"

namespace cnselmer::constants {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational pow2(int e) {
  BigInt p = 1;
  p <<= (e < 0 ? -e : e);
  return e < 0 ? Rational(BigInt(1), p) : Rational(p);
}

inline std::string to_string(const Rational& r) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline long double to_float(const Rational& r) { return r.convert_to<long double>(); }

inline std::int64_t binom2(std::int64_t n) { return n * (n - 1) / 2; }

// q(k) = prod_{j=1}^{floor(k/2)} (1 - 2^{-(2j-1)}); q(0) = 1.
inline Rational q(int k) {
  if (k < 0) throw UsageError("q(k): k must be non-negative");
  Rational r = 1;
  for (int j = 1; j <= k / 2; ++j) r *= 1 - pow2(-(2 * j - 1));
  return r;
}

// d(m, s) = prod_{i=0}^{s-1} (2^m - 2^i) / (2^s - 2^i), the number of
// s-dimensional subspaces of F_2^m.
inline Rational d(int m, int s) {
  if (m < 0 || s < 0) throw UsageError("d(m, s): arguments must be non-negative");
  Rational r = 1;
  for (int i = 0; i < s; ++i) r *= (pow2(m) - pow2(i)) / (pow2(s) - pow2(i));
  return r;
}

// Probability that a uniform undirected graph on k vertices has 2^{e+1} even
// partitions, equivalently that its Laplace matrix has kernel dimension e+1.
inline Rational q(int k, int e) {
  if (k < 1 || e < 0 || e > k - 1) {
    throw UsageError("q(k, e): need k >= 1 and 0 <= e <= k-1, got k = " + std::to_string(k) +
                     ", e = " + std::to_string(e));
  }
  return pow2(static_cast<int>(binom2(k - e) - binom2(k))) * d(k - 1, e) * q(k - e);
}

// Probability that a uniform symmetric k x k matrix over F_2 has full rank,
// as q(k+1, 0). (For unrestricted matrices it would be prod (1 - 2^-i).)
inline Rational p(int k) {
  if (k < 0) throw UsageError("p(k): k must be non-negative");
  return q(k + 1, 0);
}

// Share of S(X,3,k) with both isogeny Selmer groups trivial.
inline Rational c3(int k) {
  if (k < 1) throw UsageError("c3(k): k must be at least 1");
  return Rational(k) * pow2(-(k - 1)) * q(k);
}

// The h = 2 constant in its originally printed form, (2^{k-1}-1) q(k) / 2^{2k-2}.
inline Rational c2_printed(int k) {
  if (k < 1) throw UsageError("c2(k): k must be at least 1");
  return (pow2(k - 1) - 1) * q(k) * pow2(-(2 * k - 2));
}

// The h = 2 constant rebuilt from its proof: share (2^{k-1}-1)/2^{2k-3} of
// n = 2 p_1..p_{k-1} have all p_i = 1 mod 4 with one = 5 mod 8, and of those
// a fraction q(k-1) have odd G'(n/2). k counts the prime 2.
inline Rational c2_derived(int k) {
  if (k < 1) throw UsageError("c2_derived(k): k must be at least 1");
  return (pow2(k - 1) - 1) * q(k - 1) * pow2(-(2 * k - 3));
}

// Full-rank probability of a uniform symmetric k x k matrix whose row-sum
// vector has j >= 1 ones. Exhaustive enumeration shows it is q(k) except
// when k and j are both even, where it is q(k-1); both agree for odd k.
inline Rational fullrank_given_rowsum(int k, int j) {
  if (k < 1 || j < 1 || j > k) throw UsageError("fullrank_given_rowsum: need 1 <= j <= k");
  return k % 2 == 0 && j % 2 == 0 ? q(k - 1) : q(k);
}

inline BigInt binomial(int n, int r) {
  BigInt b = 1;
  for (int i = 1; i <= r; ++i) b = b * (n - r + i) / i;
  return b;
}

// Share of G'(m) odd among m = p_1..p_t, all p_i = 1 mod 4 with at least one
// 5 mod 8, when each p_i is independently 1 or 5 mod 8: the average of
// fullrank_given_rowsum(t, j) over j ~ Binomial(t, 1/2) conditioned on j >= 1.
inline Rational g_prime_odd_share(int t) {
  if (t < 1) throw UsageError("g_prime_odd_share: t must be at least 1");
  Rational sum = 0;
  for (int j = 1; j <= t; ++j) sum += Rational(binomial(t, j)) * fullrank_given_rowsum(t, j);
  return sum / (pow2(t) - 1);
}

// The h = 2 constant with the row-sum parity effect included: the pattern
// share of c2_derived times g_prime_odd_share(k-1). Equals c2_derived for k = 2.
inline Rational c2_parity(int k) {
  if (k < 2) throw UsageError("c2_parity(k): k must be at least 2");
  return (pow2(k - 1) - 1) * pow2(-(2 * k - 3)) * g_prime_odd_share(k - 1);
}

// Conditional share of B2 (k odd primes, all 1 mod 4) with trivial Selmer groups.
inline Rational b2_fraction(int k) {
  if (k < 1) throw UsageError("b2_fraction(k): k must be at least 1");
  return (pow2(k) - 1) * pow2(-k) * q(k);
}

// b2_fraction with the row-sum parity effect included.
inline Rational b2_parity(int k) {
  if (k < 1) throw UsageError("b2_parity(k): k must be at least 1");
  return (pow2(k) - 1) * pow2(-k) * g_prime_odd_share(k);
}

// Lower bound for the share of D1 with s^phi = 2, s^phihat = 0 and Sha[2] = (Z/2)^2.
inline Rational d1_lower(int k) {
  if (k < 1) throw UsageError("d1_lower(k): k must be at least 1");
  return q(k) / 2;
}

// Share pattern k/2^{k-1}: n = 3 mod 8 with one prime 3 mod 4, the rest 1 mod 4.
inline Rational h3_pattern_share(int k) {
  if (k < 1) throw UsageError("k must be at least 1");
  return Rational(k) * pow2(-(k - 1));
}

// lambda = prod_{j>=1} (1 + 2^{-j})^{-1}, truncated once 2^{-j} < 1e-17.
inline long double lambda() {
  long double r = 1.0L;
  for (int j = 1;; ++j) {
    const long double t = std::ldexp(1.0L, -j);
    if (t < 1e-17L) break;
    r /= 1.0L + t;
  }
  return r;
}

// d_r = lambda 2^r / prod_{j=1}^{r} (2^j - 1).
inline long double d_r(int r) {
  if (r < 0) throw UsageError("d_r: r must be non-negative");
  long double v = lambda();
  for (int j = 1; j <= r; ++j) v *= 2.0L / (std::ldexp(1.0L, j) - 1.0L);
  return v;
}

inline long double factorial(int n) {
  long double f = 1.0L;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// X (log log X)^{k-1} / ((k-1)! log X): count of n <= X with omega(n) = k.
inline long double landau_main_term(long double x, int k) {
  if (k < 1) throw UsageError("landau_main_term: k must be at least 1");
  if (x <= std::exp(1.0L)) throw UsageError("landau_main_term: X must exceed e");
  return x * std::pow(std::log(std::log(x)), k - 1) / (factorial(k - 1) * std::log(x));
}

inline int totient(int m) {
  if (m < 1) throw UsageError("totient: m must be positive");
  int result = m;
  int n = m;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

// Reduced residues 1 = r_1 < ... < r_phi(m) < m.
inline std::vector<int> reduced_residues(int m) {
  if (m < 2) throw UsageError("reduced_residues: m must be at least 2");
  std::vector<int> r;
  for (int a = 1; a < m; ++a)
    if (std::gcd(a, m) == 1) r.push_back(a);
  return r;
}

// Multinomial main term for pi_k(X; m; a_1..a_phi(m)).
inline long double pik_main_term(long double x, int m, std::span<const int> a) {
  const int phi = totient(m);
  if (static_cast<int>(a.size()) != phi) {
    throw UsageError("pik_main_term: need phi(m) = " + std::to_string(phi) + " counts");
  }
  int k = 0;
  long double denom = 1.0L;
  for (int aj : a) {
    if (aj < 0) throw UsageError("pik_main_term: negative count");
    k += aj;
    denom *= factorial(aj);
  }
  if (k < 1) throw UsageError("pik_main_term: counts must sum to at least 1");
  return factorial(k) / denom / std::pow(static_cast<long double>(phi), k) * landau_main_term(x, k);
}

using ConstantValue = std::variant<Rational, long double>;

// Name-based lookup, used by the CLI. Integer parameters only; for
// "landau" and "pik" the first parameter is X.
inline ConstantValue constant(std::string_view name, std::span<const std::int64_t> params) {
  auto need = [&](std::size_t n) {
    if (params.size() != n) {
      throw UsageError("constant '" + std::string(name) + "' takes " + std::to_string(n) + " parameter(s)");
    }
  };
  auto i = [&](std::size_t idx) { return static_cast<int>(params[idx]); };
  if (name == "q") {
    if (params.size() == 1) return q(i(0));
    need(2);
    return q(i(0), i(1));
  }
  if (name == "d") { need(2); return d(i(0), i(1)); }
  if (name == "p") { need(1); return p(i(0)); }
  if (name == "c3") { need(1); return c3(i(0)); }
  if (name == "c2" || name == "c2_printed") { need(1); return c2_printed(i(0)); }
  if (name == "c2_derived") { need(1); return c2_derived(i(0)); }
  if (name == "c2_parity") { need(1); return c2_parity(i(0)); }
  if (name == "b2_fraction") { need(1); return b2_fraction(i(0)); }
  if (name == "b2_parity") { need(1); return b2_parity(i(0)); }
  if (name == "fullrank_given_rowsum") { need(2); return fullrank_given_rowsum(i(0), i(1)); }
  if (name == "d1_lower") { need(1); return d1_lower(i(0)); }
  if (name == "lambda") { need(0); return lambda(); }
  if (name == "d_r") { need(1); return d_r(i(0)); }
  if (name == "landau") { need(2); return landau_main_term(static_cast<long double>(params[0]), i(1)); }
  if (name == "pik") {
    if (params.size() < 3) throw UsageError("constant 'pik' takes X, m, a_1..a_phi(m)");
    std::vector<int> a;
    for (std::size_t j = 2; j < params.size(); ++j) a.push_back(i(j));
    return pik_main_term(static_cast<long double>(params[0]), i(1), a);
  }
  throw UsageError("unknown constant '" + std::string(name) + "'");
}

}  // namespace cnselmer::constants
