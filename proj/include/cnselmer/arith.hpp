#pragma once

// Prime sieving, squarefree factorization and residue symbols.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <new>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cnselmer/error.hpp"

namespace cnselmer {

inline constexpr std::uint64_t kMaxSieveLimit = std::uint64_t{1} << 32;

// Largest number of distinct primes of any n <= 2^32 is 9; leave headroom.
inline constexpr int kMaxDistinctPrimes = 12;

// Smallest-prime-factor table for 0..limit. spf(0) and spf(1) are 0.
class SieveCache {
 public:
  SieveCache() = default;

  std::uint64_t limit() const { return limit_; }

  std::uint32_t spf(std::uint64_t m) const { return spf_[m]; }

  bool is_prime(std::uint64_t m) const {
    return m >= 2 && m <= limit_ && spf_[m] == m;
  }

  bool contains(std::uint64_t m) const { return m >= 2 && m <= limit_; }

  // Entries for 2..limit, in order.
  std::span<const std::uint32_t> entries() const {
    return std::span<const std::uint32_t>(spf_).subspan(2);
  }

 private:
  friend SieveCache build_sieve(std::uint64_t limit);
  friend SieveCache load_sieve(const std::string& path);

  std::uint64_t limit_ = 0;
  std::vector<std::uint32_t> spf_;
};

inline SieveCache build_sieve(std::uint64_t limit) {
  if (limit < 2) throw UsageError("sieve limit must be at least 2");
  if (limit > kMaxSieveLimit) throw UsageError("sieve limit exceeds 2^32");
  SieveCache cache;
  try {
    cache.spf_.assign(limit + 1, 0);
  } catch (const std::bad_alloc&) {
    throw ResourceError("cannot allocate sieve of " + std::to_string(limit) +
                        " entries");
  }
  cache.limit_ = limit;
  auto& spf = cache.spf_;
  for (std::uint64_t i = 2; i * i <= limit; ++i) {
    if (spf[i] != 0) continue;
    for (std::uint64_t j = i * i; j <= limit; j += i) {
      if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
    }
  }
  for (std::uint64_t i = 2; i <= limit; ++i) {
    // i == 2^32 is even and was marked above, so the cast never truncates.
    if (spf[i] == 0) spf[i] = static_cast<std::uint32_t>(i);
  }
  return cache;
}

// Cache file: "SFSV1", u64 LE limit, then limit-1 u32 LE entries for 2..limit.
inline constexpr char kSieveMagic[5] = {'S', 'F', 'S', 'V', '1'};

namespace detail {

inline void put_le(std::ostream& out, std::uint64_t v, int bytes) {
  char buf[8];
  for (int i = 0; i < bytes; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf, bytes);
}

inline std::uint64_t get_le(const unsigned char* p, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= std::uint64_t{p[i]} << (8 * i);
  return v;
}

}  // namespace detail

inline void save_sieve(const SieveCache& cache, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ResourceError("cannot open sieve cache for writing: " + path);
  out.write(kSieveMagic, sizeof kSieveMagic);
  detail::put_le(out, cache.limit(), 8);
  std::vector<char> buf;
  constexpr std::size_t kBlock = 1 << 16;
  auto entries = cache.entries();
  for (std::size_t off = 0; off < entries.size(); off += kBlock) {
    std::size_t len = std::min(kBlock, entries.size() - off);
    buf.resize(len * 4);
    for (std::size_t i = 0; i < len; ++i) {
      std::uint32_t v = entries[off + i];
      for (int b = 0; b < 4; ++b) buf[4 * i + b] = static_cast<char>((v >> (8 * b)) & 0xff);
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
  if (!out) throw ResourceError("failed writing sieve cache: " + path);
}

inline SieveCache load_sieve(const std::string& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw ResourceError("cannot open sieve cache: " + path);
  const auto size = static_cast<std::uint64_t>(in.tellg());
  in.seekg(0);
  unsigned char header[13];
  if (size < sizeof header || !in.read(reinterpret_cast<char*>(header), sizeof header)) {
    throw ResourceError("sieve cache truncated: " + path);
  }
  if (std::memcmp(header, kSieveMagic, sizeof kSieveMagic) != 0) {
    throw ResourceError("bad sieve cache magic: " + path);
  }
  const std::uint64_t limit = detail::get_le(header + 5, 8);
  if (limit < 2 || limit > kMaxSieveLimit) {
    throw ResourceError("sieve cache limit out of range: " + path);
  }
  if (size != sizeof header + 4 * (limit - 1)) {
    throw ResourceError("sieve cache length does not match its limit: " + path);
  }
  SieveCache cache;
  try {
    cache.spf_.assign(limit + 1, 0);
  } catch (const std::bad_alloc&) {
    throw ResourceError("cannot allocate sieve cache from " + path);
  }
  cache.limit_ = limit;
  std::vector<unsigned char> buf;
  constexpr std::uint64_t kBlock = 1 << 16;
  for (std::uint64_t m = 2; m <= limit; m += kBlock) {
    std::uint64_t len = std::min(kBlock, limit - m + 1);
    buf.resize(len * 4);
    if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()))) {
      throw ResourceError("sieve cache truncated: " + path);
    }
    for (std::uint64_t i = 0; i < len; ++i) {
      cache.spf_[m + i] = static_cast<std::uint32_t>(detail::get_le(buf.data() + 4 * i, 4));
    }
  }
  return cache;
}

// A squarefree positive integer together with its prime factorization.
struct FactoredInteger {
  std::uint64_t value = 1;
  std::vector<std::uint32_t> factors;       // strictly increasing primes
  std::vector<std::uint8_t> residues_mod8;  // factors[i] % 8
  std::uint8_t residue_mod8 = 1;
  bool is_even = false;

  int omega() const { return static_cast<int>(factors.size()); }

  // Prime factors other than 2.
  std::span<const std::uint32_t> odd_factors() const {
    std::span<const std::uint32_t> all(factors);
    return is_even ? all.subspan(1) : all;
  }

  std::uint64_t odd_part() const { return is_even ? value / 2 : value; }

  // Builds from a list of distinct primes (any order). Primality is the
  // caller's responsibility; repeated primes are rejected.
  static FactoredInteger from_primes(std::vector<std::uint32_t> primes);

  bool operator==(const FactoredInteger&) const = default;
};

inline FactoredInteger FactoredInteger::from_primes(std::vector<std::uint32_t> primes) {
  std::sort(primes.begin(), primes.end());
  FactoredInteger f;
  f.value = 1;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (primes[i] < 2) throw UsageError("factor below 2");
    if (i > 0 && primes[i] == primes[i - 1]) throw UsageError("repeated prime factor");
    f.value *= primes[i];
    f.residues_mod8.push_back(static_cast<std::uint8_t>(primes[i] % 8));
  }
  f.factors = std::move(primes);
  f.residue_mod8 = static_cast<std::uint8_t>(f.value % 8);
  f.is_even = !f.factors.empty() && f.factors.front() == 2;
  return f;
}

namespace detail {

// Distinct prime factors of n in increasing order, or -1 when n is not
// squarefree. n must be within the cache.
inline int squarefree_factors(std::uint64_t n, const SieveCache& cache,
                              std::array<std::uint32_t, kMaxDistinctPrimes>& out) {
  int count = 0;
  std::uint32_t last = 0;
  while (n > 1) {
    const std::uint32_t p = cache.spf(n);
    if (p == last) return -1;
    out[count++] = p;
    last = p;
    n /= p;
  }
  return count;
}

}  // namespace detail

// nullopt is the not-squarefree marker.
inline std::optional<FactoredInteger> factor(std::uint64_t n, const SieveCache& cache) {
  if (!cache.contains(n)) {
    throw UsageError("n = " + std::to_string(n) + " outside sieve range [2, " +
                     std::to_string(cache.limit()) + "]");
  }
  std::array<std::uint32_t, kMaxDistinctPrimes> primes;
  const int count = detail::squarefree_factors(n, cache, primes);
  if (count < 0) return std::nullopt;
  FactoredInteger f;
  f.value = n;
  f.factors.assign(primes.begin(), primes.begin() + count);
  for (auto p : f.factors) f.residues_mod8.push_back(static_cast<std::uint8_t>(p % 8));
  f.residue_mod8 = static_cast<std::uint8_t>(n % 8);
  f.is_even = (n % 2 == 0);
  return f;
}

// Jacobi symbol (a/m) for odd m >= 1, via binary reciprocity.
inline int jacobi(std::int64_t a, std::int64_t m) {
  if (m <= 0 || m % 2 == 0) {
    throw DomainError("jacobi: modulus must be odd and positive, got " + std::to_string(m));
  }
  std::uint64_t mod = static_cast<std::uint64_t>(m);
  std::int64_t r = a % m;
  if (r < 0) r += m;
  std::uint64_t x = static_cast<std::uint64_t>(r);
  int t = 1;
  while (x != 0) {
    while (x % 2 == 0) {
      x /= 2;
      const auto m8 = mod % 8;
      if (m8 == 3 || m8 == 5) t = -t;
    }
    std::swap(x, mod);
    if (x % 4 == 3 && mod % 4 == 3) t = -t;
    x %= mod;
  }
  return mod == 1 ? t : 0;
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  unsigned __int128 result = 1 % mod;
  unsigned __int128 b = base % mod;
  while (exp > 0) {
    if (exp & 1) result = result * b % mod;
    b = b * b % mod;
    exp >>= 1;
  }
  return static_cast<std::uint64_t>(result);
}

// (2/p)_4 as the power residue 2^((p-1)/4) mod p, for primes p = 1 mod 8.
inline int quartic_char_2(std::uint64_t p) {
  if (p % 8 != 1) {
    throw DomainError("quartic character of 2 needs p = 1 mod 8, got " + std::to_string(p));
  }
  const std::uint64_t r = powmod(2, (p - 1) / 4, p);
  if (r == 1) return 1;
  if (r == p - 1) return -1;
  throw DomainError("2^((p-1)/4) is not +-1 mod " + std::to_string(p) + "; p is not prime");
}

inline int delta_p(std::uint64_t p) {
  const int chi = quartic_char_2(p);
  if (p % 16 == 1) return chi == -1 ? 1 : 0;
  return chi == 1 ? 1 : 0;  // p = 9 mod 16
}

inline int delta_n(const FactoredInteger& n) {
  int sum = 0;
  for (auto p : n.factors) {
    if (p % 8 != 1) {
      throw DomainError("delta(n) needs every prime factor = 1 mod 8; " + std::to_string(p) +
                        " divides " + std::to_string(n.value));
    }
    sum ^= delta_p(p);
  }
  return sum;
}

}  // namespace cnselmer
