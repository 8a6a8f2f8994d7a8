#pragma once

// Sieve-driven counts over squarefree n <= X with a fixed number of prime
// factors, compared against the limiting proportions they should approach.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cnselmer/arith.hpp"
#include "cnselmer/constants.hpp"
#include "cnselmer/graphs.hpp"
#include "cnselmer/parallel.hpp"
#include "cnselmer/selmer.hpp"

namespace cnselmer {

enum class Statistic { SELMER_TRIVIAL, GRAPH_ODD_DISTRIBUTION, BSD_VERIFIED, PIK_COUNT, SYMBOL_PATTERN };

inline const char* to_string(Statistic s) {
  switch (s) {
    case Statistic::SELMER_TRIVIAL: return "SELMER_TRIVIAL";
    case Statistic::GRAPH_ODD_DISTRIBUTION: return "GRAPH_ODD_DISTRIBUTION";
    case Statistic::BSD_VERIFIED: return "BSD_VERIFIED";
    case Statistic::PIK_COUNT: return "PIK_COUNT";
    case Statistic::SYMBOL_PATTERN: return "SYMBOL_PATTERN";
  }
  return "?";
}

// Every odd prime factor must be congruent to one of `allowed` mod `modulus`.
struct ResidueFilter {
  int modulus = 4;
  std::vector<int> allowed;
  bool operator==(const ResidueFilter&) const = default;
};

struct CensusSpec {
  std::uint64_t limit = 0;              // X
  int k = 1;                            // omega(n), counting the prime 2 when present
  std::optional<int> class_mod8;        // h
  std::optional<ResidueFilter> factor_filter;
  Statistic statistic = Statistic::SELMER_TRIVIAL;
  std::size_t threads = 1;
  std::uint64_t seed = 0;               // echoed; censuses are deterministic
  int pik_modulus = 4;                  // PIK_COUNT
  std::vector<int> symbol_residues;     // SYMBOL_PATTERN: p_j = residues[j] mod 8
};

struct CensusReport {
  CensusSpec spec;
  std::uint64_t denominator = 0;
  std::map<std::string, std::uint64_t> buckets;
  std::map<std::string, long double> theory;
  std::map<std::string, std::string> theory_exact;
  std::map<std::string, long double> ratios;
  std::map<std::string, long double> z_scores;
  std::vector<std::string> warnings;
  std::optional<std::string> supported_constant;
  std::optional<std::string> target;  // bucket singled out by pik_census
  double runtime_seconds = 0.0;
  std::string timestamp;

  std::uint64_t count(const std::string& label) const {
    auto it = buckets.find(label);
    return it == buckets.end() ? 0 : it->second;
  }

  long double proportion(const std::string& label) const {
    return denominator == 0 ? 0.0L : static_cast<long double>(count(label)) / denominator;
  }

  // Field-wise sum of counts; derived fields are recomputed by finalize.
  void merge(const CensusReport& other) {
    denominator += other.denominator;
    for (const auto& [label, c] : other.buckets) buckets[label] += c;
  }
};

// Numbers [2, X] are cut into chunks of this many integers; chunk results are
// merged in index order.
inline constexpr std::uint64_t kCensusChunk = 1 << 16;

namespace census_detail {

inline std::string sign_label(const std::vector<int>& signs) {
  std::string s = "signs=";
  for (int v : signs) s += v > 0 ? '+' : '-';
  return s;
}

inline std::string pattern_label(const std::vector<int>& a) {
  std::string s = "a=(";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(a[i]);
  }
  return s + ")";
}

inline std::string e_label(int e) { return "e=" + std::to_string(e); }

// All compositions of k into `parts` non-negative parts, in lexicographic order.
inline void compositions(int k, int parts, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == parts - 1) {
    cur.push_back(k);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int a = k; a >= 0; --a) {
    cur.push_back(a);
    compositions(k - a, parts, cur, out);
    cur.pop_back();
  }
}

inline FactoredInteger make_factored(std::uint64_t n, const std::uint32_t* primes, int count) {
  FactoredInteger f;
  f.value = n;
  f.factors.assign(primes, primes + count);
  for (auto p : f.factors) f.residues_mod8.push_back(static_cast<std::uint8_t>(p % 8));
  f.residue_mod8 = static_cast<std::uint8_t>(n % 8);
  f.is_even = n % 2 == 0;
  return f;
}

inline void validate(const CensusSpec& spec, const SieveCache& cache) {
  if (spec.limit < 2) throw UsageError("census limit X must be at least 2");
  if (spec.limit > cache.limit()) {
    throw UsageError("census limit " + std::to_string(spec.limit) + " exceeds sieve limit " +
                     std::to_string(cache.limit()));
  }
  if (spec.k < 1) throw UsageError("census k must be at least 1");
  if (spec.threads < 1) throw UsageError("census needs at least one thread");
  if (spec.class_mod8) {
    const int h = *spec.class_mod8;
    if (h != 2 && (h < 1 || h > 7 || h % 2 == 0)) {
      throw UsageError("class mod 8 must be odd (1, 3, 5, 7) or 2, got " + std::to_string(h));
    }
  }
  if (spec.factor_filter && spec.factor_filter->modulus < 2) {
    throw UsageError("factor filter modulus must be at least 2");
  }
  if (spec.statistic == Statistic::PIK_COUNT && spec.pik_modulus < 2) {
    throw UsageError("pi_k modulus must be at least 2");
  }
  if (spec.statistic == Statistic::SYMBOL_PATTERN) {
    if (spec.k != 2 && spec.k != 3) throw UsageError("symbol census supports k = 2 or 3 only");
    if (static_cast<int>(spec.symbol_residues.size()) != spec.k) {
      throw UsageError("symbol census needs one residue mod 8 per prime");
    }
    for (int d : spec.symbol_residues)
      if (d != 1 && d != 3 && d != 5 && d != 7) throw UsageError("symbol residues must be in {1,3,5,7}");
  }
}

// Zero-filled buckets so that reports have a stable shape.
inline void seed_buckets(CensusReport& r) {
  const auto& spec = r.spec;
  switch (spec.statistic) {
    case Statistic::SELMER_TRIVIAL:
      for (const char* l : {"trivial", "not_trivial", "undetermined", "hypothesis", "hypothesis_trivial"})
        r.buckets[l] = 0;
      break;
    case Statistic::GRAPH_ODD_DISTRIBUTION:
      for (int e = 0; e < spec.k; ++e) r.buckets[e_label(e)] = 0;
      break;
    case Statistic::BSD_VERIFIED:
      for (const char* l : {"B3_member", "B3_verified", "B2_member", "B2_verified", "D1_member", "D1_verified",
                            "D1_graph_odd", "D1_delta_odd"})
        r.buckets[l] = 0;
      break;
    case Statistic::PIK_COUNT: {
      std::vector<std::vector<int>> all;
      std::vector<int> cur;
      compositions(spec.k, constants::totient(spec.pik_modulus), cur, all);
      for (const auto& a : all) r.buckets[pattern_label(a)] = 0;
      break;
    }
    case Statistic::SYMBOL_PATTERN: {
      const int pairs = spec.k * (spec.k - 1) / 2;
      for (int mask = 0; mask < (1 << pairs); ++mask) {
        std::vector<int> signs;
        for (int b = pairs - 1; b >= 0; --b) signs.push_back((mask >> b) & 1 ? -1 : 1);
        r.buckets[sign_label(signs)] = 0;
      }
      r.buckets["antisymmetric_pairs"] = 0;
      r.buckets["antisymmetry_violations"] = 0;
      break;
    }
  }
}

inline bool passes_filter(const ResidueFilter& f, const std::uint32_t* primes, int count) {
  for (int i = 0; i < count; ++i) {
    if (primes[i] == 2) continue;
    const int r = static_cast<int>(primes[i] % static_cast<std::uint32_t>(f.modulus));
    if (std::find(f.allowed.begin(), f.allowed.end(), r) == f.allowed.end()) return false;
  }
  return true;
}

// Evaluates the statistic for one admitted n. Returns false when the
// statistic's own domain rejects n (it then does not enter the denominator).
inline bool tally(CensusReport& r, std::uint64_t n, const std::uint32_t* primes, int count,
                  const std::vector<int>& residues) {
  const auto& spec = r.spec;
  switch (spec.statistic) {
    case Statistic::SELMER_TRIVIAL: {
      const FactoredInteger f = make_factored(n, primes, count);
      const SelmerProfile prof = selmer_profile(f);
      bool hypothesis = false;
      if (f.is_even) {
        const auto c = selmer_trivial_2mod8(f);
        hypothesis = c.all_odd_primes_1mod4 && c.has_prime_5mod8;
      } else if (f.residue_mod8 == 3 || f.residue_mod8 == 5) {
        hypothesis = selmer_trivial_3mod8(f).hypothesis;
      }
      const char* outcome = !prof.selmer_trivial ? "undetermined" : *prof.selmer_trivial ? "trivial" : "not_trivial";
      ++r.buckets[outcome];
      if (hypothesis) {
        ++r.buckets["hypothesis"];
        if (prof.selmer_trivial.value_or(false)) ++r.buckets["hypothesis_trivial"];
      }
      return true;
    }
    case Statistic::GRAPH_ODD_DISTRIBUTION: {
      const FactoredInteger f = make_factored(n, primes, count);
      const PrimeGraph g = f.is_even ? build_G_prime(detail::odd_part(f)) : build_G(f);
      ++r.buckets[e_label(even_partition_exponent(g) - 1)];
      return true;
    }
    case Statistic::BSD_VERIFIED: {
      const FactoredInteger f = make_factored(n, primes, count);
      const BsdStatus s = bsd_status(f);
      if (s.set != BsdSet::NONE) {
        const std::string name = to_string(s.set);
        ++r.buckets[name + "_member"];
        if (s.verified) ++r.buckets[name + "_verified"];
        if (s.set == BsdSet::D1) {
          if (*s.graph_odd) ++r.buckets["D1_graph_odd"];
          if (*s.delta == 1) ++r.buckets["D1_delta_odd"];
        }
      }
      return true;
    }
    case Statistic::PIK_COUNT: {
      std::vector<int> a(residues.size(), 0);
      const auto m = static_cast<std::uint32_t>(spec.pik_modulus);
      for (int i = 0; i < count; ++i) {
        auto it = std::find(residues.begin(), residues.end(), static_cast<int>(primes[i] % m));
        if (it == residues.end()) return false;  // p divides m
        ++a[it - residues.begin()];
      }
      ++r.buckets[pattern_label(a)];
      return true;
    }
    case Statistic::SYMBOL_PATTERN: {
      for (int i = 0; i < count; ++i)
        if (primes[i] == 2 || static_cast<int>(primes[i] % 8) != spec.symbol_residues[i]) return false;
      std::vector<int> signs;
      for (int i = 0; i < count; ++i) {
        for (int j = i + 1; j < count; ++j) {
          const int s = jacobi(primes[i], primes[j]);
          signs.push_back(s);
          if (primes[i] % 4 == 3 && primes[j] % 4 == 3) {
            ++r.buckets["antisymmetric_pairs"];
            if (jacobi(primes[j], primes[i]) != -s) ++r.buckets["antisymmetry_violations"];
          }
        }
      }
      ++r.buckets[sign_label(signs)];
      return true;
    }
  }
  return false;
}

inline CensusReport census_chunk(const CensusSpec& spec, const SieveCache& cache, std::uint64_t lo,
                                 std::uint64_t hi, const std::vector<int>& residues) {
  CensusReport r;
  r.spec = spec;
  std::array<std::uint32_t, kMaxDistinctPrimes> primes;
  for (std::uint64_t n = lo; n <= hi; ++n) {
    if (spec.class_mod8 && static_cast<int>(n % 8) != *spec.class_mod8) continue;
    const int count = detail::squarefree_factors(n, cache, primes);
    if (count != spec.k) continue;
    if (spec.factor_filter && !passes_filter(*spec.factor_filter, primes.data(), count)) continue;
    if (tally(r, n, primes.data(), count, residues)) ++r.denominator;
  }
  return r;
}

inline long double z_score(long double observed, long double expected, std::uint64_t n) {
  if (n == 0 || expected <= 0.0L || expected >= 1.0L) return NAN;
  return (observed - expected) / std::sqrt(expected * (1.0L - expected) / static_cast<long double>(n));
}

inline void put_theory(CensusReport& r, const std::string& name, const constants::Rational& v) {
  r.theory[name] = constants::to_float(v);
  r.theory_exact[name] = constants::to_string(v);
}

inline long double share(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? NAN : static_cast<long double>(num) / static_cast<long double>(den);
}

inline void finalize(CensusReport& r) {
  const auto& spec = r.spec;
  const int k = spec.k;
  if (r.denominator == 0) r.warnings.push_back("empty class: no n <= X matches the census filters");
  switch (spec.statistic) {
    case Statistic::SELMER_TRIVIAL: {
      const auto den = r.denominator;
      const auto hyp = r.count("hypothesis");
      r.ratios["trivial"] = share(r.count("trivial"), den);
      r.ratios["hypothesis"] = share(hyp, den);
      r.ratios["trivial_given_hypothesis"] = share(r.count("hypothesis_trivial"), hyp);
      if (spec.class_mod8 == 3) {
        put_theory(r, "c3", constants::c3(k));
        put_theory(r, "q", constants::q(k));
        put_theory(r, "pattern_share", constants::h3_pattern_share(k));
        r.z_scores["trivial_vs_c3"] = z_score(r.ratios["trivial"], r.theory["c3"], den);
        r.z_scores["trivial_given_hypothesis_vs_q"] =
            z_score(r.ratios["trivial_given_hypothesis"], r.theory["q"], hyp);
      } else if (spec.class_mod8 == 2) {
        put_theory(r, "c2_printed", constants::c2_printed(k));
        put_theory(r, "c2_derived", constants::c2_derived(k));
        if (k >= 2) {
          put_theory(r, "c2_parity", constants::c2_parity(k));
          put_theory(r, "q_parity", constants::g_prime_odd_share(k - 1));
        }
        put_theory(r, "q", constants::q(k - 1));
        put_theory(r, "pattern_share", (constants::pow2(k - 1) - 1) * constants::pow2(-(2 * k - 3)));
        // Ties go to the earlier name, so c2_derived wins over an equal c2_parity.
        std::optional<std::string> best;
        long double best_z = 0;
        for (const char* name : {"c2_derived", "c2_parity", "c2_printed"}) {
          if (!r.theory.count(name)) continue;
          const long double z = z_score(r.ratios["trivial"], r.theory[name], den);
          r.z_scores[std::string("trivial_vs_") + name] = z;
          if (!std::isnan(z) && (!best || std::fabs(z) < best_z)) {
            best = name;
            best_z = std::fabs(z);
          }
        }
        r.supported_constant = best;
        r.z_scores["trivial_given_hypothesis_vs_q"] =
            z_score(r.ratios["trivial_given_hypothesis"], r.theory["q"], hyp);
        if (k >= 2) {
          r.z_scores["trivial_given_hypothesis_vs_q_parity"] =
              z_score(r.ratios["trivial_given_hypothesis"], r.theory["q_parity"], hyp);
        }
      }
      break;
    }
    case Statistic::GRAPH_ODD_DISTRIBUTION:
      for (int e = 0; e < k; ++e) {
        const std::string label = e_label(e);
        const std::string name = "q(" + std::to_string(k) + "," + std::to_string(e) + ")";
        put_theory(r, name, constants::q(k, e));
        r.ratios[label] = share(r.count(label), r.denominator);
        r.z_scores[label] = z_score(r.ratios[label], r.theory[name], r.denominator);
      }
      break;
    case Statistic::BSD_VERIFIED: {
      put_theory(r, "B3_verified_share", constants::q(k));
      if (k >= 2) {
        put_theory(r, "B2_verified_share", constants::b2_fraction(k - 1));
        put_theory(r, "B2_verified_share_parity", constants::b2_parity(k - 1));
      }
      put_theory(r, "D1_verified_lower", constants::d1_lower(k));
      for (const char* set : {"B3", "B2", "D1"}) {
        const std::string s = set;
        r.ratios[s + "_member"] = share(r.count(s + "_member"), r.denominator);
        r.ratios[s + "_verified_given_member"] = share(r.count(s + "_verified"), r.count(s + "_member"));
      }
      r.ratios["D1_delta_odd_given_member"] = share(r.count("D1_delta_odd"), r.count("D1_member"));
      r.z_scores["B3_verified_given_member"] =
          z_score(r.ratios["B3_verified_given_member"], r.theory["B3_verified_share"], r.count("B3_member"));
      if (k >= 2) {
        r.z_scores["B2_verified_given_member"] =
            z_score(r.ratios["B2_verified_given_member"], r.theory["B2_verified_share"], r.count("B2_member"));
        r.z_scores["B2_verified_given_member_vs_parity"] = z_score(
            r.ratios["B2_verified_given_member"], r.theory["B2_verified_share_parity"], r.count("B2_member"));
      }
      break;
    }
    case Statistic::PIK_COUNT: {
      const auto residues = constants::reduced_residues(spec.pik_modulus);
      std::vector<std::vector<int>> all;
      std::vector<int> cur;
      compositions(k, static_cast<int>(residues.size()), cur, all);
      const bool has_main_term = static_cast<long double>(spec.limit) > std::exp(1.0L);
      for (const auto& a : all) {
        const std::string label = pattern_label(a);
        r.ratios[label] = share(r.count(label), r.denominator);
        if (has_main_term) {
          const long double main = constants::pik_main_term(static_cast<long double>(spec.limit), spec.pik_modulus, a);
          r.theory["main_term:" + label] = main;
          r.ratios["over_main_term:" + label] = static_cast<long double>(r.count(label)) / main;
        }
      }
      if (has_main_term) r.theory["landau_main_term"] = constants::landau_main_term(static_cast<long double>(spec.limit), k);
      break;
    }
    case Statistic::SYMBOL_PATTERN: {
      const int pairs = k * (k - 1) / 2;
      put_theory(r, "bucket_share", constants::pow2(-pairs));
      for (const auto& [label, c] : r.buckets) {
        if (label.rfind("signs=", 0) != 0) continue;
        r.ratios[label] = share(c, r.denominator);
        r.z_scores[label] = z_score(r.ratios[label], r.theory["bucket_share"], r.denominator);
      }
      break;
    }
  }
}

inline std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace census_detail

inline CensusReport run_census(const CensusSpec& spec, const SieveCache& cache) {
  census_detail::validate(spec, cache);
  const auto start = std::chrono::steady_clock::now();
  const std::vector<int> residues =
      spec.statistic == Statistic::PIK_COUNT ? constants::reduced_residues(spec.pik_modulus) : std::vector<int>{};
  const std::uint64_t span = spec.limit - 1;  // numbers 2..X
  const std::uint64_t chunks = (span + kCensusChunk - 1) / kCensusChunk;
  auto parts = parallel_chunks(chunks, spec.threads, [&](std::size_t c) {
    const std::uint64_t lo = 2 + c * kCensusChunk;
    const std::uint64_t hi = std::min(spec.limit, lo + kCensusChunk - 1);
    return census_detail::census_chunk(spec, cache, lo, hi, residues);
  });
  CensusReport report;
  report.spec = spec;
  census_detail::seed_buckets(report);
  for (const auto& part : parts) report.merge(part);
  census_detail::finalize(report);
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.timestamp = census_detail::utc_timestamp();
  return report;
}

// pi_k(X; m; a): squarefree n <= X whose k = sum(a) prime factors split as
// a_j primes = r_j mod m over the reduced residues r_1 < r_2 < ...
inline CensusReport pik_census(std::uint64_t x, int m, const std::vector<int>& a, const SieveCache& cache,
                               std::size_t threads = 1, std::optional<int> k = std::nullopt) {
  if (m < 2) throw UsageError("pi_k modulus must be at least 2");
  const int phi = constants::totient(m);
  if (static_cast<int>(a.size()) != phi) {
    throw UsageError("pi_k needs phi(" + std::to_string(m) + ") = " + std::to_string(phi) + " counts, got " +
                     std::to_string(a.size()));
  }
  int sum = 0;
  for (int v : a) {
    if (v < 0) throw UsageError("pi_k counts must be non-negative");
    sum += v;
  }
  if (sum < 1) throw UsageError("pi_k counts must sum to at least 1");
  if (k && *k != sum) {
    throw UsageError("pi_k counts sum to " + std::to_string(sum) + " but k = " + std::to_string(*k));
  }
  CensusSpec spec;
  spec.limit = x;
  spec.k = sum;
  spec.statistic = Statistic::PIK_COUNT;
  spec.pik_modulus = m;
  spec.threads = threads;
  CensusReport r = run_census(spec, cache);
  r.target = census_detail::pattern_label(a);
  return r;
}

inline CensusReport symbol_independence_census(std::uint64_t x, int k, const std::vector<int>& residues,
                                               const SieveCache& cache, std::size_t threads = 1) {
  CensusSpec spec;
  spec.limit = x;
  spec.k = k;
  spec.statistic = Statistic::SYMBOL_PATTERN;
  spec.symbol_residues = residues;
  spec.threads = threads;
  return run_census(spec, cache);
}

}  // namespace cnselmer
