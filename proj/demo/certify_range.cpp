// Lists the n <= N (default 500) that the odd-graph criteria certify as
// non-congruent, with the family each one falls in.
#include <cstdlib>
#include <iostream>

#include "cnselmer/cnselmer.hpp"

int main(int argc, char** argv) {
  const std::uint64_t limit = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 500;
  const auto cache = cnselmer::build_sieve(limit < 2 ? 2 : limit);
  int certified = 0;
  for (std::uint64_t n = 2; n <= limit; ++n) {
    const auto a = cnselmer::analyze(n, cache);
    if (!a.squarefree) continue;
    if (!a.profile.non_congruent_certified && !a.bsd.rank_zero()) continue;
    ++certified;
    std::cout << n << "\t" << cnselmer::to_string(a.profile.coverage) << "\t"
              << cnselmer::to_string(a.family.family) << "\t" << cnselmer::to_string(a.bsd.set) << "\n";
  }
  std::cout << certified << " certified\n";
}
