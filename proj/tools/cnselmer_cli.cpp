// cnselmer: Selmer sizes, family tags, censuses and rank simulations for
// congruent-number curves.

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cnselmer/cnselmer.hpp"

namespace cs = cnselmer;
namespace k = cnselmer::constants;

namespace {

enum class Format { TEXT, JSON, CSV };

struct CliConfig {
  std::string cache_path;
  bool no_cache = false;
  std::size_t threads = 1;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> limit;
  bool json = false;
  bool csv = false;
  bool timing = false;
  std::string out;

  Format format() const { return json ? Format::JSON : csv ? Format::CSV : Format::TEXT; }
};

std::string resolved_cache_path(const CliConfig& cfg) {
  if (cfg.no_cache) return {};
  if (!cfg.cache_path.empty()) return cfg.cache_path;
  if (const char* env = std::getenv("CNSELMER_CACHE")) return env;
  return {};
}

// Sieve covering `needed`. An explicit --limit caps what may be requested;
// otherwise the sieve is sized to the request. A persisted cache is reused
// when large enough and rewritten when not.
cs::SieveCache acquire_sieve(const CliConfig& cfg, std::uint64_t needed) {
  needed = std::max<std::uint64_t>(needed, 2);
  if (cfg.limit && needed > *cfg.limit) {
    throw cs::UsageError(std::to_string(needed) + " exceeds the sieve limit " + std::to_string(*cfg.limit) +
                         " (raise --limit)");
  }
  const std::uint64_t target = cfg.limit ? *cfg.limit : needed;
  const std::string path = resolved_cache_path(cfg);
  if (!path.empty() && std::filesystem::exists(path)) {
    try {
      cs::SieveCache c = cs::load_sieve(path);
      if (c.limit() >= target) return c;
    } catch (const cs::ResourceError& e) {
      std::cerr << "warning: ignoring sieve cache: " << e.what() << "\n";
    }
  }
  cs::SieveCache c = cs::build_sieve(target);
  if (!path.empty()) cs::save_sieve(c, path);
  return c;
}

std::uint64_t parse_n(const std::string& s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw cs::UsageError("not a positive integer: '" + s + "'");
  }
  if (v < 2) throw cs::UsageError("n must be at least 2");
  if (v > cs::kMaxSieveLimit) throw cs::UsageError("n exceeds 2^32");
  return v;
}

std::vector<int> parse_list(const std::string& s, const char* what) {
  std::vector<int> out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, ',')) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size() || part.empty()) {
      throw cs::UsageError(std::string("bad ") + what + " list '" + s + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw cs::UsageError(std::string("empty ") + what + " list");
  return out;
}

// "4:1" or "8:1,5": odd primes restricted to the listed residues.
cs::ResidueFilter parse_filter(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw cs::UsageError("filter must look like MOD:R1,R2");
  cs::ResidueFilter f;
  f.modulus = parse_list(s.substr(0, colon), "filter modulus").at(0);
  f.allowed = parse_list(s.substr(colon + 1), "filter residue");
  return f;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw cs::ResourceError("cannot write " + path);
    }
  }
  std::ostream& get() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

std::string fmt(long double v, int prec = 6) {
  if (std::isnan(v)) return "-";
  std::ostringstream o;
  o << std::fixed << std::setprecision(prec) << static_cast<double>(v);
  return o.str();
}

template <class T>
std::string opt_str(const std::optional<T>& v) {
  if (!v) return "-";
  if constexpr (std::is_same_v<T, bool>) return *v ? "true" : "false";
  else return std::to_string(*v);
}

void print_rows(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> w;
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (w.size() <= i) w.push_back(0);
      w[i] = std::max(w[i], r[i].size());
    }
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) {
      line += r[i];
      if (i + 1 < r.size()) line += std::string(w[i] - r[i].size() + 2, ' ');
    }
    out << line << "\n";
  }
}

// ---- analyze

void cmd_analyze(const CliConfig& cfg, const std::string& arg) {
  const std::uint64_t n = parse_n(arg);
  const cs::SieveCache cache = acquire_sieve(cfg, n);
  const cs::Analysis a = cs::analyze(n, cache);
  Output o(cfg.out);
  auto& out = o.get();
  if (cfg.format() == Format::JSON) {
    out << cs::analysis_json(a).dump(2) << "\n";
    return;
  }
  if (cfg.format() == Format::CSV) throw cs::UsageError("analyze supports text or --json output");
  if (!a.squarefree) {
    out << "n = " << n << " is not squarefree\n";
    return;
  }
  const auto& p = a.profile;
  std::string factors;
  for (auto f : p.n.factors) factors += (factors.empty() ? "" : " * ") + std::to_string(f);
  std::vector<std::vector<std::string>> rows = {
      {"n", std::to_string(n)},
      {"factors", factors},
      {"n mod 8", std::to_string(p.n.residue_mod8)},
      {"coverage", cs::to_string(p.coverage)},
      {"|S^phi|", p.phi_size_log2 ? "2^" + std::to_string(*p.phi_size_log2) : "-"},
      {"|S^phihat|", p.phihat_size_log2 ? "2^" + std::to_string(*p.phihat_size_log2) : "-"},
      {"s_phi", opt_str(p.s_phi)},
      {"s_phihat", opt_str(p.s_phihat)},
      {"rank bound", opt_str(p.rank_upper_bound)},
      {"selmer trivial", opt_str(p.selmer_trivial)},
      {"non-congruent certified", p.non_congruent_certified ? "true" : "false"},
      {"family", cs::to_string(a.family.family)},
      {"verdict", cs::to_string(a.family.verdict)},
      {"bsd set", cs::to_string(a.bsd.set)},
      {"bsd verified", a.bsd.verified ? "true" : "false"},
      {"bsd delta", opt_str(a.bsd.delta)},
      {"bsd rank zero", a.bsd.rank_zero() ? "true" : "false"},
  };
  print_rows(out, rows);
  for (const auto& g : a.graphs) {
    out << "graph " << cs::to_string(g.kind) << ": vertices";
    for (auto v : g.vertices) out << " " << v;
    out << "; edges";
    for (auto [from, to] : g.edges()) out << " " << from << "->" << to;
    out << "; even partitions " << cs::even_partition_count(g) << "\n";
  }
}

// ---- census

struct CensusFlags {
  std::uint64_t x = 0;
  std::optional<int> k;
  std::optional<int> h;
  std::optional<int> modulus;
  std::string counts;
  std::string residues;
  std::string filter;
};

void emit_census(const CliConfig& cfg, const cs::CensusReport& r) {
  Output o(cfg.out);
  auto& out = o.get();
  if (cfg.format() == Format::JSON) {
    out << cs::census_json(r, cfg.timing).dump(2) << "\n";
    return;
  }
  if (cfg.format() == Format::CSV) {
    out << cs::census_csv(r);
    return;
  }
  out << cs::to_string(r.spec.statistic) << "  X = " << r.spec.limit << "  k = " << r.spec.k;
  if (r.spec.class_mod8) out << "  n = " << *r.spec.class_mod8 << " mod 8";
  out << "\ndenominator " << r.denominator << "\n\n";
  std::vector<std::vector<std::string>> rows = {{"bucket", "count", "share"}};
  for (const auto& [label, c] : r.buckets)
    rows.push_back({label, std::to_string(c), fmt(cs::census_detail::share(c, r.denominator))});
  print_rows(out, rows);
  if (!r.theory.empty()) {
    out << "\n";
    rows = {{"theory", "value", "exact"}};
    for (const auto& [name, v] : r.theory) {
      auto it = r.theory_exact.find(name);
      rows.push_back({name, fmt(v), it == r.theory_exact.end() ? "" : it->second});
    }
    print_rows(out, rows);
  }
  if (!r.ratios.empty()) {
    out << "\n";
    rows = {{"ratio", "value", "z"}};
    for (const auto& [name, v] : r.ratios) {
      auto z = r.z_scores.find(name);
      std::string zs = "";
      if (z == r.z_scores.end()) {
        for (const auto& [zn, zv] : r.z_scores)
          if (zn.rfind(name + "_vs_", 0) == 0) zs += (zs.empty() ? "" : " ") + zn.substr(name.size() + 4) + "=" + fmt(zv, 2);
      } else {
        zs = fmt(z->second, 2);
      }
      rows.push_back({name, fmt(v), zs});
    }
    print_rows(out, rows);
  }
  if (r.supported_constant) out << "\nsupported constant: " << *r.supported_constant << "\n";
  if (r.target) out << "target " << *r.target << ": " << r.count(*r.target) << "\n";
  for (const auto& w : r.warnings) out << "warning: " << w << "\n";
  if (cfg.timing) out << "threads " << r.spec.threads << ", runtime " << fmt(r.runtime_seconds, 3) << " s\n";
}

void cmd_census(const CliConfig& cfg, cs::Statistic stat, const CensusFlags& f) {
  if (f.x == 0) throw cs::UsageError("census needs --x");
  if (f.x > cs::kMaxSieveLimit) throw cs::UsageError("--x exceeds 2^32");
  if (stat != cs::Statistic::PIK_COUNT && !f.counts.empty()) throw cs::UsageError("--counts only applies to pik");
  if (stat != cs::Statistic::PIK_COUNT && f.modulus) throw cs::UsageError("--mod only applies to pik");
  if (stat != cs::Statistic::SYMBOL_PATTERN && !f.residues.empty()) {
    throw cs::UsageError("--residues only applies to symbols");
  }
  const cs::SieveCache cache = acquire_sieve(cfg, f.x);
  if (stat == cs::Statistic::PIK_COUNT) {
    if (f.counts.empty()) throw cs::UsageError("pik needs --counts a1,a2,...");
    if (f.h || !f.filter.empty()) throw cs::UsageError("pik takes no --class or --filter");
    const int m = f.modulus.value_or(4);
    emit_census(cfg, cs::pik_census(f.x, m, parse_list(f.counts, "count"), cache, cfg.threads));
    return;
  }
  cs::CensusSpec spec;
  spec.limit = f.x;
  spec.k = f.k.value_or(1);
  spec.class_mod8 = f.h;
  if (!f.filter.empty()) spec.factor_filter = parse_filter(f.filter);
  spec.statistic = stat;
  spec.threads = cfg.threads;
  spec.seed = cfg.seed;
  if (stat == cs::Statistic::SYMBOL_PATTERN) {
    if (f.residues.empty()) throw cs::UsageError("symbols needs --residues d1,...,dk");
    spec.symbol_residues = parse_list(f.residues, "residue");
    const int kk = static_cast<int>(spec.symbol_residues.size());
    if (f.k && *f.k != kk) throw cs::UsageError("--k disagrees with the number of --residues");
    spec.k = kk;
  }
  emit_census(cfg, cs::run_census(spec, cache));
}

// ---- simulate

struct SimFlags {
  int k = 0;
  std::uint64_t trials = 0;
  bool exact = false;
  std::optional<int> rowsum;
};

void cmd_simulate(const CliConfig& cfg, const SimFlags& f) {
  if (f.k < 1) throw cs::UsageError("simulate needs --k >= 1");
  if (f.exact && f.trials) throw cs::UsageError("--exact and --trials are exclusive");
  if (!f.exact && !f.trials) throw cs::UsageError("simulate needs --exact or --trials N");
  Output o(cfg.out);
  auto& out = o.get();
  if (cfg.format() == Format::CSV) throw cs::UsageError("simulate supports text or --json output");
  if (f.rowsum) {
    const auto r = cs::conditioned_fullrank_probability(f.k, *f.rowsum, f.exact ? 0 : f.trials, cfg.seed,
                                                        cfg.threads);
    if (cfg.format() == Format::JSON) {
      out << cs::fullrank_json(r).dump(2) << "\n";
      return;
    }
    const auto q = k::q(f.k, 0);
    print_rows(out, {{"k", std::to_string(f.k)},
                     {"row-sum ones", std::to_string(r.j)},
                     {"mode", cs::to_string(r.mode)},
                     {"full rank", std::to_string(r.full_rank) + " / " + std::to_string(r.total)},
                     {"frequency", r.mode == cs::SimMode::EXACT ? k::to_string(r.exact()) : fmt(r.frequency())},
                     {"q(k,0)", k::to_string(q) + " = " + fmt(k::to_float(q))}});
    return;
  }
  const cs::RankDistribution d = f.exact ? cs::enumerate_rank_distribution(f.k)
                                         : cs::montecarlo_rank_distribution(f.k, f.trials, cfg.seed, cfg.threads);
  if (cfg.format() == Format::JSON) {
    out << cs::rank_distribution_json(d).dump(2) << "\n";
    return;
  }
  out << "k = " << d.k << ", " << cs::to_string(d.mode) << ", total " << d.total;
  if (d.seed) out << ", seed " << *d.seed;
  out << "\n";
  std::vector<std::vector<std::string>> rows = {{"e", "partitions", "count", "frequency", "q(k,e)", "value"}};
  if (d.mode == cs::SimMode::MONTE_CARLO) rows[0].push_back("z");
  for (int e = 0; e < d.k; ++e) {
    const auto q = k::q(d.k, e);
    std::vector<std::string> row = {std::to_string(e), "2^" + std::to_string(e + 1), std::to_string(d.counts[e]),
                                    d.mode == cs::SimMode::EXACT
                                        ? k::to_string(k::Rational(d.counts[e], d.total))
                                        : fmt(d.frequency(e)),
                                    k::to_string(q), fmt(k::to_float(q))};
    if (d.mode == cs::SimMode::MONTE_CARLO) {
      row.push_back(fmt(cs::census_detail::z_score(d.frequency(e), k::to_float(q), d.total), 2));
    }
    rows.push_back(row);
  }
  print_rows(out, rows);
}

// ---- constants

void cmd_constants(const CliConfig& cfg, int k_max, int r_max) {
  if (k_max < 1 || k_max > 64) throw cs::UsageError("--k-max must be in 1..64");
  if (r_max < 0 || r_max > 64) throw cs::UsageError("--r-max must be in 0..64");
  if (cfg.format() == Format::CSV) throw cs::UsageError("constants supports text or --json output");
  Output o(cfg.out);
  auto& out = o.get();
  if (cfg.format() == Format::JSON) {
    cs::Json j;
    j["lambda"] = static_cast<double>(k::lambda());
    cs::Json dr = cs::Json::array();
    for (int r = 0; r <= r_max; ++r) dr.push_back(static_cast<double>(k::d_r(r)));
    j["d_r"] = dr;
    cs::Json rows = cs::Json::array();
    for (int kk = 1; kk <= k_max; ++kk) {
      cs::Json grid = cs::Json::array();
      for (int e = 0; e < kk; ++e) grid.push_back(k::to_string(k::q(kk, e)));
      rows.push_back({{"k", kk},
                      {"q", k::to_string(k::q(kk))},
                      {"q_ke", grid},
                      {"c3", k::to_string(k::c3(kk))},
                      {"c2_printed", k::to_string(k::c2_printed(kk))},
                      {"c2_derived", k::to_string(k::c2_derived(kk))},
                      {"c2_parity", kk >= 2 ? cs::Json(k::to_string(k::c2_parity(kk))) : cs::Json(nullptr)}});
    }
    j["by_k"] = rows;
    out << j.dump(2) << "\n";
    return;
  }
  out << "lambda = " << fmt(k::lambda(), 15) << "\n\n";
  std::vector<std::vector<std::string>> rows = {{"r", "d_r"}};
  for (int r = 0; r <= r_max; ++r) rows.push_back({std::to_string(r), fmt(k::d_r(r), 12)});
  print_rows(out, rows);
  out << "\n";
  rows = {{"k", "q(k)", "c3(k)", "c2_printed(k)", "c2_derived(k)", "c2_parity(k)"}};
  for (int kk = 1; kk <= k_max; ++kk) {
    rows.push_back({std::to_string(kk), k::to_string(k::q(kk)), k::to_string(k::c3(kk)),
                    k::to_string(k::c2_printed(kk)), k::to_string(k::c2_derived(kk)),
                    kk >= 2 ? k::to_string(k::c2_parity(kk)) : "-"});
  }
  print_rows(out, rows);
  out << "\nq(k,e)\n";
  rows = {{"k\\e"}};
  for (int e = 0; e < k_max; ++e) rows[0].push_back(std::to_string(e));
  for (int kk = 1; kk <= k_max; ++kk) {
    std::vector<std::string> row = {std::to_string(kk)};
    for (int e = 0; e < kk; ++e) row.push_back(k::to_string(k::q(kk, e)));
    rows.push_back(row);
  }
  print_rows(out, rows);
}

void cmd_sieve(const CliConfig& cfg) {
  if (!cfg.limit) throw cs::UsageError("sieve needs --limit");
  if (resolved_cache_path(cfg).empty()) throw cs::UsageError("sieve needs --cache PATH or CNSELMER_CACHE");
  const cs::SieveCache c = acquire_sieve(cfg, *cfg.limit);
  Output o(cfg.out);
  o.get() << "sieve up to " << c.limit() << " at " << resolved_cache_path(cfg) << "\n";
}

void add_format_flags(CLI::App* sub, CliConfig& cfg, bool csv) {
  auto* j = sub->add_flag("--json", cfg.json, "JSON output");
  if (csv) sub->add_flag("--csv", cfg.csv, "CSV output")->excludes(j);
  sub->add_option("--out", cfg.out, "Write the report to a file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Selmer groups of congruent-number curves via odd graphs"};
  app.require_subcommand(1);
  CliConfig cfg;
  app.add_option("--cache", cfg.cache_path, "Sieve cache file (default: $CNSELMER_CACHE)");
  app.add_flag("--no-cache", cfg.no_cache, "Keep the sieve in memory only");
  app.add_option("--threads", cfg.threads, "Worker threads")->check(CLI::Range(std::size_t{1}, std::size_t{1024}));
  app.add_option("--seed", cfg.seed, "Random seed");
  app.add_option("--limit", cfg.limit, "Sieve limit")->check(CLI::Range(std::uint64_t{2}, cs::kMaxSieveLimit));

  std::string n_arg;
  auto* analyze = app.add_subcommand("analyze", "Selmer sizes, family and BSD status of n");
  analyze->add_option("n", n_arg, "Positive integer")->required();
  add_format_flags(analyze, cfg, false);

  auto* census = app.add_subcommand("census", "Sieved census of squarefree n <= X");
  census->require_subcommand(1);
  CensusFlags cf;
  struct Sub {
    const char* name;
    cs::Statistic stat;
    const char* help;
  };
  const Sub subs[] = {{"selmer", cs::Statistic::SELMER_TRIVIAL, "Share with trivial Selmer groups"},
                      {"graphs", cs::Statistic::GRAPH_ODD_DISTRIBUTION, "Even-partition exponent distribution"},
                      {"bsd", cs::Statistic::BSD_VERIFIED, "BSD-verified shares"},
                      {"pik", cs::Statistic::PIK_COUNT, "Counts by prime residue pattern mod m"},
                      {"symbols", cs::Statistic::SYMBOL_PATTERN, "Legendre symbol pattern frequencies"}};
  std::vector<std::pair<CLI::App*, cs::Statistic>> census_subs;
  for (const auto& s : subs) {
    auto* c = census->add_subcommand(s.name, s.help);
    c->add_option("--x", cf.x, "Upper bound X")->required();
    if (s.stat != cs::Statistic::PIK_COUNT) c->add_option("--k", cf.k, "Number of prime factors (2 included)");
    if (s.stat != cs::Statistic::PIK_COUNT && s.stat != cs::Statistic::SYMBOL_PATTERN) {
      c->add_option("--class", cf.h, "n mod 8");
      c->add_option("--filter", cf.filter, "Odd primes restricted, e.g. 4:1");
    }
    if (s.stat == cs::Statistic::PIK_COUNT) {
      c->add_option("--mod", cf.modulus, "Modulus m");
      c->add_option("--counts", cf.counts, "a_1,...,a_phi(m)")->required();
    }
    if (s.stat == cs::Statistic::SYMBOL_PATTERN) {
      c->add_option("--residues", cf.residues, "p_j mod 8, e.g. 1,1")->required();
    }
    c->add_flag("--timing", cfg.timing, "Include threads and runtime");
    add_format_flags(c, cfg, true);
    c->fallthrough();
    census_subs.emplace_back(c, s.stat);
  }
  census->fallthrough();

  SimFlags sf;
  auto* simulate = app.add_subcommand("simulate", "Rank distribution of random graph Laplacians");
  simulate->add_option("--k", sf.k, "Vertices")->required();
  simulate->add_option("--trials", sf.trials, "Monte Carlo trials");
  simulate->add_flag("--exact", sf.exact, "Enumerate every graph");
  simulate->add_option("--rowsum", sf.rowsum, "Condition on j row sums equal to 1");
  add_format_flags(simulate, cfg, false);

  int k_max = 8;
  int r_max = 6;
  auto* consts = app.add_subcommand("constants", "Exact probability constants");
  consts->add_option("--k-max", k_max, "Largest k");
  consts->add_option("--r-max", r_max, "Largest r for d_r");
  add_format_flags(consts, cfg, false);

  auto* sieve = app.add_subcommand("sieve", "Build and persist the sieve cache");

  for (auto* sub : {analyze, simulate, consts, sieve}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*analyze) cmd_analyze(cfg, n_arg);
    for (auto& [c, stat] : census_subs)
      if (*c) cmd_census(cfg, stat, cf);
    if (*simulate) cmd_simulate(cfg, sf);
    if (*consts) cmd_constants(cfg, k_max, r_max);
    if (*sieve) cmd_sieve(cfg);
  } catch (const cs::ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
