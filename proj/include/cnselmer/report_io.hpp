#pragma once

// JSON and CSV forms of analysis, census and simulation reports.

#include <cmath>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "cnselmer/census.hpp"
#include "cnselmer/graphs.hpp"
#include "cnselmer/randsim.hpp"
#include "cnselmer/selmer.hpp"

namespace cnselmer {

using Json = nlohmann::ordered_json;

namespace io_detail {

template <class T>
Json opt(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

inline Json num(long double v) { return std::isfinite(v) ? Json(static_cast<double>(v)) : Json(nullptr); }

}  // namespace io_detail

inline Json graph_json(const PrimeGraph& g) {
  Json edges = Json::array();
  for (auto [from, to] : g.edges()) edges.push_back({from, to});
  return {{"kind", to_string(g.kind)}, {"vertices", g.vertices}, {"edges", edges}};
}

inline Json analysis_json(const Analysis& a) {
  Json j;
  j["n"] = a.value;
  j["squarefree"] = a.squarefree;
  if (!a.squarefree) return j;
  const auto& p = a.profile;
  j["factors"] = p.n.factors;
  j["residue_mod8"] = p.n.residue_mod8;
  j["coverage"] = to_string(p.coverage);
  j["phi_size_log2"] = io_detail::opt(p.phi_size_log2);
  j["phihat_size_log2"] = io_detail::opt(p.phihat_size_log2);
  j["s_phi"] = io_detail::opt(p.s_phi);
  j["s_phihat"] = io_detail::opt(p.s_phihat);
  j["rank_upper_bound"] = io_detail::opt(p.rank_upper_bound);
  j["selmer_trivial"] = io_detail::opt(p.selmer_trivial);
  j["non_congruent_certified"] = p.non_congruent_certified;
  if (p.s_phihat) {
    // Alternative normalizations of s_phihat differ from this one by 2.
    j["exponent_convention"] = "|S^phi| = 2^s_phi, |S^phihat| = 2^(2+s_phihat)";
  }
  j["family"] = to_string(a.family.family);
  j["verdict"] = to_string(a.family.verdict);
  j["bsd"] = {{"set", to_string(a.bsd.set)},
              {"verified", a.bsd.verified},
              {"graph_odd", io_detail::opt(a.bsd.graph_odd)},
              {"delta", io_detail::opt(a.bsd.delta)},
              {"rank_zero", a.bsd.rank_zero()}};
  Json graphs = Json::array();
  for (const auto& g : a.graphs) graphs.push_back(graph_json(g));
  j["graphs"] = graphs;
  return j;
}

inline Json census_spec_json(const CensusSpec& s) {
  Json j;
  j["statistic"] = to_string(s.statistic);
  j["X"] = s.limit;
  j["k"] = s.k;
  j["class_mod8"] = io_detail::opt(s.class_mod8);
  if (s.factor_filter) {
    j["factor_filter"] = {{"modulus", s.factor_filter->modulus}, {"allowed", s.factor_filter->allowed}};
  } else {
    j["factor_filter"] = nullptr;
  }
  if (s.statistic == Statistic::PIK_COUNT) j["modulus"] = s.pik_modulus;
  if (s.statistic == Statistic::SYMBOL_PATTERN) j["residues_mod8"] = s.symbol_residues;
  j["seed"] = s.seed;
  return j;
}

// Thread count, runtime and timestamp are left out unless include_timing is
// set, so reports for the same spec are byte-identical.
inline Json census_json(const CensusReport& r, bool include_timing = false) {
  Json j;
  j["spec"] = census_spec_json(r.spec);
  j["denominator"] = r.denominator;
  j["buckets"] = r.buckets;
  Json theory = Json::object();
  for (const auto& [k, v] : r.theory) theory[k] = io_detail::num(v);
  j["theory"] = theory;
  j["theory_exact"] = r.theory_exact;
  Json ratios = Json::object();
  for (const auto& [k, v] : r.ratios) ratios[k] = io_detail::num(v);
  j["ratios"] = ratios;
  Json z = Json::object();
  for (const auto& [k, v] : r.z_scores) z[k] = io_detail::num(v);
  j["z_scores"] = z;
  j["supported_constant"] = io_detail::opt(r.supported_constant);
  if (r.target) j["target"] = *r.target;
  j["warnings"] = r.warnings;
  if (include_timing) {
    j["threads"] = r.spec.threads;
    j["runtime_seconds"] = r.runtime_seconds;
    j["timestamp"] = r.timestamp;
  }
  return j;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

// Long format: section,key,value.
inline std::string census_csv(const CensusReport& r) {
  std::ostringstream out;
  out.precision(12);
  out << "section,key,value\n";
  out << "spec,statistic," << to_string(r.spec.statistic) << "\n";
  out << "spec,X," << r.spec.limit << "\n";
  out << "spec,k," << r.spec.k << "\n";
  if (r.spec.class_mod8) out << "spec,class_mod8," << *r.spec.class_mod8 << "\n";
  out << "count,denominator," << r.denominator << "\n";
  for (const auto& [k, v] : r.buckets) out << "bucket," << csv_field(k) << "," << v << "\n";
  for (const auto& [k, v] : r.theory) out << "theory," << csv_field(k) << "," << static_cast<double>(v) << "\n";
  for (const auto& [k, v] : r.ratios) out << "ratio," << csv_field(k) << "," << static_cast<double>(v) << "\n";
  for (const auto& [k, v] : r.z_scores) out << "z," << csv_field(k) << "," << static_cast<double>(v) << "\n";
  if (r.supported_constant) out << "verdict,supported_constant," << *r.supported_constant << "\n";
  return out.str();
}

inline Json rank_distribution_json(const RankDistribution& d) {
  Json j;
  j["k"] = d.k;
  j["mode"] = to_string(d.mode);
  j["seed"] = io_detail::opt(d.seed);
  j["total"] = d.total;
  Json rows = Json::array();
  for (int e = 0; e < d.k; ++e) {
    const auto q = constants::q(d.k, e);
    const long double p = constants::to_float(q);
    Json row = {{"e", e},
                {"even_partitions", "2^" + std::to_string(e + 1)},
                {"count", d.counts[e]},
                {"frequency", io_detail::num(d.frequency(e))},
                {"theory", constants::to_string(q)},
                {"theory_value", io_detail::num(p)}};
    if (d.mode == SimMode::MONTE_CARLO) row["z"] = io_detail::num(census_detail::z_score(d.frequency(e), p, d.total));
    rows.push_back(row);
  }
  j["buckets"] = rows;
  return j;
}

inline Json fullrank_json(const FullRankFrequency& f) {
  const auto q = constants::q(f.k, 0);
  Json j = {{"k", f.k},
            {"rowsum_ones", f.j},
            {"mode", to_string(f.mode)},
            {"full_rank", f.full_rank},
            {"total", f.total},
            {"frequency", io_detail::num(f.frequency())},
            {"theory", constants::to_string(q)},
            {"theory_value", io_detail::num(constants::to_float(q))}};
  if (f.mode == SimMode::EXACT) j["exact"] = constants::to_string(f.exact());
  return j;
}

}  // namespace cnselmer
