#pragma once

// Experiment harness behind the CLI. Every entry point returns a typed result
// with a JSON form; make_report wraps it with the schema version and the
// configuration echo.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "splitdyn/bipoly.hpp"
#include "splitdyn/dynsys.hpp"
#include "splitdyn/heights.hpp"
#include "splitdyn/int_poly.hpp"
#include "splitdyn/padic.hpp"
#include "splitdyn/subvar.hpp"

namespace splitdyn::lab {

inline constexpr const char* kSchemaVersion = "1.0.0";

nlohmann::json make_report(const std::string& command, const nlohmann::json& config, const nlohmann::json& result,
                           const nlohmann::json& summary);

/// "0,5" or "inf,1/2".
std::vector<ProjPoint> parse_point(std::string_view text);
/// Either polynomial text in x and y or nested coefficient lists
/// [[c00, c01, ...], [c10, ...], ...] with rows indexed by the power of x.
BiPoly parse_curve(std::string_view text);
nlohmann::json point_json(const std::vector<ProjPoint>& p);

// ---- thin commands

nlohmann::json classify_result(const PolyDS& ds);
nlohmann::json orbit_result(const PolyDS& ds, const std::vector<ProjPoint>& point, std::uint64_t p, unsigned m);
nlohmann::json chains_result(const PolyDS& ds, const StructuredVariety& v, unsigned n_max);

// ---- Hasse searches

struct HasseConfig {
  UniPoly f;
  StructuredVariety v{1, {}};
  std::vector<ProjPoint> point;
  std::uint64_t prime_bound = limits::kDefaultPrimeBound;
  unsigned m_max = limits::kDefaultMMax;
  unsigned horizon = limits::kOrbitAvoidanceHorizon;
  nlohmann::json to_json() const;
};

struct HasseRun {
  HasseSearchResult search;
  std::size_t verified = 0;  // certificates re-checked by the independent verifier
  nlohmann::json result_json() const;
  nlohmann::json summary_json() const;
};

/// Runs the search; every certificate is re-verified before it is kept.
HasseRun run_hasse(const HasseConfig& cfg);

struct VerifyOutcome {
  std::size_t checked = 0;
  std::size_t passed = 0;
  std::vector<std::uint64_t> failed_primes;
  nlohmann::json to_json() const;
};

VerifyOutcome verify_certificates(const PolyDS& ds, const StructuredVariety& v, const std::vector<ProjPoint>& point,
                                  const std::vector<HasseCertificate>& certs);

// ---- dynamical Bombieri-Masser-Zannier experiments

struct BmzConfig {
  UniPoly f;
  BiPoly curve;
  std::vector<UniPoly> maps;  // the g's
  std::vector<std::string> map_labels;
  /// Pushforwards used for canonical heights stay below this degree.
  int height_degree_budget = 256;
  nlohmann::json to_json() const;
};

struct BmzFactor {
  IntPoly factor;
  unsigned multiplicity = 1;
  double weil_height = 0;        // average Weil height of the roots alpha
  CanonicalEstimate alpha;       // canonical height of alpha
  CanonicalEstimate beta;        // canonical height of beta = g(alpha)
  double relation_gap = 0;       // |h(beta) - deg g h(alpha)|
  double relation_allowance = 0; // beta.error + deg g * alpha.error
  bool relation_holds() const { return relation_gap <= relation_allowance; }
  nlohmann::json to_json() const;
};

struct BmzItem {
  std::string label;
  UniPoly g;
  UniPoly intersection;  // F(x, g(x)), denominators cleared
  std::vector<BmzFactor> factors;
  double max_canonical = 0;
  double max_weil = 0;
  nlohmann::json to_json() const;
};

struct BmzRun {
  std::vector<BmzItem> items;
  nlohmann::json result_json() const;
  nlohmann::json summary_json() const;
  bool all_relations_hold() const;
};

BmzRun run_bmz(const BmzConfig& cfg);

// ---- G_k sweep

struct GkRow {
  unsigned k = 0;
  int degree = 0;
  double coeff_height = 0;
  double avg_root_height = 0;
  nlohmann::json to_json() const;
};

struct GkSweep {
  int d = 0;
  std::vector<GkRow> rows;
  double c3 = 0;  // min deg / d^k
  double c4 = 0;  // max coefficient height / d^k
  double c5 = 0;  // max average root height
  bool c5_stable = false;  // running max unchanged over the last half
  nlohmann::json result_json() const;
  nlohmann::json summary_json() const;
};

/// G_k = f^k(Q) - f^k(P) for k = 1..k_max. Throws preperiodic_curve when some
/// G_k vanishes.
GkSweep run_gk_sweep(const PolyDS& ds, const UniPoly& p, const UniPoly& q, unsigned k_max);

// ---- Eisenstein family f = X^2 + p, curve y = x + p

struct EisensteinRow {
  unsigned k = 0;
  UniPoly s;  // S_{k-1}
  bool factorization_exact = false;  // G_k == G_{k-1} S_{k-1}
  bool eisenstein = false;
  double avg_root_height = 0;
  double max_root_height = 0;  // over the irreducible factors of S_{k-1}
  nlohmann::json to_json() const;
};

struct EisensteinFamily {
  int d = 2;
  std::uint64_t p = 0;
  std::vector<EisensteinRow> rows;
  double running_max = 0;
  unsigned stable_from = 0;  // first k after which the running max never increases
  nlohmann::json result_json() const;
  nlohmann::json summary_json() const;
};

EisensteinFamily run_eisenstein_family(int d, std::uint64_t p, unsigned k_max);

// ---- split maps

struct SplitConfig {
  std::vector<UniPoly> fs;
  std::vector<UniPoly> ps;
  UniPoly q;
  StructuredVariety v{1, {}};           // on the q side
  std::vector<ProjPoint> point;         // on the q side
  std::uint64_t prime_bound = limits::kDefaultPrimeBound;
  unsigned m_max = limits::kDefaultMMax;
  unsigned horizon = limits::kOrbitAvoidanceHorizon;
  nlohmann::json to_json() const;
};

struct SplitRun {
  std::vector<ProjPoint> pushed_point;  // (p_i(P_i))
  unsigned conjugacy_checks = 0;        // exact f_i^k(p_i(P_i)) = p_i(q^k(P_i)) checks
  HasseRun diagonal;
  nlohmann::json result_json() const;
  nlohmann::json summary_json() const;
};

/// Checks f_i o p_i = p_i o q for each i, then runs the Hasse search on the
/// diagonal system (q, ..., q). Throws semiconjugacy_fails.
SplitRun run_split(const SplitConfig& cfg);

}  // namespace splitdyn::lab
