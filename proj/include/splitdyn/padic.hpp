#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "splitdyn/dynsys.hpp"
#include "splitdyn/subvar.hpp"

namespace splitdyn {

using Residue = std::uint64_t;
using ResiduePoint = std::vector<Residue>;

/// Prime p with precision m; arithmetic happens in Z/p^m, which must fit
/// below 2^63.
class PadicContext {
 public:
  PadicContext(std::uint64_t p, unsigned m);
  std::uint64_t p() const { return p_; }
  unsigned m() const { return m_; }
  std::uint64_t modulus() const { return modulus_; }

 private:
  std::uint64_t p_;
  unsigned m_;
  std::uint64_t modulus_;
};

/// v_p(q); nullopt stands for +infinity (q = 0).
std::optional<long> vp(const Rational& q, const BigInt& p);

struct GoodPrimeReport {
  std::uint64_t p = 0;
  bool good = true;
  std::vector<std::string> reasons;  // one entry per failed condition
  nlohmann::json to_json() const;
};

/// Integrality of P, of the coefficients of f and of every link g, and of
/// every finite pin; units for the leading coefficients of f and each g.
/// Infinite coordinates or pins reject the prime.
GoodPrimeReport is_good_prime(const PolyDS& ds, const StructuredVariety& v, const std::vector<ProjPoint>& point,
                              std::uint64_t p);

struct OrbitModPm {
  std::vector<ResiduePoint> tail;
  std::vector<ResiduePoint> cycle;
  std::size_t tail_len() const { return tail.size(); }
  std::size_t cycle_len() const { return cycle.size(); }
  nlohmann::json to_json() const;
};

/// Orbit of the reduced point under coordinatewise f mod p^m. Throws budget
/// when tail + cycle would exceed the step cap.
OrbitModPm orbit_mod(const PolyDS& ds, const std::vector<ProjPoint>& point, const PadicContext& ctx);

struct HasseCertificate {
  std::uint64_t p = 0;
  unsigned m = 0;
  std::size_t tail_len = 0;
  std::size_t cycle_len = 0;
  std::size_t residues_checked = 0;
  std::string method = "exhaustive";  // or "etale"
  GoodPrimeReport good_prime_report;
  nlohmann::json to_json() const;
  static HasseCertificate from_json(const nlohmann::json& j);
};

/// Result of one (p, m) attempt: a certificate, or an orbit residue that
/// satisfies every reduced equation.
struct HasseAttempt {
  std::optional<HasseCertificate> certificate;
  std::optional<ResiduePoint> witness;
  std::size_t witness_index = 0;  // position in tail followed by cycle
};

HasseAttempt hasse_attempt(const PolyDS& ds, const StructuredVariety& v, const std::vector<ProjPoint>& point,
                           const PadicContext& ctx);
std::optional<HasseCertificate> hasse_certificate(const PolyDS& ds, const StructuredVariety& v,
                                                  const std::vector<ProjPoint>& point, const PadicContext& ctx);

/// Independent check: recomputes the orbit mod p^m with GMP integers and a
/// tuple-keyed visited set, then tests every residue against V.
bool verify_certificate(const PolyDS& ds, const StructuredVariety& v, const std::vector<ProjPoint>& point,
                        const HasseCertificate& cert);
/// True iff the residue satisfies every equation of V reduced mod p^m.
bool verify_witness(const PolyDS& ds, const StructuredVariety& v, const PadicContext& ctx, const ResiduePoint& x);

struct AvoidanceReport {
  unsigned horizon = 0;
  unsigned exact_steps = 0;    // iterates decided by exact membership
  unsigned modular_steps = 0;  // decided by a failed reduction at a large prime
  bool whole_orbit = false;    // orbit found finite, so every iterate was checked
  nlohmann::json to_json() const;
};

/// Checks that phi^k(P) is not in V for k <= horizon. Exact iterates are used
/// while their size stays in budget; later iterates are excluded by a
/// reduction at a large good prime not satisfying V. Throws orbit_meets_v
/// when some iterate lies on V and budget when an iterate cannot be decided.
AvoidanceReport check_orbit_avoidance(const PolyDS& ds, const StructuredVariety& v,
                                      const std::vector<ProjPoint>& point, unsigned horizon);

struct HasseSearchResult {
  std::vector<HasseCertificate> certificates;  // ascending p, least m per prime
  std::vector<std::uint64_t> good_primes;
  std::vector<std::uint64_t> bad_primes;
  std::vector<std::uint64_t> budget_skipped;
  AvoidanceReport avoidance;
  double density() const;  // certified primes / good primes tried
  nlohmann::json to_json() const;
};

HasseSearchResult hasse_search(const PolyDS& ds, const StructuredVariety& v, const std::vector<ProjPoint>& point,
                               std::uint64_t prime_bound, unsigned m_max,
                               unsigned horizon = static_cast<unsigned>(limits::kOrbitAvoidanceHorizon));

struct EtaleReport {
  std::uint64_t p = 0;
  std::vector<Residue> derivative_unit_at;
  std::vector<Residue> derivative_vanishes_at;
  bool holds = false;
  nlohmann::json to_json() const;
};

EtaleReport etale_along_orbit(const PolyDS& ds, const std::vector<ProjPoint>& point, std::uint64_t p);

/// Certificate at m = 1 backed by the etale argument: f' is a unit along the
/// mod-p orbit and no orbit residue lies on V mod p. V must be periodic.
std::optional<HasseCertificate> certify_via_etale(const PolyDS& ds, const StructuredVariety& v,
                                                  const std::vector<ProjPoint>& point, std::uint64_t p,
                                                  unsigned n_max = 4);

struct PrimitivePrime {
  std::uint64_t p;
  unsigned mu;  // least mu with v_p(f^mu(alpha) - gamma) > 0
  nlohmann::json to_json() const;
};

struct PrimitivePrimeReport {
  unsigned gamma_period = 0;
  std::vector<PrimitivePrime> primes;
  std::vector<std::uint64_t> excluded;  // dropped by the exclusion screen or as bad primes
  /// Per mu: whether f^mu(alpha) - gamma was factored completely.
  std::vector<bool> factorization_complete;
  nlohmann::json to_json() const;
};

struct PrimitivePrimeOptions {
  unsigned mu_max = 6;
  std::uint64_t prime_bound = limits::kDefaultPrimeBound;
  std::vector<Rational> exclusions;
  bool allow_short_period = false;  // accept gamma of period 1 or 2
};

PrimitivePrimeReport primitive_prime_search(const PolyDS& ds, const Rational& alpha, const Rational& gamma,
                                            const PrimitivePrimeOptions& opts);

}  // namespace splitdyn
