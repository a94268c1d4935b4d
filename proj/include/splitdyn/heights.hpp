#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "splitdyn/constants.hpp"
#include "splitdyn/dynsys.hpp"
#include "splitdyn/int_poly.hpp"

namespace splitdyn {

/// log max(|num|, den); natural log.
double weil_height(const Rational& alpha);
double height_tuple(std::span<const Rational> point);

/// C_f with |h(f(x)) - deg(f) h(x)| <= C_f for every algebraic x.
double escape_constant(const UniPoly& f);

struct CanonicalEstimate {
  double value = 0;
  double error_bound = 0;  // bound on |value - canonical height|
  unsigned n_used = 0;
  std::string method;      // "preperiodic", "exact", "local"

  nlohmann::json to_json() const;
};

/// h(f^N(alpha)) computed exactly while the iterate is small and place by
/// place (archimedean in MPFR, bad primes p-adically) beyond that.
double height_of_iterate(const PolyDS& ds, const Rational& alpha, unsigned n,
                         std::size_t exact_bit_budget = limits::kExactHeightBitBudget,
                         std::string* method = nullptr);

/// Estimate with the least N such that C_f/(d^N (d-1)) <= target_error.
CanonicalEstimate canonical_height(const PolyDS& ds, const Rational& alpha, double target_error);
/// Estimate at a fixed N.
CanonicalEstimate canonical_height_at(const PolyDS& ds, const Rational& alpha, unsigned n);

struct MahlerReport {
  IntPoly poly;
  std::vector<std::complex<long double>> roots;
  double measure = 0;
  double root_residual = 0;  // max relative backward error over roots
  double measure_error = 0;  // certified bound from root inclusion disks
  unsigned iterations = 0;

  nlohmann::json to_json() const;
};

/// Mahler measure via Aberth simultaneous iteration, refined in multiprecision
/// until disjoint root inclusion disks bound the error. Deterministic for a
/// given seed. Throws non_convergence if no certificate is reached.
MahlerReport mahler(const IntPoly& q, std::uint64_t seed = limits::kAberthSeed);

/// Average Weil height of the roots of q, counted with multiplicity.
double avg_root_height(const IntPoly& q);

/// Max log|coefficient| of the primitive integer form.
double coefficient_height(const IntPoly& q);

/// Canonical height shared by the roots of the irreducible q, from the
/// Mahler measure of its N-th pushforward.
CanonicalEstimate factor_canonical_height(const PolyDS& ds, const IntPoly& q, unsigned n);

/// Canonical height shared by the roots of q from the archimedean Green
/// function of f, iterating each complex root until it escapes or its
/// contribution is below target_error. Needs f in Z[X] with leading
/// coefficient +-1 (throws unsupported otherwise).
CanonicalEstimate green_canonical_height(const PolyDS& ds, const IntPoly& q, double target_error = 1e-12);

struct SymmetryAudit {
  double max_discrepancy = 0;
  double max_allowed = 0;  // largest combined error bound seen
  bool within_bounds = true;
  nlohmann::json to_json() const;
};

/// Compares canonical heights at alpha and L(alpha). L must satisfy
/// f^N o L = L o f^N or f^N o L = f^N for some N <= n_max.
SymmetryAudit symmetry_height_audit(const PolyDS& ds, const Affine& l, std::span<const Rational> samples,
                                    double target_error, unsigned n_max = 4);

}  // namespace splitdyn
