#pragma once

#include <vector>

#include "splitdyn/constants.hpp"
#include "splitdyn/int_poly.hpp"
#include "splitdyn/poly.hpp"

namespace splitdyn {

struct PolyFactor {
  IntPoly factor;  // primitive, positive leading coefficient, irreducible over Q
  unsigned multiplicity = 1;
};

struct PolyFactorization {
  Rational unit;  // f = unit * prod factor^multiplicity
  std::vector<PolyFactor> factors;
};

/// Exact factorization over Q: squarefree decomposition, then factoring
/// modulo small primes, Hensel lifting and Zassenhaus recombination.
/// Factors are sorted by degree, then coefficients.
PolyFactorization factor_poly(const UniPoly& f, int degree_cap = limits::kFactorDegreeCap);

bool is_irreducible(const UniPoly& f, int degree_cap = limits::kFactorDegreeCap);

/// Distinct rational roots, ascending.
std::vector<Rational> rational_roots(const UniPoly& f, int degree_cap = limits::kFactorDegreeCap);

/// Squarefree decomposition over Q: pairs (monic squarefree part, multiplicity).
std::vector<std::pair<UniPoly, unsigned>> squarefree_decomposition(const UniPoly& f);

/// Eisenstein's criterion for the integer polynomial content*primitive at p.
bool eisenstein(const IntPoly& q, const BigInt& p);

UniPoly expand(const PolyFactorization& fac);

}  // namespace splitdyn
