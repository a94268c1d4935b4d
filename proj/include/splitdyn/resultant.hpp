#pragma once

#include "splitdyn/poly.hpp"

namespace splitdyn {

/// Res(a, b) over Q, with Res(c, d) = 1 for two constants.
Rational resultant(const UniPoly& a, const UniPoly& b);

/// Monic polynomial whose roots, with multiplicity, are f^N(alpha) for the
/// roots alpha of q. Agrees with Res_y(q(y), x - f^N(y)) up to a nonzero
/// scalar. f^N is reduced modulo q as it is built, so its degree never
/// matters.
UniPoly pushforward(const UniPoly& q, const UniPoly& f, unsigned N);

/// Same, for an arbitrary polynomial map g (roots g(alpha)).
UniPoly pushforward_by(const UniPoly& q, const UniPoly& g);

}  // namespace splitdyn
