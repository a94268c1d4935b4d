#pragma once

#include <optional>
#include <utility>

#include "splitdyn/poly.hpp"

namespace splitdyn {

struct Decomposition {
  UniPoly outer;  // u
  UniPoly inner;  // v: monic, v(0) = 0, deg v = e
};

/// Finds f = u o v with deg v = e. Requires 2 <= e < deg f and e | deg f.
/// The right factor of a given degree is unique up to an affine map on its
/// left, so normalizing v (monic, zero constant term) makes the answer
/// unique; u absorbs the affine ambiguity.
std::optional<Decomposition> decompose(const UniPoly& f, int e);

}  // namespace splitdyn
