#pragma once

// Internal helpers on integer coefficient vectors (lowest degree first).

#include <gmpxx.h>

#include <vector>

namespace splitdyn::detail {

using ZVec = std::vector<mpz_class>;

void trim(ZVec& v);
ZVec mul(const ZVec& a, const ZVec& b);
mpz_class content(const ZVec& v);
// Result is exact; caller guarantees b divides a over Z. Returns false when
// the division leaves a remainder or a non-integral quotient.
bool exact_div(const ZVec& a, const ZVec& b, ZVec& quotient);

}  // namespace splitdyn::detail
