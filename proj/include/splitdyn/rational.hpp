#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace splitdyn {

using BigInt = mpz_class;
// mpq_class keeps numerator and denominator coprime with a positive
// denominator after every operation.
using Rational = mpq_class;

Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
std::string to_string(const BigInt& z);

// Natural log of |z| for z != 0, accurate for arbitrarily large z.
double log_abs(const BigInt& z);

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

BigInt lcm_of_denominators(const Rational* first, const Rational* last);

}  // namespace splitdyn
