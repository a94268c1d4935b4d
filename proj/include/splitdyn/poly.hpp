#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "splitdyn/constants.hpp"
#include "splitdyn/rational.hpp"

namespace splitdyn {

/// Dense univariate polynomial over Q, coefficients lowest degree first.
/// The stored vector never carries a zero leading coefficient; the zero
/// polynomial has no coefficients and degree -1.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Rational> coeffs);
  UniPoly(std::initializer_list<Rational> coeffs);

  static UniPoly constant(const Rational& c);
  static UniPoly x();
  static UniPoly monomial(const Rational& c, std::size_t k);
  /// a*X + b
  static UniPoly affine(const Rational& a, const Rational& b);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const { return coeffs_.size() <= 1; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  /// Coefficient of X^i (zero past the degree).
  Rational coeff(std::size_t i) const;
  const Rational& leading() const;

  Rational operator()(const Rational& t) const;
  UniPoly derivative() const;
  UniPoly monic() const;

  UniPoly& operator+=(const UniPoly& o);
  UniPoly& operator-=(const UniPoly& o);
  UniPoly& operator*=(const UniPoly& o);
  UniPoly& operator*=(const Rational& c);

  friend UniPoly operator+(UniPoly a, const UniPoly& b) { return a += b; }
  friend UniPoly operator-(UniPoly a, const UniPoly& b) { return a -= b; }
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator*(UniPoly a, const Rational& c) { return a *= c; }
  friend UniPoly operator*(const Rational& c, UniPoly a) { return a *= c; }
  UniPoly operator-() const;

  friend bool operator==(const UniPoly& a, const UniPoly& b) {
    return a.coeffs_ == b.coeffs_;
  }

  std::string str() const;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

std::pair<UniPoly, UniPoly> divmod(const UniPoly& a, const UniPoly& b);
UniPoly operator%(const UniPoly& a, const UniPoly& b);
/// Monic gcd; gcd(0, 0) = 0.
UniPoly gcd(UniPoly a, UniPoly b);
UniPoly pow(const UniPoly& p, unsigned k);

/// f o g
UniPoly compose(const UniPoly& f, const UniPoly& g);
/// f^k under composition, f^0 = X. Throws degree_cap when deg(f)^k > cap.
UniPoly iterate(const UniPoly& f, unsigned k,
                std::size_t degree_cap = limits::kIterateDegreeCap);
/// f o g reduced modulo m, without forming f o g.
UniPoly compose_mod(const UniPoly& f, const UniPoly& g, const UniPoly& m);

/// u with u o v = target when one exists (v nonconstant).
std::optional<UniPoly> left_factor(const UniPoly& target, const UniPoly& v);

UniPoly parse_poly(std::string_view text);

}  // namespace splitdyn
