#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "splitdyn/poly.hpp"

namespace splitdyn {

/// Bivariate polynomial F(x, y); coeff(i, j) multiplies x^i y^j.
class BiPoly {
 public:
  BiPoly() = default;
  /// rows[i][j] is the coefficient of x^i y^j.
  explicit BiPoly(std::vector<std::vector<Rational>> rows);

  static BiPoly constant(const Rational& c);
  static BiPoly var_x();
  static BiPoly var_y();

  int deg_x() const;  // -1 for zero
  int deg_y() const;
  bool is_zero() const { return deg_x() < 0; }
  Rational coeff(std::size_t i, std::size_t j) const;
  const std::vector<std::vector<Rational>>& rows() const { return rows_; }

  BiPoly& operator+=(const BiPoly& o);
  BiPoly& operator-=(const BiPoly& o);
  friend BiPoly operator+(BiPoly a, const BiPoly& b) { return a += b; }
  friend BiPoly operator-(BiPoly a, const BiPoly& b) { return a -= b; }
  friend BiPoly operator*(const BiPoly& a, const BiPoly& b);
  BiPoly scaled(const Rational& c) const;

  /// F(x, g(x))
  UniPoly substitute_y(const UniPoly& g) const;
  /// Nonzero only when F does not involve y.
  UniPoly as_univariate() const;

  friend bool operator==(const BiPoly& a, const BiPoly& b) {
    return a.rows_ == b.rows_;
  }
  std::string str() const;

 private:
  void normalize();
  std::vector<std::vector<Rational>> rows_;
};

/// Parses integer/rational coefficient expressions in x and y with + - * /
/// (division by constants only), ^ with nonnegative integer exponents, and
/// parentheses.
BiPoly parse_bipoly(std::string_view text);

}  // namespace splitdyn
