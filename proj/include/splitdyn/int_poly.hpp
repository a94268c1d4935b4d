#pragma once

#include <vector>

#include "splitdyn/poly.hpp"
#include "splitdyn/rational.hpp"

namespace splitdyn {

/// Primitive integer polynomial together with the positive integer content
/// that was divided out. content * primitive() reproduces the input.
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<BigInt> coeffs);

  /// Clears denominators of q (multiplying by a positive integer) and splits
  /// the result into content and primitive part.
  static IntPoly from_rational(const UniPoly& q);

  const std::vector<BigInt>& primitive() const { return coeffs_; }
  const BigInt& content() const { return content_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const BigInt& leading() const { return coeffs_.back(); }

  UniPoly to_uni() const;          // primitive part over Q
  UniPoly to_uni_full() const;     // content * primitive part
  std::string str() const { return to_uni().str(); }

  friend bool operator==(const IntPoly& a, const IntPoly& b) {
    return a.content_ == b.content_ && a.coeffs_ == b.coeffs_;
  }

 private:
  std::vector<BigInt> coeffs_;
  BigInt content_ = 0;
};

}  // namespace splitdyn
