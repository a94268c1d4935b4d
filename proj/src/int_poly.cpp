#include "splitdyn/int_poly.hpp"

#include "zpoly.hpp"

namespace splitdyn {

IntPoly::IntPoly(std::vector<BigInt> coeffs) : coeffs_(std::move(coeffs)) {
  detail::trim(coeffs_);
  content_ = detail::content(coeffs_);
  if (content_ > 1)
    for (auto& c : coeffs_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), content_.get_mpz_t());
}

IntPoly IntPoly::from_rational(const UniPoly& q) {
  const auto& c = q.coeffs();
  BigInt den = lcm_of_denominators(c.data(), c.data() + c.size());
  std::vector<BigInt> z(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) z[i] = c[i].get_num() * (den / c[i].get_den());
  return IntPoly(std::move(z));
}

UniPoly IntPoly::to_uni() const {
  std::vector<Rational> v(coeffs_.begin(), coeffs_.end());
  return UniPoly(std::move(v));
}

UniPoly IntPoly::to_uni_full() const { return to_uni() * Rational(content_); }

}  // namespace splitdyn
