#include "splitdyn/decompose.hpp"

#include "splitdyn/error.hpp"

namespace splitdyn {

std::optional<Decomposition> decompose(const UniPoly& f, int e) {
  const int n = f.degree();
  require(e >= 2 && e < n && n % e == 0,
          "decompose: need 2 <= e < deg f with e | deg f (deg f = " + std::to_string(n) +
              ", e = " + std::to_string(e) + ")");
  const int r = n / e;
  UniPoly fm = f.monic();
  // For monic u, f = v^r + (terms of degree <= n - e), so the top e - 1
  // coefficients below the leading one determine v one coefficient at a time.
  std::vector<Rational> v(static_cast<std::size_t>(e) + 1, Rational(0));
  v[static_cast<std::size_t>(e)] = 1;
  for (int j = 1; j < e; ++j) {
    UniPoly vr = pow(UniPoly(v), static_cast<unsigned>(r));
    Rational target = fm.coeff(static_cast<std::size_t>(n - j));
    Rational have = vr.coeff(static_cast<std::size_t>(n - j));
    v[static_cast<std::size_t>(e - j)] = (target - have) / r;
  }
  UniPoly inner(std::move(v));
  auto outer = left_factor(f, inner);
  if (!outer) return std::nullopt;
  if (compose(*outer, inner) != f) return std::nullopt;
  return Decomposition{*outer, inner};
}

}  // namespace splitdyn
