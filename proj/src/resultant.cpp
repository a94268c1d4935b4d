#include "splitdyn/resultant.hpp"

#include "splitdyn/error.hpp"

namespace splitdyn {

Rational resultant(const UniPoly& a, const UniPoly& b) {
  if (a.is_zero() || b.is_zero()) return 0;
  int m = a.degree(), n = b.degree();
  if (n == 0) {
    Rational r = 1;
    for (int i = 0; i < m; ++i) r *= b.leading();
    return r;
  }
  if (m == 0) {
    Rational r = 1;
    for (int i = 0; i < n; ++i) r *= a.leading();
    return r;
  }
  UniPoly r = a % b;
  if (r.is_zero()) return 0;
  Rational s = ((m * n) % 2 == 0) ? 1 : -1;
  Rational lb = 1;
  for (int i = 0; i < m - r.degree(); ++i) lb *= b.leading();
  return s * lb * resultant(b, r);
}

namespace {

// Characteristic polynomial of multiplication by h in Q[y]/(q), via traces
// and Newton's identities. q monic of degree n, deg h < n.
UniPoly charpoly_mod(const UniPoly& q, const UniPoly& h) {
  const int n = q.degree();
  // power sums p_j of the roots of q, j = 0 .. n-1
  std::vector<Rational> p(static_cast<std::size_t>(n), Rational(0));
  p[0] = n;
  auto c = [&](int i) { return q.coeff(static_cast<std::size_t>(i)); };
  for (int k = 1; k < n; ++k) {
    Rational s = Rational(k) * c(n - k);
    for (int i = 1; i < k; ++i) s += c(n - i) * p[static_cast<std::size_t>(k - i)];
    p[static_cast<std::size_t>(k)] = -s;
  }
  auto trace = [&](const UniPoly& r) {
    Rational t = 0;
    for (std::size_t j = 0; j < r.coeffs().size(); ++j) t += r.coeffs()[j] * p[j];
    return t;
  };
  // s_k = Tr(h^k)
  std::vector<Rational> s(static_cast<std::size_t>(n) + 1, Rational(0));
  UniPoly hk = UniPoly::constant(1);
  for (int k = 1; k <= n; ++k) {
    hk = (hk * h) % q;
    s[static_cast<std::size_t>(k)] = trace(hk);
  }
  // elementary symmetric functions of the images
  std::vector<Rational> e(static_cast<std::size_t>(n) + 1, Rational(0));
  e[0] = 1;
  for (int k = 1; k <= n; ++k) {
    Rational acc = 0;
    for (int i = 1; i <= k; ++i) {
      Rational term = e[static_cast<std::size_t>(k - i)] * s[static_cast<std::size_t>(i)];
      if (i % 2 == 1) acc += term; else acc -= term;
    }
    e[static_cast<std::size_t>(k)] = acc / k;
  }
  std::vector<Rational> out(static_cast<std::size_t>(n) + 1, Rational(0));
  for (int k = 0; k <= n; ++k) {
    Rational v = e[static_cast<std::size_t>(k)];
    out[static_cast<std::size_t>(n - k)] = (k % 2 == 0) ? v : Rational(-v);
  }
  return UniPoly(std::move(out));
}

}  // namespace

UniPoly pushforward_by(const UniPoly& q, const UniPoly& g) {
  require(!q.is_zero(), "pushforward: zero polynomial");
  if (q.degree() == 0) return UniPoly::constant(1);
  UniPoly qm = q.monic();
  UniPoly h = g % qm;
  return charpoly_mod(qm, h);
}

UniPoly pushforward(const UniPoly& q, const UniPoly& f, unsigned N) {
  require(!q.is_zero(), "pushforward: zero polynomial");
  if (q.degree() == 0) return UniPoly::constant(1);
  UniPoly qm = q.monic();
  UniPoly h = UniPoly::x() % qm;
  for (unsigned i = 0; i < N; ++i) h = compose_mod(f, h, qm);
  return charpoly_mod(qm, h);
}

}  // namespace splitdyn
