#include "splitdyn/poly.hpp"

#include <algorithm>

#include "splitdyn/bipoly.hpp"
#include "splitdyn/error.hpp"
#include "zpoly.hpp"

namespace splitdyn {

UniPoly::UniPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
  for (auto& c : coeffs_) c.canonicalize();
  trim();
}

UniPoly::UniPoly(std::initializer_list<Rational> coeffs) : coeffs_(coeffs) {
  for (auto& c : coeffs_) c.canonicalize();
  trim();
}

UniPoly UniPoly::constant(const Rational& c) { return UniPoly{c}; }
UniPoly UniPoly::x() { return UniPoly{0, 1}; }

UniPoly UniPoly::monomial(const Rational& c, std::size_t k) {
  std::vector<Rational> v(k + 1, Rational(0));
  v[k] = c;
  return UniPoly(std::move(v));
}

UniPoly UniPoly::affine(const Rational& a, const Rational& b) {
  return UniPoly{b, a};
}

void UniPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational UniPoly::coeff(std::size_t i) const {
  return i < coeffs_.size() ? coeffs_[i] : Rational(0);
}

const Rational& UniPoly::leading() const {
  static const Rational zero(0);
  return coeffs_.empty() ? zero : coeffs_.back();
}

Rational UniPoly::operator()(const Rational& t) const {
  Rational acc = 0;
  for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * t + coeffs_[i];
  return acc;
}

UniPoly UniPoly::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<Rational> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i)
    d[i - 1] = coeffs_[i] * static_cast<unsigned long>(i);
  return UniPoly(std::move(d));
}

UniPoly UniPoly::monic() const {
  if (is_zero()) return {};
  Rational inv = 1 / leading();
  return *this * inv;
}

UniPoly& UniPoly::operator+=(const UniPoly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Rational(0));
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  trim();
  return *this;
}

UniPoly& UniPoly::operator-=(const UniPoly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Rational(0));
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  trim();
  return *this;
}

UniPoly& UniPoly::operator*=(const UniPoly& o) {
  *this = *this * o;
  return *this;
}

UniPoly& UniPoly::operator*=(const Rational& c) {
  if (c == 0) {
    coeffs_.clear();
    return *this;
  }
  for (auto& a : coeffs_) a *= c;
  return *this;
}

UniPoly UniPoly::operator-() const {
  UniPoly r = *this;
  for (auto& a : r.coeffs_) a = -a;
  return r;
}

namespace {

// Splits p into (integer vector, common denominator).
std::pair<detail::ZVec, mpz_class> clear(const std::vector<Rational>& p) {
  mpz_class den = lcm_of_denominators(p.data(), p.data() + p.size());
  detail::ZVec z(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    z[i] = p[i].get_num() * (den / p[i].get_den());
  return {std::move(z), den};
}

}  // namespace

UniPoly operator*(const UniPoly& a, const UniPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (a.coeffs_.size() == 1) return b * a.coeffs_[0];
  if (b.coeffs_.size() == 1) return a * b.coeffs_[0];
  auto [za, da] = clear(a.coeffs_);
  auto [zb, db] = clear(b.coeffs_);
  detail::ZVec zc = detail::mul(za, zb);
  mpz_class den = da * db;
  std::vector<Rational> out(zc.size());
  for (std::size_t i = 0; i < zc.size(); ++i) {
    out[i] = Rational(zc[i], den);
    out[i].canonicalize();
  }
  UniPoly r;
  r.coeffs_ = std::move(out);
  r.trim();
  return r;
}

std::string UniPoly::str() const {
  if (is_zero()) return "0";
  std::string s;
  bool first = true;
  for (std::size_t k = coeffs_.size(); k-- > 0;) {
    const Rational& c = coeffs_[k];
    if (c == 0) continue;
    bool neg = c < 0;
    if (first) {
      if (neg) s += "-";
    } else {
      s += neg ? " - " : " + ";
    }
    first = false;
    Rational a = abs(c);
    if (k == 0) {
      s += a.get_str();
      continue;
    }
    if (a != 1) s += a.get_str() + "*";
    s += "x";
    if (k > 1) s += "^" + std::to_string(k);
  }
  return s;
}

std::pair<UniPoly, UniPoly> divmod(const UniPoly& a, const UniPoly& b) {
  require(!b.is_zero(), "division by the zero polynomial");
  if (a.degree() < b.degree()) return {UniPoly{}, a};
  std::vector<Rational> r = a.coeffs();
  std::size_t db = static_cast<std::size_t>(b.degree());
  std::vector<Rational> q(r.size() - db, Rational(0));
  Rational inv = 1 / b.leading();
  for (std::size_t k = q.size(); k-- > 0;) {
    if (r[k + db] == 0) continue;
    Rational t = r[k + db] * inv;
    q[k] = t;
    for (std::size_t j = 0; j <= db; ++j) r[k + j] -= t * b.coeffs()[j];
  }
  r.resize(db);
  return {UniPoly(std::move(q)), UniPoly(std::move(r))};
}

UniPoly operator%(const UniPoly& a, const UniPoly& b) { return divmod(a, b).second; }

UniPoly gcd(UniPoly a, UniPoly b) {
  while (!b.is_zero()) {
    UniPoly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

UniPoly pow(const UniPoly& p, unsigned k) {
  UniPoly result = UniPoly::constant(1);
  UniPoly base = p;
  while (k) {
    if (k & 1u) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

UniPoly compose(const UniPoly& f, const UniPoly& g) {
  if (f.is_zero()) return {};
  const auto& c = f.coeffs();
  UniPoly acc = UniPoly::constant(c.back());
  for (std::size_t i = c.size() - 1; i-- > 0;) {
    acc = acc * g;
    acc += UniPoly::constant(c[i]);
  }
  return acc;
}

UniPoly iterate(const UniPoly& f, unsigned k, std::size_t degree_cap) {
  if (k == 0) return UniPoly::x();
  std::size_t d = static_cast<std::size_t>(std::max(f.degree(), 0));
  std::size_t total = 1;
  for (unsigned i = 0; i < k && d > 1; ++i) {
    if (total > degree_cap / d)
      fail(ErrorCode::degree_cap, "iterate degree exceeds cap " + std::to_string(degree_cap));
    total *= d;
  }
  UniPoly r = f;
  for (unsigned i = 1; i < k; ++i) r = compose(f, r);
  return r;
}

UniPoly compose_mod(const UniPoly& f, const UniPoly& g, const UniPoly& m) {
  if (f.is_zero()) return {};
  const auto& c = f.coeffs();
  UniPoly gm = g % m;
  UniPoly acc = UniPoly::constant(c.back());
  for (std::size_t i = c.size() - 1; i-- > 0;) {
    acc = (acc * gm) % m;
    acc += UniPoly::constant(c[i]);
  }
  return acc % m;
}

std::optional<UniPoly> left_factor(const UniPoly& target, const UniPoly& v) {
  require(v.degree() >= 1, "left_factor needs a nonconstant right factor");
  if (target.is_zero()) return UniPoly{};
  if (target.degree() % v.degree() != 0) return std::nullopt;
  std::vector<Rational> u;
  UniPoly t = target;
  while (!t.is_zero()) {
    auto [q, r] = divmod(t, v);
    if (r.degree() > 0) return std::nullopt;
    u.push_back(r.coeff(0));
    t = std::move(q);
  }
  return UniPoly(std::move(u));
}

UniPoly parse_poly(std::string_view text) {
  BiPoly b = parse_bipoly(text);
  if (b.deg_y() > 0) throw ParseError(text.find('y'), "unexpected variable 'y'");
  return b.as_univariate();
}

}  // namespace splitdyn
