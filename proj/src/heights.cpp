#include "splitdyn/heights.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>

#include "splitdyn/error.hpp"
#include "splitdyn/integer_factor.hpp"
#include "splitdyn/resultant.hpp"

namespace splitdyn {

double weil_height(const Rational& alpha) {
  if (alpha == 0) return 0.0;
  const BigInt& num = alpha.get_num();
  const BigInt& den = alpha.get_den();
  return cmp(abs(num), den) >= 0 ? log_abs(num) : log_abs(den);
}

double height_tuple(std::span<const Rational> point) {
  double s = 0;
  for (const auto& a : point) s += weil_height(a);
  return s;
}

// Write f = sum c_i x^i, degree d, and h(x) = sum over places v of log+|x|_v.
//
// Upper bound, place by place:
//   archimedean: |f(x)| <= (sum |c_i|) max(1,|x|)^d
//   p-adic:      |f(x)|_p <= max_i |c_i|_p max(1,|x|_p)^d
// Summing, h(f(x)) <= d h(x) + log+(sum |c_i|) + log lcm(den c_i).
//
// Lower bound. With S = sum_{i<d} |c_i| and R = max(1, 2S/|c_d|), for |x| >= R
// one has |f(x)| >= |c_d||x|^d / 2, so
//   log+|f(x)| >= d log+|x| - c_inf,  c_inf = max(d log R, log+(2/|c_d|))
// (for S = 0, c_inf = log+(1/|c_d|)). The same argument at p with the
// ultrametric inequality gives c_p = max(d log R_p, log+ 1/|c_d|_p) where
// R_p = max(1, max_{i<d} |c_i|_p / |c_d|_p), and summing over p,
//   sum_p c_p <= (d+1) log|num c_d| + d log lcm(den c_i, i<d).
// Hence d h(x) - h(f(x)) <= c_inf + sum_p c_p. Both bounds hold for every
// algebraic x (the estimates are local), which the escape and Mahler based
// arguments rely on.
double escape_constant(const UniPoly& f) {
  const int d = f.degree();
  require(d >= 1, "escape_constant needs a nonconstant polynomial");
  const auto& c = f.coeffs();
  const Rational& cd = c[d];
  Rational total = 0, lower_sum = 0;
  for (int i = 0; i <= d; ++i) {
    total += abs(c[i]);
    if (i < d) lower_sum += abs(c[i]);
  }
  auto log_q = [](const Rational& q) { return log_abs(q.get_num()) - log_abs(q.get_den()); };
  auto log_plus = [&](const Rational& q) { return q > 1 ? log_q(q) : 0.0; };

  const BigInt den_all = lcm_of_denominators(c.data(), c.data() + c.size());
  const BigInt den_low = lcm_of_denominators(c.data(), c.data() + d);
  const double upper = log_plus(total) + log_abs(den_all);

  double c_inf;
  Rational acd = abs(cd);
  if (lower_sum == 0) {
    c_inf = log_plus(1 / acd);
  } else {
    Rational r = 2 * lower_sum / acd;
    c_inf = std::max(d * log_plus(r), log_plus(2 / acd));
  }
  const double c_fin = (d + 1) * log_abs(cd.get_num()) + d * log_abs(den_low);
  return std::max(upper, c_inf + c_fin);
}

namespace {

constexpr long kInf = 1L << 50;

long sat_add(long a, long b) { return (a >= kInf || b >= kInf) ? kInf : a + b; }

// Element of Q_p known to relative precision `rel`: p^val * unit (mod p^rel).
// rel = 0 means only |x|_p <= p^-val is known (val = kInf for exact zero).
struct Padic {
  long val = kInf;
  long rel = 0;
  BigInt unit = 0;
};

struct PadicRing {
  BigInt p;
  long digits;

  BigInt ppow(long e) const {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e));
    return r;
  }

  long strip(BigInt& z) const {
    return static_cast<long>(mpz_remove(z.get_mpz_t(), z.get_mpz_t(), p.get_mpz_t()));
  }

  Padic from(const Rational& q) const {
    Padic x;
    if (q == 0) return x;
    BigInt num = q.get_num(), den = q.get_den();
    x.val = strip(num) - strip(den);
    x.rel = digits;
    BigInt mod = ppow(digits), inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
    x.unit = num * inv;
    mpz_mod(x.unit.get_mpz_t(), x.unit.get_mpz_t(), mod.get_mpz_t());
    return x;
  }

  Padic mul(const Padic& a, const Padic& b) const {
    Padic r;
    r.val = sat_add(a.val, b.val);
    if (a.rel == 0 || b.rel == 0) return r;
    r.rel = std::min(a.rel, b.rel);
    BigInt mod = ppow(r.rel);
    r.unit = a.unit * b.unit;
    mpz_mod(r.unit.get_mpz_t(), r.unit.get_mpz_t(), mod.get_mpz_t());
    return r;
  }

  Padic add(const Padic& a, const Padic& b) const {
    const long abs_prec = std::min(sat_add(a.val, a.rel), sat_add(b.val, b.rel));
    Padic zero;
    zero.val = abs_prec;
    long base = kInf;
    if (a.rel > 0) base = std::min(base, a.val);
    if (b.rel > 0) base = std::min(base, b.val);
    if (base >= abs_prec) return zero;
    BigInt s = 0;
    for (const Padic* t : {&a, &b})
      if (t->rel > 0) s += t->unit * ppow(t->val - base);
    BigInt mod = ppow(abs_prec - base);
    mpz_mod(s.get_mpz_t(), s.get_mpz_t(), mod.get_mpz_t());
    if (s == 0) return zero;
    long w = strip(s);
    Padic r;
    r.val = base + w;
    r.rel = abs_prec - r.val;
    BigInt m2 = ppow(r.rel);
    mpz_mod(r.unit.get_mpz_t(), s.get_mpz_t(), m2.get_mpz_t());
    return r;
  }
};

// log+|f^steps(y)|_p at a prime of bad reduction.
double padic_log_plus(const UniPoly& f, const Rational& y, const BigInt& p, unsigned steps) {
  PadicRing ring{p, limits::kPadicTrackingDigits};
  std::vector<Padic> cs;
  for (const auto& c : f.coeffs()) cs.push_back(ring.from(c));
  Padic x = ring.from(y);
  for (unsigned s = 0; s < steps; ++s) {
    Padic acc = cs.back();
    for (std::size_t i = cs.size() - 1; i-- > 0;) {
      acc = ring.mul(acc, x);
      if (f.coeffs()[i] != 0) acc = ring.add(acc, cs[i]);
    }
    x = acc;
  }
  if (x.rel == 0 && x.val < 0)
    fail(ErrorCode::precision, "p-adic tracking at p = " + to_string(p) + " lost all precision");
  return x.val < 0 ? static_cast<double>(-x.val) * log_abs(p) : 0.0;
}

// log+|f^steps(y)| at the archimedean place.
double arch_log_plus(const UniPoly& f, const Rational& y, unsigned steps) {
  const mpfr_prec_t prec = std::min<mpfr_prec_t>(limits::kMpfrPrecisionBits + 64L * steps, 1L << 16);
  const int d = f.degree();
  std::vector<mpfr_t> cs(f.coeffs().size());
  for (std::size_t i = 0; i < cs.size(); ++i) {
    mpfr_init2(cs[i], prec);
    mpfr_set_q(cs[i], f.coeffs()[i].get_mpq_t(), MPFR_RNDN);
  }
  mpfr_t x, acc, lg, lcd;
  mpfr_inits2(prec, x, acc, lg, lcd, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_q(x, y.get_mpq_t(), MPFR_RNDN);
  mpfr_abs(lcd, cs[d], MPFR_RNDN);
  mpfr_log(lcd, lcd, MPFR_RNDN);
  bool log_mode = false;
  // Once |x| > 2^(2^20) the lower coefficients no longer affect the leading
  // 2^20 bits, and log|f(x)| = log|c_d| + d log|x| to that precision.
  constexpr mpfr_exp_t kSwitch = mpfr_exp_t{1} << 20;
  for (unsigned s = 0; s < steps; ++s) {
    if (log_mode) {
      mpfr_mul_si(lg, lg, d, MPFR_RNDN);
      mpfr_add(lg, lg, lcd, MPFR_RNDN);
      continue;
    }
    mpfr_set(acc, cs[d], MPFR_RNDN);
    for (int i = d; i-- > 0;) {
      mpfr_mul(acc, acc, x, MPFR_RNDN);
      mpfr_add(acc, acc, cs[i], MPFR_RNDN);
    }
    mpfr_swap(x, acc);
    if (!mpfr_zero_p(x) && mpfr_get_exp(x) > kSwitch) {
      log_mode = true;
      mpfr_abs(lg, x, MPFR_RNDN);
      mpfr_log(lg, lg, MPFR_RNDN);
    }
  }
  double out;
  if (log_mode) {
    out = mpfr_get_d(lg, MPFR_RNDN);
  } else {
    mpfr_abs(x, x, MPFR_RNDN);
    if (mpfr_cmp_ui(x, 1) <= 0) {
      out = 0;
    } else {
      mpfr_log(x, x, MPFR_RNDN);
      out = mpfr_get_d(x, MPFR_RNDN);
    }
  }
  mpfr_clears(x, acc, lg, lcd, static_cast<mpfr_ptr>(nullptr));
  for (auto& c : cs) mpfr_clear(c);
  return out;
}

std::size_t bit_size(const Rational& q) {
  return mpz_sizeinbase(q.get_num().get_mpz_t(), 2) + mpz_sizeinbase(q.get_den().get_mpz_t(), 2);
}

// Primes where f fails to have good reduction.
std::vector<BigInt> bad_primes(const UniPoly& f) {
  const auto& c = f.coeffs();
  BigInt n = abs(f.leading().get_num()) * lcm_of_denominators(c.data(), c.data() + c.size());
  std::vector<BigInt> out;
  if (n == 1) return out;
  auto fac = factor_integer(n);
  if (!fac.complete)
    fail(ErrorCode::precision, "cannot factor " + to_string(n) + " to locate bad primes");
  for (const auto& [p, e] : fac.factors) out.push_back(p);
  return out;
}

unsigned least_n_for(const PolyDS& ds, double target) {
  const double c = ds.escape_constant();
  if (c == 0) return 0;
  unsigned n = 0;
  double scale = 1;
  while (c / (scale * (ds.degree() - 1)) > target) {
    ++n;
    scale *= ds.degree();
    if (n > 64)
      fail(ErrorCode::precision, "target error below reach; use N <= 64 and accept error " +
                                     std::to_string(c / (scale * (ds.degree() - 1))));
  }
  return n;
}

}  // namespace

double height_of_iterate(const PolyDS& ds, const Rational& alpha, unsigned n, std::size_t exact_bit_budget,
                         std::string* method) {
  const UniPoly& f = ds.f();
  const std::size_t d = static_cast<std::size_t>(ds.degree());
  Rational y = alpha;
  unsigned k = 0;
  while (k < n && bit_size(y) * d <= exact_bit_budget) {
    y = f(y);
    ++k;
  }
  if (method) *method = "exact";
  if (k == n) return weil_height(y);
  if (method) *method = "local";

  const unsigned rest = n - k;
  // At a good prime log+|f(x)|_p = d log+|x|_p exactly.
  auto bad = bad_primes(f);
  BigInt den = y.get_den();
  for (const auto& p : bad) mpz_remove(den.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t());
  double good = den == 1 ? 0.0 : log_abs(den) * std::pow(static_cast<double>(d), rest);
  double total = good + arch_log_plus(f, y, rest);
  for (const auto& p : bad) total += padic_log_plus(f, y, p, rest);
  return total;
}

CanonicalEstimate canonical_height_at(const PolyDS& ds, const Rational& alpha, unsigned n) {
  CanonicalEstimate est;
  if (is_preperiodic_rational(ds, alpha).preperiodic) {
    est.method = "preperiodic";
    return est;
  }
  const double dn = std::pow(static_cast<double>(ds.degree()), n);
  est.n_used = n;
  est.value = height_of_iterate(ds, alpha, n, limits::kExactHeightBitBudget, &est.method) / dn;
  est.error_bound = ds.escape_constant() / (dn * (ds.degree() - 1));
  return est;
}

CanonicalEstimate canonical_height(const PolyDS& ds, const Rational& alpha, double target_error) {
  require(target_error > 0, "canonical_height needs target_error > 0");
  return canonical_height_at(ds, alpha, least_n_for(ds, target_error));
}

nlohmann::json CanonicalEstimate::to_json() const {
  return {{"value", value}, {"error_bound", error_bound}, {"n_used", n_used}, {"method", method}};
}

CanonicalEstimate factor_canonical_height(const PolyDS& ds, const IntPoly& q, unsigned n) {
  require(q.degree() >= 1, "factor_canonical_height needs a nonconstant factor");
  UniPoly push = pushforward(q.to_uni(), ds.f(), n);
  IntPoly prim(IntPoly::from_rational(push).primitive());
  const double dn = std::pow(static_cast<double>(ds.degree()), n);
  CanonicalEstimate est;
  est.n_used = n;
  est.method = "mahler";
  est.value = mahler(prim).measure / (q.degree() * dn);
  // truncation bound plus an allowance for the floating root finder
  est.error_bound = ds.escape_constant() / (dn * (ds.degree() - 1)) + 1e-12 * std::max(1.0, est.value);
  return est;
}

CanonicalEstimate green_canonical_height(const PolyDS& ds, const IntPoly& q, double target_error) {
  require(q.degree() >= 1, "green_canonical_height needs a nonconstant factor");
  require(target_error > 0, "green_canonical_height needs target_error > 0");
  const UniPoly& f = ds.f();
  const int d = ds.degree();
  for (const auto& c : f.coeffs())
    if (c.get_den() != 1)
      fail(ErrorCode::unsupported, "Green-function heights need integer coefficients in f");
  if (abs(f.leading()) != 1) fail(ErrorCode::unsupported, "Green-function heights need a unit leading coefficient");
  // f is monic up to sign with integer coefficients, so every finite place
  // contributes log+|.|_p, which sums to log|lead q| over the roots.
  std::vector<long double> a;
  long double tail = 0;
  for (const auto& c : f.coeffs()) a.push_back(static_cast<long double>(c.get_d()));
  for (int i = 0; i < d; ++i) tail += std::abs(a[i]);
  // eta(r) = sum_{i<d} |a_i| r^{i-d}; for |z| >= R, eta <= 1/2 and |f(z)| >= 2|z|
  auto eta = [&](long double r) {
    long double e = 0;
    for (int i = 0; i < d; ++i) e += std::abs(a[i]) * std::pow(r, static_cast<long double>(i - d));
    return e;
  };
  const long double R = std::max(2.0L, 2 * tail);
  const long double g_max = std::log(R) + std::log(2.0L) / (d - 1);  // max of G on |z| <= R
  const unsigned n_max = static_cast<unsigned>(std::ceil(std::log(g_max / target_error) / std::log(d))) + 1;

  IntPoly prim(q.primitive());
  auto rep = mahler(prim);
  long double value = log_abs(prim.leading()), err = 0;
  unsigned n_used = 0;
  for (const auto& z0 : rep.roots) {
    std::complex<long double> z = z0;
    unsigned n = 0;
    for (; n < n_max && std::abs(z) <= R; ++n) {
      std::complex<long double> w = a[d];
      for (int i = d; i-- > 0;) w = w * z + a[i];
      z = w;
    }
    // once past R the orbit runs off monotonically; go far enough that eta
    // is negligible
    for (int extra = 0; std::abs(z) > R && std::abs(z) < 1e30L && extra < 64; ++extra, ++n) {
      std::complex<long double> w = a[d];
      for (int i = d; i-- > 0;) w = w * z + a[i];
      z = w;
    }
    const long double dn = std::pow(static_cast<long double>(d), static_cast<long double>(n));
    n_used = std::max(n_used, n);
    if (std::abs(z) > R) {
      value += std::log(std::abs(z)) / dn;
      err += -std::log(1 - eta(std::abs(z))) / (dn * (d - 1));
    } else {
      // G lies in [0, g_max / d^n]
      value += g_max / (2 * dn);
      err += g_max / (2 * dn);
    }
  }
  CanonicalEstimate est;
  est.method = "green";
  est.n_used = n_used;
  est.value = static_cast<double>(value / q.degree());
  // allowance for the floating root finder and the iteration
  est.error_bound = static_cast<double>(err / q.degree()) + 1e-12 * std::max(1.0, est.value);
  return est;
}

SymmetryAudit symmetry_height_audit(const PolyDS& ds, const Affine& l, std::span<const Rational> samples,
                                    double target_error, unsigned n_max) {
  const UniPoly lp = l.poly();
  bool ok = false;
  for (unsigned n = 1; n <= n_max && !ok; ++n) {
    UniPoly fn = ds.iterate(n);
    UniPoly fl = compose(fn, lp);
    ok = fl == compose(lp, fn) || fl == fn;
  }
  require(ok, "symmetry_height_audit needs L commuting with an iterate (or absorbed by one)");
  SymmetryAudit audit;
  for (const auto& a : samples) {
    auto e1 = canonical_height(ds, a, target_error);
    auto e2 = canonical_height(ds, l(a), target_error);
    double disc = std::abs(e1.value - e2.value);
    double allowed = e1.error_bound + e2.error_bound;
    audit.max_discrepancy = std::max(audit.max_discrepancy, disc);
    audit.max_allowed = std::max(audit.max_allowed, allowed);
    // 1e-12 relative slack covers the final rounding to double
    if (disc > allowed + 1e-12 * std::max(1.0, e1.value)) audit.within_bounds = false;
  }
  return audit;
}

nlohmann::json SymmetryAudit::to_json() const {
  return {{"max_discrepancy", max_discrepancy}, {"max_allowed", max_allowed}, {"within_bounds", within_bounds}};
}

}  // namespace splitdyn
