#include <algorithm>
#include <cfloat>
#include <memory>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>

#include <boost/multiprecision/complex_adaptor.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include "splitdyn/error.hpp"
#include "splitdyn/heights.hpp"
#include "splitdyn/poly_factor.hpp"

namespace splitdyn {

namespace {

using cld = std::complex<long double>;
namespace bmp = boost::multiprecision;
using mpr = bmp::number<bmp::mpfr_float_backend<0>, bmp::et_off>;
using mpc = bmp::number<bmp::complex_adaptor<bmp::mpfr_float_backend<0>>, bmp::et_off>;

// |c| as m * 2^e with 64 significant bits kept.
long double scaled_abs(const BigInt& c, long shift) {
  BigInt a = abs(c);
  if (a == 0) return 0.0L;
  long bits = static_cast<long>(mpz_sizeinbase(a.get_mpz_t(), 2));
  long drop = std::max(0L, bits - 64);
  BigInt top = a >> drop;
  long double m = static_cast<long double>(mpz_get_ui(top.get_mpz_t()));
  return std::ldexp(m, static_cast<int>(drop - shift));
}

// Points (i, log|b_i|) and their upper convex hull give circle radii for the
// starting approximations.
std::vector<cld> initial_guesses(const std::vector<long double>& mag, std::mt19937_64& rng) {
  const int n = static_cast<int>(mag.size()) - 1;
  std::vector<int> idx;
  std::vector<long double> lg(mag.size());
  for (int i = 0; i <= n; ++i) lg[i] = mag[i] > 0 ? std::log(mag[i]) : -INFINITY;
  for (int i = 0; i <= n; ++i) {
    if (mag[i] == 0) continue;
    while (idx.size() >= 2) {
      int a = idx[idx.size() - 2], b = idx.back();
      // drop b when it lies on or below segment a-i
      if ((lg[b] - lg[a]) * (i - a) <= (lg[i] - lg[a]) * (b - a))
        idx.pop_back();
      else
        break;
    }
    idx.push_back(i);
  }
  std::uniform_real_distribution<long double> unif(0.0L, 1.0L);
  const long double two_pi = 2 * std::numbers::pi_v<long double>;
  std::vector<cld> z;
  for (std::size_t h = 0; h + 1 < idx.size(); ++h) {
    int i = idx[h], j = idx[h + 1], cnt = j - i;
    long double r = std::exp((lg[i] - lg[j]) / cnt);
    long double sigma = two_pi * unif(rng);
    for (int k = 0; k < cnt; ++k) {
      long double ang = two_pi * k / cnt + two_pi * i / n + sigma;
      long double rr = r * (1 + 0.01L * (unif(rng) - 0.5L));
      z.emplace_back(rr * std::cos(ang), rr * std::sin(ang));
    }
  }
  return z;
}

struct Eval {
  cld newton;        // p(z)/p'(z)
  long double rel;   // |p(z)| / sum |b_i||z|^i
};

// For |z| > 1 the reversed polynomial in w = 1/z is used so that nothing
// overflows.
Eval evaluate(const std::vector<cld>& b, const std::vector<long double>& mag, const cld& z) {
  const std::size_t n = b.size() - 1;
  Eval e{};
  if (std::abs(z) <= 1) {
    cld p = b[n], dp = 0;
    long double s = mag[n], az = std::abs(z);
    for (std::size_t i = n; i-- > 0;) {
      dp = dp * z + p;
      p = p * z + b[i];
      s = s * az + mag[i];
    }
    e.newton = p / dp;
    e.rel = s > 0 ? std::abs(p) / s : 0;
    if (dp == cld(0)) e.newton = p == cld(0) ? cld(0) : cld(1e-3L);
    return e;
  }
  cld w = 1.0L / z;
  cld r = b[0], dr = 0;
  long double s = mag[0], aw = std::abs(w);
  for (std::size_t i = 1; i <= n; ++i) {
    dr = dr * w + r;
    r = r * w + b[i];
    s = s * aw + mag[i];
  }
  cld den = static_cast<long double>(n) - w * dr / r;
  e.newton = r == cld(0) ? cld(0) : z / den;
  e.rel = s > 0 ? std::abs(r) / s : 0;
  return e;
}

// Long double Aberth on an integer polynomial with nonzero constant term and
// degree >= 2. Only a starting point for polish().
std::vector<cld> aberth_roots(const std::vector<BigInt>& red, std::mt19937_64& rng, unsigned& iterations) {
  const std::size_t n = red.size() - 1;
  long emax = 0;
  for (const auto& c : red)
    if (c != 0) emax = std::max(emax, static_cast<long>(mpz_sizeinbase(c.get_mpz_t(), 2)));
  std::vector<cld> b(n + 1);
  std::vector<long double> mag(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    mag[i] = scaled_abs(red[i], emax);
    b[i] = red[i] < 0 ? -mag[i] : mag[i];
  }
  std::vector<cld> z = initial_guesses(mag, rng);
  std::vector<bool> done(n, false);
  const long double tol = 8 * LDBL_EPSILON;
  int it = 0;
  for (; it < limits::kAberthMaxIterations; ++it) {
    bool all = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      Eval e = evaluate(b, mag, z[i]);
      cld s = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) s += 1.0L / (z[i] - z[j]);
      cld w = e.newton / (1.0L - e.newton * s);
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) w = 0;
      z[i] -= w;
      // a residual at rounding level cannot guide further steps
      if (std::abs(w) <= tol * std::abs(z[i]) || e.newton == cld(0) || e.rel < 4 * n * LDBL_EPSILON)
        done[i] = true;
      else
        all = false;
    }
    if (all) break;
  }
  iterations = std::max(iterations, static_cast<unsigned>(it + 1));
  for (auto& r : z)
    if (!std::isfinite(r.real()) || !std::isfinite(r.imag())) r = cld(0.5L, 0.5L);
  return z;
}

struct RootSet {
  std::vector<cld> roots;
  long double logplus = 0;  // sum of log+|root|
  long double error = 0;    // bound on |logplus - true value|
  long double residual = 0;
};

long double logplus(const mpr& x) { return x > 1 ? static_cast<long double>(bmp::log(x)) : 0.0L; }

// p and p' at a long double point, evaluated in MPFR. The point converts
// exactly, so the only error is Horner rounding, bounded by
// 8(n+1) 2^-prec sum |c_i||z|^i.
class MpEval {
 public:
  explicit MpEval(const std::vector<BigInt>& a) : a_(a) {
    for (auto* v : vars()) mpfr_init2(*v, 64);
  }
  ~MpEval() {
    for (auto* v : vars()) mpfr_clear(*v);
    clear_coefficients();
  }
  MpEval(const MpEval&) = delete;
  MpEval& operator=(const MpEval&) = delete;

  void set_precision(long bits) {
    prec_ = bits;
    for (auto* v : vars()) mpfr_set_prec(*v, bits);
    clear_coefficients();
    c_.resize(a_.size());
    for (std::size_t i = 0; i < a_.size(); ++i) {
      mpfr_init2(&c_[i], bits);
      mpfr_set_z(&c_[i], a_[i].get_mpz_t(), MPFR_RNDN);
    }
  }
  long precision() const { return prec_; }

  struct Out {
    cld newton;             // p/p'
    long double rel = 0;    // |p| / sum |c_i||z|^i
    long double log_p = 0;  // log of |p| plus the rounding bound
    bool noisy = false;     // rounding bound exceeds |p|/16
    bool zero = false;
  };

  Out at(const cld& z) {
    const std::size_t n = a_.size() - 1;
    mpfr_set_ld(x_, z.real(), MPFR_RNDN);
    mpfr_set_ld(y_, z.imag(), MPFR_RNDN);
    mpfr_set_ld(az_, std::abs(z) * (1 + 4 * LDBL_EPSILON), MPFR_RNDU);
    mpfr_set(pr_, &c_[n], MPFR_RNDN);
    mpfr_set_ui(pi_, 0, MPFR_RNDN);
    mpfr_set_ui(dr_, 0, MPFR_RNDN);
    mpfr_set_ui(di_, 0, MPFR_RNDN);
    mpfr_abs(s_, &c_[n], MPFR_RNDU);
    for (std::size_t k = n; k-- > 0;) {
      // dp = dp z + p
      mpfr_fmms(t_, dr_, x_, di_, y_, MPFR_RNDN);
      mpfr_fmma(di_, dr_, y_, di_, x_, MPFR_RNDN);
      mpfr_add(dr_, t_, pr_, MPFR_RNDN);
      mpfr_add(di_, di_, pi_, MPFR_RNDN);
      // p = p z + c_k
      mpfr_fmms(t_, pr_, x_, pi_, y_, MPFR_RNDN);
      mpfr_fmma(pi_, pr_, y_, pi_, x_, MPFR_RNDN);
      mpfr_add(pr_, t_, &c_[k], MPFR_RNDN);
      mpfr_mul(s_, s_, az_, MPFR_RNDU);
      mpfr_abs(t_, &c_[k], MPFR_RNDU);
      mpfr_add(s_, s_, t_, MPFR_RNDU);
    }
    Out o;
    mpfr_hypot(t_, pr_, pi_, MPFR_RNDU);
    if (mpfr_zero_p(t_)) {
      o.zero = true;
      return o;
    }
    // rounding bound into s_
    mpfr_mul_ui(s_, s_, 8 * (n + 1), MPFR_RNDU);
    mpfr_div_2si(s_, s_, prec_, MPFR_RNDU);
    mpfr_mul_ui(u_, s_, 16, MPFR_RNDU);
    o.noisy = mpfr_cmp(u_, t_) > 0;
    mpfr_add(u_, t_, s_, MPFR_RNDU);
    mpfr_log(u_, u_, MPFR_RNDU);
    o.log_p = mpfr_get_ld(u_, MPFR_RNDU);
    mpfr_mul_2si(s_, s_, prec_, MPFR_RNDU);
    mpfr_div_ui(s_, s_, 8 * (n + 1), MPFR_RNDU);
    mpfr_div(u_, t_, s_, MPFR_RNDN);
    o.rel = mpfr_get_ld(u_, MPFR_RNDN);
    // newton = p / dp
    mpfr_sqr(u_, dr_, MPFR_RNDN);
    mpfr_fma(u_, di_, di_, u_, MPFR_RNDN);
    if (mpfr_zero_p(u_)) {
      o.newton = cld(1e-3L);
      return o;
    }
    mpfr_fmma(t_, pr_, dr_, pi_, di_, MPFR_RNDN);
    mpfr_div(t_, t_, u_, MPFR_RNDN);
    long double nr = mpfr_get_ld(t_, MPFR_RNDN);
    mpfr_fmms(t_, pi_, dr_, pr_, di_, MPFR_RNDN);
    mpfr_div(t_, t_, u_, MPFR_RNDN);
    o.newton = cld(nr, mpfr_get_ld(t_, MPFR_RNDN));
    return o;
  }

 private:
  void clear_coefficients() {
    for (auto& c : c_) mpfr_clear(&c);
    c_.clear();
  }
  std::vector<mpfr_t*> vars() { return {&x_, &y_, &az_, &pr_, &pi_, &dr_, &di_, &s_, &t_, &u_}; }

  const std::vector<BigInt>& a_;
  std::vector<__mpfr_struct> c_;
  long prec_ = 64;
  mpfr_t x_, y_, az_, pr_, pi_, dr_, di_, s_, t_, u_;
};

// Aberth with long double roots and MPFR Newton corrections, then a
// certificate from Weierstrass inclusion disks: when the disks
// D(z_i, n|p(z_i)| / |a_n prod_{j != i}(z_i - z_j)|) are pairwise disjoint
// each holds exactly one root. nullopt when no certificate is reached.
std::optional<RootSet> hybrid_roots(const std::vector<BigInt>& a, std::vector<cld> z, unsigned& iterations) {
  const std::size_t n = a.size() - 1;
  long cbits = 0;
  for (const auto& c : a) cbits = std::max(cbits, static_cast<long>(mpz_sizeinbase(c.get_mpz_t(), 2)));
  // A ladder of evaluators with growing precision. Each root climbs only
  // as far as its rounding noise demands, so early sweeps far from the
  // roots stay cheap.
  const long prec_cap = 4 * (cbits + 64 * static_cast<long>(n)) + 1024;
  std::vector<std::unique_ptr<MpEval>> ladder;
  auto level = [&](std::size_t k) -> MpEval& {
    while (ladder.size() <= k) {
      ladder.push_back(std::make_unique<MpEval>(a));
      ladder.back()->set_precision(ladder.size() == 1 ? 128 : ladder[ladder.size() - 2]->precision() * 3 / 2);
    }
    return *ladder[k];
  };
  std::vector<std::size_t> lv(n, 0);
  const long double log_lead = log_abs(a.back());
  // level 0 is plain long double, good while the residual is far above
  // rounding
  std::vector<cld> b(n + 1);
  std::vector<long double> mag(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    mag[k] = scaled_abs(a[k], cbits);
    b[k] = a[k] < 0 ? -mag[k] : mag[k];
  }
  auto eval = [&](std::size_t i, bool need_bound) {
    if (lv[i] == 0) {
      if (!need_bound) {
        Eval e = evaluate(b, mag, z[i]);
        if (e.rel > 64 * n * LDBL_EPSILON) {
          MpEval::Out o;
          o.newton = e.newton;
          o.rel = e.rel;
          return o;
        }
      }
      lv[i] = 1;
    }
    auto e = level(lv[i] - 1).at(z[i]);
    while (e.noisy && level(lv[i] - 1).precision() < prec_cap) e = level(lv[i]++).at(z[i]);
    return e;
  };
  for (int round = 0; round < 3; ++round) {
    std::vector<bool> done(n, false);
    for (int it = 0; it < limits::kAberthMaxIterations; ++it) {
      bool all = true;
      for (std::size_t i = 0; i < n; ++i) {
        if (done[i]) continue;
        auto e = eval(i, false);
        if (e.zero || e.noisy) {
          done[i] = true;
          continue;
        }
        cld s = 0;
        for (std::size_t j = 0; j < n; ++j)
          if (j != i) s += 1.0L / (z[i] - z[j]);
        cld w = e.newton / (1.0L - e.newton * s);
        if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) w = 0;
        z[i] -= w;
        if (std::abs(w) <= 2 * LDBL_EPSILON * std::abs(z[i]))
          done[i] = true;
        else
          all = false;
      }
      iterations = std::max(iterations, static_cast<unsigned>(it + 1));
      if (all) break;
    }
    RootSet rs;
    std::vector<long double> rad(n);
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      auto e = eval(i, true);
      long double log_prod = log_lead;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) log_prod += std::log(std::abs(z[i] - z[j]));
      if (e.noisy || !std::isfinite(log_prod)) {
        ok = false;
        break;
      }
      // the rounding of |z| and of the logs is absorbed by the 1e-15 slack
      rad[i] = e.zero ? 0.0L : n * std::exp(e.log_p - log_prod) * (1 + 1e-15L);
      rad[i] += 8 * LDBL_EPSILON * std::abs(z[i]);
      rs.residual = std::max(rs.residual, e.rel);
      const long double mod = std::abs(z[i]);
      rs.logplus += mod > 1 ? std::log(mod) : 0.0L;
      const long double hi = mod + rad[i], lo = mod - rad[i];
      rs.error += (hi > 1 ? std::log(hi) : 0.0L) - (lo > 1 ? std::log(lo) : 0.0L);
    }
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = i + 1; j < n && ok; ++j)
        if (std::abs(z[i] - z[j]) <= rad[i] + rad[j]) ok = false;
    if (ok && rs.error <= limits::kMahlerErrorTarget) {
      rs.roots = z;
      return rs;
    }
    for (auto& l : lv) l += 2;
  }
  return std::nullopt;
}

// Multiprecision Aberth started from z, certified by Weierstrass inclusion
// disks: when the disks D(z_i, n|p(z_i)| / |a_n prod_{j != i}(z_i - z_j)|)
// are pairwise disjoint each holds exactly one root. Precision doubles until
// the induced bound on sum log+|root| is below the target.
RootSet polish(const std::vector<BigInt>& a, std::vector<cld> z0, unsigned& iterations) {
  const std::size_t n = a.size() - 1;
  long cbits = 0;
  for (const auto& c : a) cbits = std::max(cbits, static_cast<long>(mpz_sizeinbase(c.get_mpz_t(), 2)));
  long bits = cbits + 128;
  std::vector<mpc> z;
  for (int round = 0; round < 4; ++round, bits *= 2) {
    mpr::default_precision(static_cast<unsigned>(bits * 0.30103) + 2);
    std::vector<mpr> c(n + 1);
    for (std::size_t i = 0; i <= n; ++i) mpfr_set_z(c[i].backend().data(), a[i].get_mpz_t(), MPFR_RNDN);
    if (z.empty()) {
      for (const auto& w : z0) z.emplace_back(mpr(w.real()), mpr(w.imag()));
    } else {
      for (auto& w : z) w = mpc(mpr(w.real()), mpr(w.imag()));  // re-round at the new precision
    }
    const mpr quiet = bmp::ldexp(mpr(1), static_cast<int>(-bits / 2));
    bool converged = false;
    for (int it = 0; it <= 80; ++it) {
      // certification
      RootSet rs;
      std::vector<mpr> rad(n), mod(n);
      bool ok = true;
      for (std::size_t i = 0; i < n && ok; ++i) {
        mpc p = c[n];
        mpr s = bmp::abs(c[n]);
        mod[i] = bmp::abs(z[i]);
        for (std::size_t k = n; k-- > 0;) {
          p = p * z[i] + c[k];
          s = s * mod[i] + bmp::abs(c[k]);
        }
        mpc prod = c[n];
        for (std::size_t j = 0; j < n; ++j)
          if (j != i) prod *= z[i] - z[j];
        if (prod == mpc(0)) {
          ok = false;
          break;
        }
        rad[i] = static_cast<mpr>(n) * bmp::abs(p) / bmp::abs(prod);
        rs.residual = std::max(rs.residual, s > 0 ? static_cast<long double>(bmp::abs(p) / s) : 0.0L);
        mpr lo = mod[i] - rad[i];
        rs.logplus += logplus(mod[i]);
        rs.error += logplus(mod[i] + rad[i]) - (lo > 0 ? logplus(lo) : 0.0L);
      }
      for (std::size_t i = 0; i < n && ok; ++i)
        for (std::size_t j = i + 1; j < n && ok; ++j)
          if (bmp::abs(z[i] - z[j]) <= rad[i] + rad[j]) ok = false;
      if (ok && rs.error <= limits::kMahlerErrorTarget) {
        for (const auto& w : z)
          rs.roots.emplace_back(static_cast<long double>(w.real()), static_cast<long double>(w.imag()));
        return rs;
      }
      if (converged) break;
      // one Gauss-Seidel Aberth sweep
      mpr worst = 0;
      for (std::size_t i = 0; i < n; ++i) {
        mpc p = c[n], dp = 0;
        for (std::size_t k = n; k-- > 0;) {
          dp = dp * z[i] + p;
          p = p * z[i] + c[k];
        }
        if (p == mpc(0) || dp == mpc(0)) continue;
        mpc newton = p / dp, s = 0;
        for (std::size_t j = 0; j < n; ++j)
          if (j != i) s += mpc(1) / (z[i] - z[j]);
        mpc w = newton / (mpc(1) - newton * s);
        z[i] -= w;
        mpr az = bmp::abs(z[i]);
        worst = std::max(worst, bmp::abs(w) / (az > 1 ? az : mpr(1)));
      }
      ++iterations;
      converged = worst < quiet;
    }
  }
  fail(ErrorCode::non_convergence,
       "root inclusion disks for a degree " + std::to_string(n) + " factor could not be certified");
}

// Roots of the integer polynomial a (a.back() != 0), certified.
RootSet certified_roots(const std::vector<BigInt>& a, std::mt19937_64& rng, unsigned& iterations) {
  std::size_t zeros = 0;
  while (a[zeros] == 0) ++zeros;
  RootSet out;
  out.roots.assign(zeros, cld(0));
  std::vector<BigInt> red(a.begin() + static_cast<long>(zeros), a.end());
  const std::size_t n = red.size() - 1;
  if (n == 0) return out;
  if (n == 1) {
    Rational r(BigInt(-red[0]), red[1]);
    r.canonicalize();
    out.roots.emplace_back(static_cast<long double>(r.get_d()), 0.0L);
    out.logplus = std::max(0.0, log_abs(r.get_num()) - log_abs(r.get_den()));
    return out;
  }
  long emax = 0;
  for (const auto& c : red) emax = std::max(emax, static_cast<long>(mpz_sizeinbase(c.get_mpz_t(), 2)));
  std::vector<long double> mag(n + 1);
  for (std::size_t i = 0; i <= n; ++i) mag[i] = scaled_abs(red[i], emax);
  auto hybrid = hybrid_roots(red, initial_guesses(mag, rng), iterations);
  RootSet rs = hybrid ? *hybrid : polish(red, aberth_roots(red, rng, iterations), iterations);
  rs.roots.insert(rs.roots.begin(), out.roots.begin(), out.roots.end());
  return rs;
}

// gcd(a, a') has degree 0 modulo a prime not dividing the leading
// coefficient, which certifies that a is squarefree over Q.
bool certainly_squarefree(const std::vector<BigInt>& a) {
  using u64 = std::uint64_t;
  using u128 = unsigned __int128;
  BigInt p = BigInt(1) << 61;
  for (int attempt = 0; attempt < 3; ++attempt) {
    mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    const u64 m = mpz_get_ui(p.get_mpz_t());
    if (mpz_fdiv_ui(a.back().get_mpz_t(), m) == 0) continue;
    auto mulm = [m](u64 x, u64 y) { return static_cast<u64>(static_cast<u128>(x) * y % m); };
    auto powm = [&](u64 x, u64 e) {
      u64 r = 1;
      for (; e; e >>= 1, x = mulm(x, x))
        if (e & 1) r = mulm(r, x);
      return r;
    };
    std::vector<u64> f(a.size()), g(a.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) f[i] = mpz_fdiv_ui(a[i].get_mpz_t(), m);
    for (std::size_t i = 1; i < a.size(); ++i) g[i - 1] = mulm(f[i], i % m);
    auto trim = [](std::vector<u64>& v) {
      while (!v.empty() && v.back() == 0) v.pop_back();
    };
    trim(g);
    while (!g.empty()) {
      // f <- f mod g
      u64 inv = powm(g.back(), m - 2);
      while (f.size() >= g.size()) {
        u64 c = mulm(f.back(), inv);
        std::size_t shift = f.size() - g.size();
        for (std::size_t i = 0; i < g.size(); ++i) f[shift + i] = (f[shift + i] + m - mulm(c, g[i])) % m;
        trim(f);
        if (f.empty()) break;
      }
      std::swap(f, g);
    }
    return f.size() == 1;
  }
  return false;
}

}  // namespace

MahlerReport mahler(const IntPoly& q, std::uint64_t seed) {
  require(q.degree() >= 1, "mahler needs a nonconstant polynomial");
  MahlerReport rep;
  rep.poly = q;
  std::mt19937_64 rng(seed);
  // Repeated roots cost Aberth most of its accuracy, so split off
  // multiplicities exactly first.
  std::vector<std::pair<std::vector<BigInt>, unsigned>> parts;
  if (certainly_squarefree(q.primitive())) {
    parts.emplace_back(q.primitive(), 1);
  } else {
    for (const auto& [s, e] : squarefree_decomposition(q.to_uni()))
      if (s.degree() >= 1) parts.emplace_back(IntPoly::from_rational(s).primitive(), e);
  }
  long double m = log_abs(q.leading()), err = 0, residual = 0;
  for (const auto& [a, e] : parts) {
    RootSet rs = certified_roots(a, rng, rep.iterations);
    for (unsigned k = 0; k < e; ++k) rep.roots.insert(rep.roots.end(), rs.roots.begin(), rs.roots.end());
    m += e * rs.logplus;
    err += e * rs.error;
    residual = std::max(residual, rs.residual);
  }
  rep.root_residual = static_cast<double>(residual);
  rep.measure_error = static_cast<double>(err);
  if (q.content() > 1) m += log_abs(q.content());
  rep.measure = static_cast<double>(m);
  return rep;
}

double avg_root_height(const IntPoly& q) {
  require(q.degree() >= 1, "avg_root_height needs a nonconstant polynomial");
  return mahler(IntPoly(q.primitive())).measure / q.degree();
}

double coefficient_height(const IntPoly& q) {
  double h = 0;
  for (const auto& c : q.primitive())
    if (c != 0) h = std::max(h, log_abs(c));
  return h;
}

nlohmann::json MahlerReport::to_json() const {
  nlohmann::json roots_json = nlohmann::json::array();
  for (const auto& r : roots)
    roots_json.push_back({static_cast<double>(r.real()), static_cast<double>(r.imag())});
  return {{"poly", poly.str()},
          {"degree", poly.degree()},
          {"measure", measure},
          {"root_residual", root_residual},
          {"measure_error", measure_error},
          {"iterations", iterations},
          {"roots", roots_json}};
}

}  // namespace splitdyn
