#include "splitdyn/poly_factor.hpp"

#include <algorithm>
#include <bitset>
#include <cstdint>
#include <random>

#include "splitdyn/error.hpp"
#include "splitdyn/integer_factor.hpp"
#include "zpoly.hpp"

namespace splitdyn {

namespace {

using detail::ZVec;
using u64 = std::uint64_t;
using Fp = std::vector<u64>;  // polynomial over F_p, lowest degree first

// ---------------------------------------------------------------------------
// Arithmetic over F_p (p < 2^32)

struct FpRing {
  u64 p;

  u64 inv(u64 a) const {
    u64 r = 1, b = a % p, e = p - 2;
    while (e) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return r;
  }
  static void trim(Fp& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
  }
  Fp sub(Fp a, const Fp& b) const {
    if (b.size() > a.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
    trim(a);
    return a;
  }
  Fp mul(const Fp& a, const Fp& b) const {
    if (a.empty() || b.empty()) return {};
    Fp out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!a[i]) continue;
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = (out[i + j] + a[i] * b[j]) % p;
    }
    trim(out);
    return out;
  }
  // quotient and remainder; b nonzero
  std::pair<Fp, Fp> divmod(Fp a, const Fp& b) const {
    if (a.size() < b.size()) return {Fp{}, a};
    u64 il = inv(b.back());
    std::size_t db = b.size() - 1;
    Fp q(a.size() - db, 0);
    for (std::size_t k = q.size(); k-- > 0;) {
      u64 t = a[k + db] * il % p;
      q[k] = t;
      if (!t) continue;
      for (std::size_t j = 0; j <= db; ++j) a[k + j] = (a[k + j] + p - t * b[j] % p) % p;
    }
    a.resize(db);
    trim(a);
    trim(q);
    return {q, a};
  }
  Fp rem(const Fp& a, const Fp& b) const { return divmod(a, b).second; }
  Fp monic(Fp a) const {
    if (a.empty()) return a;
    u64 il = inv(a.back());
    for (auto& c : a) c = c * il % p;
    return a;
  }
  Fp gcd(Fp a, Fp b) const {
    while (!b.empty()) {
      Fp r = rem(a, b);
      a = std::move(b);
      b = std::move(r);
    }
    return monic(a);
  }
  // s, t with s*a + t*b = 1 (a, b coprime)
  void ext_gcd(const Fp& a, const Fp& b, Fp& s, Fp& t) const {
    Fp r0 = a, r1 = b, s0{1}, s1{}, t0{}, t1{1};
    while (!r1.empty()) {
      auto [q, r] = divmod(r0, r1);
      Fp s2 = sub(s0, mul(q, s1));
      Fp t2 = sub(t0, mul(q, t1));
      r0 = std::move(r1);
      r1 = std::move(r);
      s0 = std::move(s1);
      s1 = std::move(s2);
      t0 = std::move(t1);
      t1 = std::move(t2);
    }
    u64 il = inv(r0.at(0));
    for (auto& c : s0) c = c * il % p;
    for (auto& c : t0) c = c * il % p;
    s = s0;
    t = t0;
  }
  Fp powmod(Fp base, const mpz_class& e, const Fp& m) const {
    Fp r{1};
    base = rem(base, m);
    std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (std::size_t i = bits; i-- > 0;) {
      r = rem(mul(r, r), m);
      if (mpz_tstbit(e.get_mpz_t(), i)) r = rem(mul(r, base), m);
    }
    return rem(r, m);
  }
  Fp derivative(const Fp& a) const {
    if (a.size() <= 1) return {};
    Fp d(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) d[i - 1] = a[i] * (i % p) % p;
    trim(d);
    return d;
  }
  Fp reduce(const ZVec& z) const {
    Fp out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = mpz_fdiv_ui(z[i].get_mpz_t(), p);
    trim(out);
    return out;
  }
};

// Distinct-degree then equal-degree (Cantor-Zassenhaus) factorization of a
// monic squarefree polynomial over F_p, p odd.
std::vector<Fp> factor_mod_p(const FpRing& R, Fp f, std::mt19937_64& rng) {
  std::vector<std::pair<Fp, int>> ddf;
  Fp x{0, 1};
  Fp h = x;
  for (int i = 1; 2 * i <= static_cast<int>(f.size()) - 1; ++i) {
    h = R.powmod(h, mpz_class(static_cast<unsigned long>(R.p)), f);
    Fp g = R.gcd(R.sub(h, x), f);
    if (g.size() > 1) {
      ddf.emplace_back(g, i);
      f = R.divmod(f, g).first;
      h = R.rem(h, f);
    }
  }
  if (f.size() > 1) ddf.emplace_back(f, static_cast<int>(f.size()) - 1);

  std::vector<Fp> out;
  for (auto& [g, i] : ddf) {
    std::vector<Fp> work{g};
    mpz_class e;
    mpz_ui_pow_ui(e.get_mpz_t(), R.p, static_cast<unsigned long>(i));
    e = (e - 1) / 2;
    while (!work.empty()) {
      Fp w = work.back();
      work.pop_back();
      if (static_cast<int>(w.size()) - 1 == i) {
        out.push_back(R.monic(w));
        continue;
      }
      for (;;) {
        Fp a(w.size() - 1);
        for (auto& c : a) c = rng() % R.p;
        FpRing::trim(a);
        if (a.size() < 2) continue;
        Fp b = R.powmod(a, e, w);
        b = R.sub(b, Fp{1});
        Fp d = R.gcd(b, w);
        if (d.size() > 1 && d.size() < w.size()) {
          work.push_back(d);
          work.push_back(R.divmod(w, d).first);
          break;
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Arithmetic modulo M = p^k on integer vectors, coefficients kept in [0, M)

struct ZmRing {
  mpz_class m;

  void norm(ZVec& a) const {
    for (auto& c : a) mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
    detail::trim(a);
  }
  ZVec add(ZVec a, const ZVec& b) const {
    if (b.size() > a.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    norm(a);
    return a;
  }
  ZVec sub(ZVec a, const ZVec& b) const {
    if (b.size() > a.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    norm(a);
    return a;
  }
  ZVec mul(const ZVec& a, const ZVec& b) const {
    ZVec r = detail::mul(a, b);
    norm(r);
    return r;
  }
  // division by a polynomial whose leading coefficient is 1 mod m
  std::pair<ZVec, ZVec> divmod_monic(ZVec a, const ZVec& b) const {
    norm(a);
    if (a.size() < b.size()) return {ZVec{}, a};
    std::size_t db = b.size() - 1;
    ZVec q(a.size() - db, 0);
    for (std::size_t k = q.size(); k-- > 0;) {
      mpz_class t = a[k + db];
      mpz_fdiv_r(t.get_mpz_t(), t.get_mpz_t(), m.get_mpz_t());
      q[k] = t;
      if (t == 0) continue;
      for (std::size_t j = 0; j <= db; ++j) mpz_submul(a[k + j].get_mpz_t(), t.get_mpz_t(), b[j].get_mpz_t());
    }
    a.resize(db);
    norm(a);
    norm(q);
    return {q, a};
  }
};

ZVec lift_fp(const Fp& a) {
  ZVec z(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) z[i] = static_cast<unsigned long>(a[i]);
  return z;
}

// One quadratic Hensel step: f = g*h mod m and s*g + t*h = 1 mod m become
// the same relations mod `next` (next divides m^2). h stays monic.
void hensel_step(const ZVec& f, ZVec& g, ZVec& h, ZVec& s, ZVec& t, const mpz_class& next) {
  ZmRing R{next};
  ZVec e = R.sub(f, R.mul(g, h));
  auto [q, r] = R.divmod_monic(R.mul(s, e), h);
  ZVec g2 = R.add(R.add(g, R.mul(t, e)), R.mul(q, g));
  ZVec h2 = R.add(h, r);
  ZVec b = R.sub(R.add(R.mul(s, g2), R.mul(t, h2)), ZVec{1});
  auto [c, d] = R.divmod_monic(R.mul(s, b), h2);
  ZVec s2 = R.sub(s, d);
  ZVec t2 = R.sub(R.sub(t, R.mul(t, b)), R.mul(c, g2));
  g = std::move(g2);
  h = std::move(h2);
  s = std::move(s2);
  t = std::move(t2);
}

// Lifts f = lc(f) * prod(factors) mod p to mod p^a. Returned factors are
// monic modulo p^a.
void multifactor_lift(const ZVec& f, const std::vector<Fp>& factors, std::size_t lo, std::size_t hi,
                      const FpRing& Fr, unsigned long a, std::vector<ZVec>& out) {
  mpz_class pa;
  mpz_ui_pow_ui(pa.get_mpz_t(), Fr.p, a);
  ZmRing Ra{pa};
  if (hi - lo == 1) {
    // f = lc * u  =>  u = lc^{-1} f
    mpz_class lc = f.back(), inv;
    mpz_invert(inv.get_mpz_t(), lc.get_mpz_t(), pa.get_mpz_t());
    ZVec u = f;
    for (auto& c : u) c *= inv;
    Ra.norm(u);
    out[lo] = u;
    return;
  }
  std::size_t mid = (lo + hi) / 2;
  Fp gl{Fr.reduce(ZVec{f.back()}).at(0)};
  for (std::size_t i = lo; i < mid; ++i) gl = Fr.mul(gl, factors[i]);
  Fp hr{1};
  for (std::size_t i = mid; i < hi; ++i) hr = Fr.mul(hr, factors[i]);
  Fp s0, t0;
  Fr.ext_gcd(gl, hr, s0, t0);
  ZVec g = lift_fp(gl), h = lift_fp(hr), s = lift_fp(s0), t = lift_fp(t0);
  mpz_class m = static_cast<unsigned long>(Fr.p);
  while (m < pa) {
    mpz_class next = m * m;
    if (next > pa) next = pa;
    hensel_step(f, g, h, s, t, next);
    m = next;
  }
  multifactor_lift(g, factors, lo, mid, Fr, a, out);
  multifactor_lift(h, factors, mid, hi, Fr, a, out);
}

using DegreeSet = std::bitset<limits::kFactorDegreeCap + 1>;

DegreeSet subset_sums(const std::vector<Fp>& factors) {
  DegreeSet s;
  s[0] = true;
  for (const auto& u : factors) s |= s << (u.size() - 1);
  return s;
}

void symmetric(ZVec& v, const mpz_class& m) {
  mpz_class half = m / 2;
  for (auto& c : v) {
    mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
    if (c > half) c -= m;
  }
  detail::trim(v);
}

void make_primitive_positive(ZVec& v) {
  mpz_class g = detail::content(v);
  if (v.back() < 0) g = -g;
  for (auto& c : v) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
}

// Factors a primitive squarefree integer polynomial with positive leading
// coefficient and degree >= 2.
std::vector<ZVec> zassenhaus(const ZVec& f) {
  const std::size_t n = f.size() - 1;
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);

  // Try several primes; keep the one with fewest modular factors and
  // intersect the possible factor degrees.
  DegreeSet allowed;
  allowed.set();
  std::vector<Fp> best;
  u64 best_p = 0;
  int tried = 0;
  for (u64 p = 3; tried < 5 && p < 100000; p += 2) {
    if (!is_probable_prime(mpz_class(static_cast<unsigned long>(p)))) continue;
    if (mpz_divisible_ui_p(f.back().get_mpz_t(), p)) continue;
    FpRing R{p};
    Fp fp = R.reduce(f);
    if (R.gcd(fp, R.derivative(fp)).size() != 1) continue;
    std::vector<Fp> fac = factor_mod_p(R, R.monic(fp), rng);
    ++tried;
    allowed &= subset_sums(fac);
    if (best.empty() || fac.size() < best.size()) {
      best = fac;
      best_p = p;
    }
    bool only_trivial = true;
    for (std::size_t k = 1; k < n; ++k)
      if (allowed[k]) only_trivial = false;
    if (only_trivial) return {f};
  }
  require(best_p != 0, "no suitable prime for factorization");
  std::sort(best.begin(), best.end(), [](const Fp& a, const Fp& b) { return a.size() < b.size(); });

  // Coefficient bound for lc(f) * (any factor): |lc| * 2^n * ||f||_2.
  mpz_class norm2 = 0;
  for (const auto& c : f) norm2 += c * c;
  mpz_class rt;
  mpz_sqrt(rt.get_mpz_t(), norm2.get_mpz_t());
  mpz_class bound = abs(f.back()) * (mpz_class(1) << n) * (rt + 1);
  unsigned long a = 1;
  mpz_class pa = static_cast<unsigned long>(best_p);
  while (pa <= 2 * bound) {
    pa *= static_cast<unsigned long>(best_p);
    ++a;
  }
  FpRing Fr{best_p};
  std::vector<ZVec> lifted(best.size());
  multifactor_lift(f, best, 0, best.size(), Fr, a, lifted);

  std::vector<ZVec> result;
  std::vector<std::size_t> live(lifted.size());
  for (std::size_t i = 0; i < live.size(); ++i) live[i] = i;
  ZVec F = f;
  std::uint64_t budget = std::uint64_t{1} << 24;
  std::size_t s = 1;
  while (2 * s <= live.size()) {
    bool found = false;
    std::vector<std::size_t> idx(s);
    for (std::size_t i = 0; i < s; ++i) idx[i] = i;
    for (;;) {
      if (budget-- == 0) fail(ErrorCode::budget, "factor recombination budget exhausted");
      std::size_t deg = 0;
      for (auto i : idx) deg += lifted[live[i]].size() - 1;
      if (deg < allowed.size() && allowed[deg]) {
        const mpz_class& lcF = F.back();
        // Cheap constant-term screen before the full product.
        mpz_class c0 = lcF;
        for (auto i : idx) {
          c0 *= lifted[live[i]][0];
          mpz_fdiv_r(c0.get_mpz_t(), c0.get_mpz_t(), pa.get_mpz_t());
        }
        if (c0 > pa / 2) c0 -= pa;
        bool plausible = c0 != 0 && mpz_divisible_p(mpz_class(lcF * F[0]).get_mpz_t(), c0.get_mpz_t());
        if (F[0] == 0) plausible = true;
        if (plausible) {
          ZVec G{lcF};
          ZmRing Ra{pa};
          for (auto i : idx) G = Ra.mul(G, lifted[live[i]]);
          symmetric(G, pa);
          make_primitive_positive(G);
          ZVec Q;
          if (detail::exact_div(F, G, Q)) {
            result.push_back(G);
            F = Q;
            if (F.back() < 0)
              for (auto& c : F) c = -c;
            std::vector<std::size_t> rest;
            for (std::size_t i = 0, j = 0; i < live.size(); ++i) {
              if (j < s && idx[j] == i) {
                ++j;
                continue;
              }
              rest.push_back(live[i]);
            }
            live = rest;
            found = true;
            break;
          }
        }
      }
      // next combination
      std::size_t k = s;
      while (k > 0 && idx[k - 1] == live.size() - s + k - 1) --k;
      if (k == 0) break;
      ++idx[k - 1];
      for (std::size_t j = k; j < s; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (!found) ++s;
  }
  if (F.size() > 1) result.push_back(F);
  return result;
}

ZVec to_primitive_z(const UniPoly& q) {
  IntPoly ip = IntPoly::from_rational(q);
  ZVec v = ip.primitive();
  if (v.back() < 0)
    for (auto& c : v) c = -c;
  return v;
}

}  // namespace

std::vector<std::pair<UniPoly, unsigned>> squarefree_decomposition(const UniPoly& f) {
  require(!f.is_zero(), "squarefree decomposition of zero");
  std::vector<std::pair<UniPoly, unsigned>> out;
  if (f.degree() < 1) return out;
  UniPoly a = f.monic();
  UniPoly b = a.derivative();
  UniPoly c = gcd(a, b);
  UniPoly w = divmod(a, c).first;
  UniPoly y = divmod(b, c).first;
  UniPoly z = y - w.derivative();
  unsigned i = 1;
  while (w.degree() > 0) {
    UniPoly g = gcd(w, z);
    if (g.degree() > 0) out.emplace_back(g, i);
    w = divmod(w, g).first;
    y = divmod(z, g).first;
    z = y - w.derivative();
    ++i;
  }
  return out;
}

PolyFactorization factor_poly(const UniPoly& f, int degree_cap) {
  require(!f.is_zero(), "factor_poly: zero polynomial");
  if (f.degree() > degree_cap)
    fail(ErrorCode::degree_cap, "factor_poly: degree " + std::to_string(f.degree()) + " exceeds cap " +
                                    std::to_string(degree_cap));
  PolyFactorization out;
  std::vector<std::pair<ZVec, unsigned>> found;
  for (auto& [part, mult] : squarefree_decomposition(f)) {
    ZVec z = to_primitive_z(part);
    if (z.size() == 2) {
      found.emplace_back(z, mult);
      continue;
    }
    for (auto& g : zassenhaus(z)) found.emplace_back(g, mult);
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    return std::lexicographical_compare(a.first.rbegin(), a.first.rend(), b.first.rbegin(), b.first.rend());
  });
  UniPoly product = UniPoly::constant(1);
  for (auto& [z, m] : found) {
    IntPoly ip(z);
    product = product * pow(ip.to_uni(), m);
    out.factors.push_back({std::move(ip), m});
  }
  out.unit = f.leading() / product.leading();
  return out;
}

UniPoly expand(const PolyFactorization& fac) {
  UniPoly r = UniPoly::constant(fac.unit);
  for (const auto& pf : fac.factors) r = r * pow(pf.factor.to_uni_full(), pf.multiplicity);
  return r;
}

bool is_irreducible(const UniPoly& f, int degree_cap) {
  if (f.degree() < 1) return false;
  auto fac = factor_poly(f, degree_cap);
  return fac.factors.size() == 1 && fac.factors[0].multiplicity == 1;
}

std::vector<Rational> rational_roots(const UniPoly& f, int degree_cap) {
  std::vector<Rational> roots;
  if (f.degree() < 1) return roots;
  for (const auto& pf : factor_poly(f, degree_cap).factors) {
    if (pf.factor.degree() != 1) continue;
    const auto& c = pf.factor.primitive();
    Rational r(-c[0], c[1]);
    r.canonicalize();
    roots.push_back(r);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

bool eisenstein(const IntPoly& q, const BigInt& p) {
  require(q.degree() >= 1, "eisenstein: nonconstant polynomial required");
  std::vector<BigInt> c = q.primitive();
  for (auto& a : c) a *= q.content();
  if (mpz_divisible_p(c.back().get_mpz_t(), p.get_mpz_t())) return false;
  for (std::size_t i = 0; i + 1 < c.size(); ++i)
    if (!mpz_divisible_p(c[i].get_mpz_t(), p.get_mpz_t())) return false;
  BigInt p2 = p * p;
  return !mpz_divisible_p(c[0].get_mpz_t(), p2.get_mpz_t());
}

}  // namespace splitdyn
