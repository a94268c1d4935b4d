#include "splitdyn/padic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <tuple>
#include <unordered_map>

#include "splitdyn/error.hpp"
#include "splitdyn/integer_factor.hpp"

namespace splitdyn {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

BigInt to_big(u64 v) {
  BigInt z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(u64), 0, 0, &v);
  return z;
}

u64 to_u64(const BigInt& z) {
  u64 v = 0;
  mpz_export(&v, nullptr, 1, sizeof(u64), 0, 0, z.get_mpz_t());
  return v;
}

// q mod M for q with denominator prime to M.
u64 reduce(const Rational& q, const BigInt& modulus) {
  BigInt inv;
  BigInt den = q.get_den();
  if (!mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), modulus.get_mpz_t()))
    fail(ErrorCode::precondition, "denominator " + to_string(den) + " is not invertible mod " + to_string(modulus));
  BigInt r = q.get_num() * inv;
  mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), modulus.get_mpz_t());
  return to_u64(r);
}

struct ReducedPoly {
  std::vector<u64> c;
  u64 m = 1;
  u64 operator()(u64 x) const {
    u64 acc = 0;
    for (std::size_t i = c.size(); i-- > 0;) {
      acc = mulmod(acc, x, m) + c[i];
      if (acc >= m) acc -= m;
    }
    return acc;
  }
};

ReducedPoly reduce_poly(const UniPoly& g, u64 modulus) {
  ReducedPoly r;
  r.m = modulus;
  BigInt mb = to_big(modulus);
  for (const auto& c : g.coeffs()) r.c.push_back(reduce(c, mb));
  return r;
}

// Orbit of x0 under g: values in order, and the index where the cycle starts.
struct Rho {
  std::vector<u64> seq;
  std::size_t mu = 0;
  std::size_t lambda() const { return seq.size() - mu; }
  u64 at(std::size_t k) const { return k < seq.size() ? seq[k] : seq[mu + (k - mu) % lambda()]; }
};

Rho rho(const ReducedPoly& g, u64 x0, u64 cap) {
  Rho r;
  std::unordered_map<u64, std::size_t> seen;
  u64 x = x0;
  while (true) {
    auto [it, fresh] = seen.emplace(x, r.seq.size());
    if (!fresh) {
      r.mu = it->second;
      return r;
    }
    if (r.seq.size() >= cap)
      fail(ErrorCode::budget, "orbit mod " + std::to_string(g.m) + " longer than " + std::to_string(cap) + " steps");
    r.seq.push_back(x);
    x = g(x);
  }
}

std::vector<u64> reduce_point(const std::vector<ProjPoint>& point, u64 modulus) {
  BigInt mb = to_big(modulus);
  std::vector<u64> out;
  for (const auto& x : point) {
    require(!x.is_infinity(), "point has an infinite coordinate");
    out.push_back(reduce(x.value(), mb));
  }
  return out;
}

// Equations of V reduced mod M; pins are finite at a good prime.
struct ReducedVariety {
  std::vector<std::pair<int, u64>> pins;
  std::vector<std::tuple<int, int, ReducedPoly>> links;

  ReducedVariety(const StructuredVariety& v, u64 modulus) {
    BigInt mb = to_big(modulus);
    for (const auto& e : v.equations()) {
      if (auto* a = std::get_if<VertA>(&e))
        pins.emplace_back(a->axis - 1, reduce(a->zeta.value(), mb));
      else if (auto* b = std::get_if<LinkB>(&e))
        links.emplace_back(b->from - 1, b->to - 1, reduce_poly(b->g, modulus));
    }
  }
  bool holds(const std::vector<u64>& x) const {
    for (const auto& [i, z] : pins)
      if (x[i] != z) return false;
    for (const auto& [i, j, g] : links)
      if (x[j] != g(x[i])) return false;
    return true;
  }
};

u64 checked_pow(u64 p, unsigned m) {
  u128 r = 1;
  for (unsigned i = 0; i < m; ++i) {
    r *= p;
    require(r < (static_cast<u128>(1) << 63), "p^m must stay below 2^63");
  }
  return static_cast<u64>(r);
}

bool p_integral(const Rational& q, u64 p) { return mpz_fdiv_ui(q.get_den().get_mpz_t(), p) != 0; }
bool p_unit(const Rational& q, u64 p) { return p_integral(q, p) && mpz_fdiv_ui(q.get_num().get_mpz_t(), p) != 0; }

std::size_t bits(const Rational& q) {
  return mpz_sizeinbase(q.get_num().get_mpz_t(), 2) + mpz_sizeinbase(q.get_den().get_mpz_t(), 2);
}

}  // namespace

PadicContext::PadicContext(std::uint64_t p, unsigned m) : p_(p), m_(m) {
  require(m >= 1, "precision m must be at least 1");
  require(p >= 2, "p must be a prime");
  bool trial = true;
  for (u64 q = 2; q * q <= p && trial; ++q)
    if (p % q == 0) trial = false;
  // trial division settles small p; larger p rely on the probabilistic test alone
  bool probable = is_probable_prime(to_big(p));
  if (p < (u64{1} << 40)) require(trial == probable, "primality tests disagree on " + std::to_string(p));
  require(probable, std::to_string(p) + " is not prime");
  modulus_ = checked_pow(p, m);
}

std::optional<long> vp(const Rational& q, const BigInt& p) {
  require(p >= 2, "vp needs a prime");
  if (q == 0) return std::nullopt;
  BigInt num = q.get_num(), den = q.get_den();
  long v = static_cast<long>(mpz_remove(num.get_mpz_t(), num.get_mpz_t(), p.get_mpz_t()));
  v -= static_cast<long>(mpz_remove(den.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t()));
  return v;
}

nlohmann::json GoodPrimeReport::to_json() const { return {{"p", p}, {"good", good}, {"reasons", reasons}}; }

GoodPrimeReport is_good_prime(const PolyDS& ds, const StructuredVariety& v, const std::vector<ProjPoint>& point,
                              std::uint64_t p) {
  GoodPrimeReport r;
  r.p = p;
  auto bad = [&](std::string why) {
    r.good = false;
    r.reasons.push_back(std::move(why));
  };
  for (std::size_t i = 0; i < point.size(); ++i) {
    if (point[i].is_infinity())
      bad("coordinate " + std::to_string(i + 1) + " is infinite");
    else if (!p_integral(point[i].value(), p))
      bad("coordinate " + std::to_string(i + 1) + " is not p-integral");
  }
  auto check_poly = [&](const UniPoly& g, const std::string& name) {
    for (const auto& c : g.coeffs())
      if (!p_integral(c, p)) {
        bad(name + " has a non-integral coefficient");
        break;
      }
    if (!p_unit(g.leading(), p)) bad(name + " has a non-unit leading coefficient");
  };
  check_poly(ds.f(), "f");
  for (const auto& e : v.equations()) {
    if (auto* a = std::get_if<VertA>(&e)) {
      if (a->zeta.is_infinity())
        bad("pin on axis " + std::to_string(a->axis) + " is infinite");
      else if (!p_integral(a->zeta.value(), p))
        bad("pin on axis " + std::to_string(a->axis) + " is not p-integral");
    } else {
      const auto& b = std::get<LinkB>(e);
      check_poly(b.g, "link " + std::to_string(b.from) + "->" + std::to_string(b.to));
    }
  }
  return r;
}

nlohmann::json OrbitModPm::to_json() const {
  return {{"tail", tail}, {"cycle", cycle}, {"tail_len", tail_len()}, {"cycle_len", cycle_len()}};
}

OrbitModPm orbit_mod(const PolyDS& ds, const std::vector<ProjPoint>& point, const PadicContext& ctx) {
  require(!point.empty(), "point must have at least one coordinate");
  auto x0 = reduce_point(point, ctx.modulus());
  ReducedPoly g = reduce_poly(ds.f(), ctx.modulus());
  const u64 cap = limits::kOrbitStepCap;
  std::vector<Rho> rhos;
  std::size_t tail = 0;
  u64 cycle = 1;
  for (u64 x : x0) {
    rhos.push_back(rho(g, x, cap));
    tail = std::max(tail, rhos.back().mu);
    cycle = std::lcm(cycle, static_cast<u64>(rhos.back().lambda()));
    if (cycle + tail > cap) fail(ErrorCode::budget, "joint orbit mod p^m exceeds the step cap");
  }
  OrbitModPm out;
  for (std::size_t k = 0; k < tail + cycle; ++k) {
    ResiduePoint pt;
    for (const auto& r : rhos) pt.push_back(r.at(k));
    (k < tail ? out.tail : out.cycle).push_back(std::move(pt));
  }
  return out;
}

nlohmann::json HasseCertificate::to_json() const {
  return {{"p", p},
          {"m", m},
          {"verdict", "certified"},
          {"tail_len", tail_len},
          {"cycle_len", cycle_len},
          {"residues_checked", residues_checked},
          {"good_prime", good_prime_report.good},
          {"method", method}};
}

HasseCertificate HasseCertificate::from_json(const nlohmann::json& j) {
  require(j.value("verdict", "") == "certified", "certificate verdict must be \"certified\"");
  HasseCertificate c;
  c.p = j.at("p").get<u64>();
  c.m = j.at("m").get<unsigned>();
  c.tail_len = j.at("tail_len").get<std::size_t>();
  c.cycle_len = j.at("cycle_len").get<std::size_t>();
  c.residues_checked = j.at("residues_checked").get<std::size_t>();
  c.method = j.value("method", "exhaustive");
  c.good_prime_report.p = c.p;
  c.good_prime_report.good = j.value("good_prime", true);
  return c;
}

HasseAttempt hasse_attempt(const PolyDS& ds, const StructuredVariety& v, const std::vector<ProjPoint>& point,
                           const PadicContext& ctx) {
  require(static_cast<int>(point.size()) == v.n(), "point has the wrong dimension");
  GoodPrimeReport good = is_good_prime(ds, v, point, ctx.p());
  require(good.good, "p = " + std::to_string(ctx.p()) + " is not a good prime");
  OrbitModPm orbit = orbit_mod(ds, point, ctx);
  ReducedVariety rv(v, ctx.modulus());
  HasseAttempt out;
  std::size_t idx = 0;
  for (const auto* part : {&orbit.tail, &orbit.cycle})
    for (const auto& x : *part) {
      if (rv.holds(x)) {
        out.witness = x;
        out.witness_index = idx;
        return out;
      }
      ++idx;
    }
  HasseCertificate c;
  c.p = ctx.p();
  c.m = ctx.m();
  c.tail_len = orbit.tail_len();
  c.cycle_len = orbit.cycle_len();
  c.residues_checked = idx;
  c.good_prime_report = std::move(good);
  out.certificate = std::move(c);
  return out;
}

std::optional<HasseCertificate> hasse_certificate(const PolyDS& ds, const StructuredVariety& v,
                                                  const std::vector<ProjPoint>& point, const PadicContext& ctx) {
  return hasse_attempt(ds, v, point, ctx).certificate;
}

bool verify_witness(const PolyDS&, const StructuredVariety& v, const PadicContext& ctx, const ResiduePoint& x) {
  const BigInt mod = to_big(ctx.modulus());
  auto red = [&](BigInt z) {
    mpz_fdiv_r(z.get_mpz_t(), z.get_mpz_t(), mod.get_mpz_t());
    return z;
  };
  auto red_q = [&](const Rational& q) {
    BigInt inv, den = q.get_den();
    if (!mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t())) return BigInt(-1);
    return red(q.get_num() * inv);
  };
  auto eval = [&](const UniPoly& g, const BigInt& t) {
    BigInt acc = 0;
    for (std::size_t i = g.coeffs().size(); i-- > 0;) acc = red(acc * t + red_q(g.coeffs()[i]));
    return acc;
  };
  for (const auto& e : v.equations()) {
    if (auto* a = std::get_if<VertA>(&e)) {
      if (a->zeta.is_infinity() || to_big(x[a->axis - 1]) != red_q(a->zeta.value())) return false;
    } else {
      const auto& b = std::get<LinkB>(e);
      if (to_big(x[b.to - 1]) != eval(b.g, to_big(x[b.from - 1]))) return false;
    }
  }
  return true;
}

bool verify_certificate(const PolyDS& ds, const StructuredVariety& v, const std::vector<ProjPoint>& point,
                        const HasseCertificate& cert) {
  if (static_cast<int>(point.size()) != v.n()) return false;
  if (!is_good_prime(ds, v, point, cert.p).good) return false;
  const PadicContext ctx(cert.p, cert.m);
  const BigInt mod = to_big(ctx.modulus());
  auto red = [&](BigInt z) {
    mpz_fdiv_r(z.get_mpz_t(), z.get_mpz_t(), mod.get_mpz_t());
    return z;
  };
  auto red_q = [&](const Rational& q) {
    BigInt inv, den = q.get_den();
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
    return red(q.get_num() * inv);
  };
  std::vector<BigInt> fc;
  for (const auto& c : ds.f().coeffs()) fc.push_back(red_q(c));
  std::vector<BigInt> x;
  for (const auto& c : point) x.push_back(red_q(c.value()));
  std::map<std::vector<BigInt>, std::size_t> seen;
  while (!seen.count(x)) {
    if (seen.size() > limits::kOrbitStepCap) return false;
    ResiduePoint r;
    for (const auto& c : x) r.push_back(to_u64(c));
    if (verify_witness(ds, v, ctx, r)) return false;
    seen.emplace(x, seen.size());
    for (auto& c : x) {
      BigInt acc = 0;
      for (std::size_t i = fc.size(); i-- > 0;) acc = red(acc * c + fc[i]);
      c = acc;
    }
  }
  const std::size_t mu = seen.at(x);
  return mu == cert.tail_len && seen.size() - mu == cert.cycle_len && seen.size() == cert.residues_checked;
}

nlohmann::json AvoidanceReport::to_json() const {
  return {{"horizon", horizon},
          {"exact_steps", exact_steps},
          {"modular_steps", modular_steps},
          {"whole_orbit", whole_orbit}};
}

AvoidanceReport check_orbit_avoidance(const PolyDS& ds, const StructuredVariety& v,
                                      const std::vector<ProjPoint>& point, unsigned horizon) {
  require(static_cast<int>(point.size()) == v.n(), "point has the wrong dimension");
  AvoidanceReport rep;
  rep.horizon = horizon;
  auto meets = [](unsigned k) {
    fail(ErrorCode::orbit_meets_v, "phi^" + std::to_string(k) + "(P) lies on V");
  };
  std::vector<ProjPoint> x = point;
  std::map<std::vector<std::string>, unsigned> seen;
  unsigned k = 0;
  for (; k <= horizon; ++k) {
    if (v.contains(x)) meets(k);
    std::vector<std::string> key;
    std::size_t size = 0;
    for (const auto& c : x) {
      key.push_back(c.str());
      if (!c.is_infinity()) size = std::max(size, bits(c.value()));
    }
    if (!seen.emplace(key, k).second) {
      rep.whole_orbit = true;
      rep.exact_steps = k;
      return rep;
    }
    ++rep.exact_steps;
    if (k == horizon || size * static_cast<std::size_t>(ds.degree()) > limits::kOrbitBitBudget) break;
    for (auto& c : x) c = apply(ds.f(), c);
  }
  if (k >= horizon) return rep;

  // Remaining iterates: a good prime q at which phi^k(P) mod q misses V rules
  // out phi^k(P) in V.
  std::vector<std::pair<ReducedPoly, ReducedVariety>> mods;
  std::vector<std::vector<u64>> xs;
  BigInt q = BigInt(1) << 61;
  for (int tries = 0; mods.size() < 3 && tries < 20; ++tries) {
    mpz_nextprime(q.get_mpz_t(), q.get_mpz_t());
    u64 qq = to_u64(q);
    if (!is_good_prime(ds, v, point, qq).good) continue;
    mods.emplace_back(reduce_poly(ds.f(), qq), ReducedVariety(v, qq));
    xs.push_back(reduce_point(x, qq));
    for (auto& c : xs.back()) c = mods.back().first(c);
  }
  if (mods.empty()) fail(ErrorCode::budget, "no good large prime for the orbit-avoidance check");
  for (++k; k <= horizon; ++k) {
    bool excluded = false;
    for (std::size_t t = 0; t < mods.size(); ++t) excluded = excluded || !mods[t].second.holds(xs[t]);
    if (!excluded)
      fail(ErrorCode::budget,
           "cannot decide whether phi^" + std::to_string(k) + "(P) lies on V within the exact size budget");
    ++rep.modular_steps;
    for (std::size_t t = 0; t < mods.size(); ++t)
      for (auto& c : xs[t]) c = mods[t].first(c);
  }
  return rep;
}

double HasseSearchResult::density() const {
  return good_primes.empty() ? 0.0 : static_cast<double>(certificates.size()) / good_primes.size();
}

nlohmann::json HasseSearchResult::to_json() const {
  nlohmann::json certs = nlohmann::json::array();
  for (const auto& c : certificates) certs.push_back(c.to_json());
  return {{"certificates", certs},
          {"good_primes_tried", good_primes.size()},
          {"bad_primes", bad_primes},
          {"budget_skipped", budget_skipped},
          {"density", density()},
          {"avoidance", avoidance.to_json()}};
}

HasseSearchResult hasse_search(const PolyDS& ds, const StructuredVariety& v, const std::vector<ProjPoint>& point,
                               std::uint64_t prime_bound, unsigned m_max, unsigned horizon) {
  require(m_max >= 1, "m_max must be at least 1");
  HasseSearchResult res;
  res.avoidance = check_orbit_avoidance(ds, v, point, horizon);
  for (u64 p : primes_below(prime_bound + 1)) {
    if (!is_good_prime(ds, v, point, p).good) {
      res.bad_primes.push_back(p);
      continue;
    }
    res.good_primes.push_back(p);
    for (unsigned m = 1; m <= m_max; ++m) {
      if (static_cast<double>(m) * std::log2(static_cast<double>(p)) >= 62.5) break;
      try {
        if (auto c = hasse_certificate(ds, v, point, PadicContext(p, m))) {
          res.certificates.push_back(std::move(*c));
          break;
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::budget) throw;
        res.budget_skipped.push_back(p);
        break;
      }
    }
  }
  return res;
}

nlohmann::json EtaleReport::to_json() const {
  return {{"p", p},
          {"derivative_unit_at", derivative_unit_at},
          {"derivative_vanishes_at", derivative_vanishes_at},
          {"holds", holds}};
}

EtaleReport etale_along_orbit(const PolyDS& ds, const std::vector<ProjPoint>& point, std::uint64_t p) {
  StructuredVariety none(static_cast<int>(point.size()), {});
  require(is_good_prime(ds, none, point, p).good, "p = " + std::to_string(p) + " is not a good prime");
  EtaleReport rep;
  rep.p = p;
  ReducedPoly g = reduce_poly(ds.f(), p);
  ReducedPoly dg = reduce_poly(ds.f().derivative(), p);
  std::set<u64> unit, vanish;
  for (u64 x0 : reduce_point(point, p))
    for (u64 x : rho(g, x0, limits::kOrbitStepCap).seq) (dg(x) ? unit : vanish).insert(x);
  rep.derivative_unit_at.assign(unit.begin(), unit.end());
  rep.derivative_vanishes_at.assign(vanish.begin(), vanish.end());
  rep.holds = vanish.empty();
  return rep;
}

std::optional<HasseCertificate> certify_via_etale(const PolyDS& ds, const StructuredVariety& v,
                                                  const std::vector<ProjPoint>& point, std::uint64_t p,
                                                  unsigned n_max) {
  require(check_periodic(v, ds, n_max).has_value(), "certify_via_etale needs a periodic variety");
  require(is_good_prime(ds, v, point, p).good, "p = " + std::to_string(p) + " is not a good prime");
  if (!etale_along_orbit(ds, point, p).holds) return std::nullopt;
  auto c = hasse_certificate(ds, v, point, PadicContext(p, 1));
  if (c) c->method = "etale";
  return c;
}

nlohmann::json PrimitivePrime::to_json() const { return {{"p", p}, {"mu", mu}}; }

nlohmann::json PrimitivePrimeReport::to_json() const {
  nlohmann::json ps = nlohmann::json::array();
  for (const auto& p : primes) ps.push_back(p.to_json());
  return {{"gamma_period", gamma_period},
          {"primes", ps},
          {"excluded", excluded},
          {"factorization_complete", factorization_complete}};
}

PrimitivePrimeReport primitive_prime_search(const PolyDS& ds, const Rational& alpha, const Rational& gamma,
                                            const PrimitivePrimeOptions& opts) {
  auto period = exact_period(ds, gamma);
  require(period.has_value(), "gamma = " + to_string(gamma) + " is not periodic");
  require(opts.allow_short_period || *period > 2,
          "gamma has period " + std::to_string(*period) + "; period > 2 is required unless overridden");
  PrimitivePrimeReport rep;
  rep.gamma_period = *period;

  std::vector<Rational> gamma_orbit{gamma};
  for (unsigned j = 1; j < *period; ++j) gamma_orbit.push_back(ds.f()(gamma_orbit.back()));

  const auto primes = primes_below(opts.prime_bound + 1);
  std::vector<bool> usable(primes.size(), true);
  for (std::size_t t = 0; t < primes.size(); ++t) {
    const u64 p = primes[t];
    bool bad = !p_integral(alpha, p) || !p_integral(gamma, p) || !p_unit(ds.f().leading(), p);
    for (const auto& c : ds.f().coeffs()) bad = bad || !p_integral(c, p);
    bool screened = false;
    for (const auto& u : opts.exclusions)
      for (const auto& g : gamma_orbit) {
        auto val = vp(u - g, to_big(p));
        screened = screened || !val || *val > 0;
      }
    if (bad || screened) {
      usable[t] = false;
      rep.excluded.push_back(p);
    }
  }

  std::vector<bool> found(primes.size(), false);
  Rational x = alpha;
  for (unsigned mu = 1; mu <= opts.mu_max; ++mu) {
    x = ds.f()(x);
    if (bits(x) > limits::kOrbitBitBudget)
      fail(ErrorCode::budget, "f^" + std::to_string(mu) + "(alpha) exceeds the exact size budget");
    Rational diff = x - gamma;
    require(diff != 0, "f^" + std::to_string(mu) + "(alpha) equals gamma");
    const BigInt num = diff.get_num();
    for (std::size_t t = 0; t < primes.size(); ++t)
      if (usable[t] && !found[t] && mpz_fdiv_ui(num.get_mpz_t(), primes[t]) == 0) {
        found[t] = true;
        rep.primes.push_back({primes[t], mu});
      }
    bool complete = false;
    if (mpz_sizeinbase(num.get_mpz_t(), 2) <= 256) complete = factor_integer(num, {100'000, 200'000}).complete;
    rep.factorization_complete.push_back(complete);
  }
  std::sort(rep.primes.begin(), rep.primes.end(), [](const auto& a, const auto& b) { return a.p < b.p; });
  return rep;
}

}  // namespace splitdyn
