// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--known-failures 9,...]
//
// Exit status is 0 when every failing criterion is listed as known.

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "splitdyn/dynsys.hpp"
#include "splitdyn/error.hpp"
#include "splitdyn/heights.hpp"
#include "splitdyn/integer_factor.hpp"
#include "splitdyn/lab.hpp"
#include "splitdyn/padic.hpp"
#include "splitdyn/subvar.hpp"
#include "support/generators.hpp"
#include "support/hasse_instances.hpp"

using namespace splitdyn;

namespace tol {
constexpr double kHeightExact = 1e-12;     // criterion 5, h_{X^2}(2) = log 2
constexpr double kTelescopeSlack = 1e-12;  // criterion 5, on top of the error bounds
constexpr double kMahlerExample = 1e-9;    // criterion 6
constexpr double kMahlerProduct = 1e-8;    // criterion 6
constexpr double kStability = 1e-9;        // criteria 7 and 8, running maxima
constexpr double kDensity = 0.9;           // criterion 4
}  // namespace tol

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

UniPoly P(const char* s) { return parse_poly(s); }

// X^d C(X + 1/X)
UniPoly cleared(const UniPoly& c, int d) {
  UniPoly out;
  UniPoly x2p1 = P("x^2 + 1");
  for (int i = 0; i <= c.degree(); ++i) out += c.coeff(i) * UniPoly::monomial(1, d - i) * pow(x2p1, i);
  return out;
}

std::string fmt(double x) {
  std::ostringstream o;
  o << std::setprecision(6) << x;
  return o.str();
}

// ---- 1
Outcome chebyshev_identities() {
  int bad = 0;
  for (int d = 2; d <= 16; ++d)
    if (!(cleared(chebyshev(d), d) == UniPoly::monomial(1, 2 * d) + UniPoly::constant(1))) ++bad;
  for (int a = 1; a <= 6; ++a)
    for (int b = 1; b <= 6; ++b)
      if (!(compose(chebyshev(a), chebyshev(b)) == chebyshev(a * b))) ++bad;
  return {bad == 0, "15 clearing identities, 36 compositions, " + std::to_string(bad) + " mismatches"};
}

// ---- 2
Outcome classification() {
  int checked = 0, bad = 0;
  for (int d = 2; d <= 8; ++d) {
    std::vector<std::pair<UniPoly, SpecialKind>> cases{{UniPoly::monomial(1, d), SpecialKind::power},
                                                       {chebyshev(d), SpecialKind::chebyshev},
                                                       {Rational(-1) * chebyshev(d), SpecialKind::chebyshev}};
    for (const auto& [f, kind] : cases) {
      ++checked;
      auto c = classify(PolyDS(f));
      if (!c.is_special()) {
        ++bad;
        continue;
      }
      auto s = std::get<SpecialVerdict>(c.verdict);
      UniPoly target = s.kind == SpecialKind::power ? UniPoly::monomial(1, d) : Rational(s.sign) * chebyshev(d);
      // the conjugator is re-verified here, independently of classify
      if (s.kind != kind || !(compose(s.conjugator.inverse().poly(), compose(f, s.conjugator.poly())) == target)) ++bad;
    }
  }
  for (const char* s : {"x^2 + 1", "x^2 + 3", "x^3 + x"}) {
    ++checked;
    PolyDS ds(P(s));
    auto c = classify(ds);
    if (!c.is_disintegrated()) {
      ++bad;
      continue;
    }
    auto dv = std::get<DisintegratedVerdict>(c.verdict);
    if (!(dv.heights.back() > dv.escape_bound) || c.to_json()["transcript"].empty()) ++bad;
  }
  return {bad == 0, std::to_string(checked) + " maps, " + std::to_string(bad) + " wrong verdicts"};
}

// ---- 3
Outcome hasse_soundness() {
  constexpr std::uint64_t kPrimeBound = 60;
  constexpr unsigned kMMax = 3, kHorizon = 60;
  auto good = testgen::avoiding_instances(50, 20240101, kHorizon);
  std::size_t issued = 0, rejected = 0, searched = 0;
  for (const auto& inst : good) {
    HasseSearchResult r;
    try {
      r = hasse_search(inst.ds, inst.v, inst.point, kPrimeBound, kMMax, kHorizon);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::budget) throw;
      continue;
    }
    ++searched;
    for (const auto& c : r.certificates) {
      ++issued;
      if (!verify_certificate(inst.ds, inst.v, inst.point, c)) ++rejected;
    }
  }
  auto meet = testgen::meeting_instances(24, 77);
  std::size_t false_certs = 0, attempts = 0, not_flagged = 0;
  for (const auto& inst : meet) {
    try {
      check_orbit_avoidance(inst.ds, inst.v, inst.point, kHorizon);
      ++not_flagged;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::orbit_meets_v) ++not_flagged;
    }
    for (std::uint64_t p : primes_below(kPrimeBound)) {
      if (!is_good_prime(inst.ds, inst.v, inst.point, p).good) continue;
      for (unsigned m = 1; m <= kMMax; ++m) {
        ++attempts;
        if (hasse_certificate(inst.ds, inst.v, inst.point, PadicContext(p, m))) ++false_certs;
      }
    }
  }
  std::ostringstream d;
  d << good.size() << " avoiding instances (" << searched << " searched), " << issued << " certificates, " << rejected
    << " rejected by the verifier; " << meet.size() << " adversarial instances, " << attempts << " attempts, "
    << false_certs << " certificates issued, " << not_flagged << " not flagged OrbitMeetsV";
  bool ok = good.size() >= 50 && meet.size() >= 20 && searched == good.size() && issued > 0 && rejected == 0 &&
            false_certs == 0 && not_flagged == 0;
  return {ok, d.str()};
}

// ---- 4
Outcome hasse_existence() {
  PolyDS f(P("x^2 - 1"));
  StructuredVariety v(2, {LinkB{1, 2, f.f()}});
  std::vector<ProjPoint> pt{ProjPoint(0), ProjPoint(5)};
  auto r = hasse_search(f, v, pt, 200, 4);
  std::size_t ok1 = 0;
  for (const auto& c : r.certificates) ok1 += verify_certificate(f, v, pt, c);
  // f = X^2, V the preperiodic point -1, which the orbit of 2 never reaches
  PolyDS sq(P("x^2"));
  StructuredVariety w(1, {VertA{1, ProjPoint(-1)}});
  std::vector<ProjPoint> two{ProjPoint(2)};
  auto s = hasse_search(sq, w, two, 200, 4);
  std::size_t ok2 = 0;
  for (const auto& c : s.certificates) ok2 += verify_certificate(sq, w, two, c);
  std::ostringstream d;
  d << "x^2-1: " << r.certificates.size() << " certificates (" << ok1 << " verified); x^2: density "
    << fmt(s.density()) << " over " << s.good_primes.size() << " good primes (" << ok2 << " verified)";
  bool ok = !r.certificates.empty() && ok1 == r.certificates.size() && s.density() > tol::kDensity &&
            ok2 == s.certificates.size();
  return {ok, d.str()};
}

// ---- 5
Outcome canonical_heights() {
  int bad = 0;
  auto e = canonical_height(PolyDS(P("x^2")), 2, 1e-10);
  if (!(std::abs(e.value - std::log(2.0)) < tol::kHeightExact && e.error_bound == 0)) ++bad;
  int zeros = 0;
  const std::vector<std::pair<const char*, std::vector<Rational>>> pre{
      {"x^2 - 1", {0, -1, 1}},
      {"x^2", {0, 1, -1}},
      {"x^2 - 2", {2, -2, 0, 1, -1}},
      {"x^2 - 3/4", {Rational(1, 2), Rational(-1, 2), Rational(3, 2), Rational(-3, 2)}},
      {"x^3 - x", {0, 1, -1}}};
  for (const auto& [s, pts] : pre)
    for (const auto& a : pts) {
      ++zeros;
      auto z = canonical_height(PolyDS(P(s)), a, 1e-8);
      if (z.value != 0) ++bad;
    }
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> c(-5, 5), den(1, 4);
  int pairs = 0;
  for (int t = 0; t < 200; ++t) {
    const int deg = 2 + t % 3;
    std::vector<Rational> co(static_cast<std::size_t>(deg) + 1);
    for (auto& x : co) {
      x = Rational(c(rng), den(rng));
      x.canonicalize();
    }
    if (co.back() == 0) co.back() = 1;
    PolyDS ds{UniPoly(co)};
    Rational a(c(rng) * 7 + c(rng), den(rng));
    a.canonicalize();
    const unsigned n = 2 + t % 4;
    auto e1 = canonical_height_at(ds, a, n);
    auto e2 = canonical_height_at(ds, a, n + 2);
    ++pairs;
    if (!(std::abs(e1.value - e2.value) <= e1.error_bound + e2.error_bound + tol::kTelescopeSlack)) ++bad;
  }
  return {bad == 0, "h(2) = " + fmt(e.value) + ", " + std::to_string(zeros) + " preperiodic inputs, " +
                        std::to_string(pairs) + " N vs N+2 pairs, " + std::to_string(bad) + " violations"};
}

// ---- 6
Outcome mahler_measures() {
  auto I = [](const char* s) { return IntPoly::from_rational(P(s)); };
  double e1 = std::abs(mahler(I("x - 3")).measure - std::log(3.0));
  double e2 = std::abs(mahler(I("x^2 - 2")).measure - std::log(2.0));
  double e3 = std::abs(mahler(I("x^4 - x^2 + 1")).measure);
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> deg(1, 10), coef(-20, 20);
  auto rnd = [&] {
    std::vector<Rational> c(static_cast<std::size_t>(deg(rng)) + 1);
    for (auto& x : c) x = coef(rng);
    if (c.back() == 0) c.back() = 1;
    return UniPoly(c);
  };
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    UniPoly a = rnd(), b = rnd();
    double gap = mahler(IntPoly::from_rational(a * b)).measure - mahler(IntPoly::from_rational(a)).measure -
                 mahler(IntPoly::from_rational(b)).measure;
    worst = std::max(worst, std::abs(gap));
  }
  double ex = std::max({e1, e2, e3});
  return {ex <= tol::kMahlerExample && worst <= tol::kMahlerProduct,
          "worst example error " + fmt(ex) + ", worst multiplicativity gap " + fmt(worst) + " over 100 pairs"};
}

// ---- 7
Outcome eisenstein_family() {
  auto fam = lab::run_eisenstein_family(2, 3, 8);
  bool all_e = true, all_f = true;
  double max_to_4 = 0, max_after = 0;
  std::ostringstream hs;
  for (const auto& r : fam.rows) {
    all_e = all_e && r.eisenstein;
    all_f = all_f && r.factorization_exact;
    (r.k <= 4 ? max_to_4 : max_after) = std::max(r.k <= 4 ? max_to_4 : max_after, r.max_root_height);
    hs << (r.k > 1 ? " " : "") << fmt(r.max_root_height);
  }
  bool stable = max_after <= max_to_4 + tol::kStability;
  return {all_e && all_f && stable && fam.rows.size() == 8,
          std::string("Eisenstein ") + (all_e ? "all" : "NOT all") + ", factorizations " +
              (all_f ? "exact" : "NOT exact") + ", per-k max heights [" + hs.str() + "]"};
}

// ---- 8
Outcome gk_sweep() {
  auto sw = lab::run_gk_sweep(PolyDS(P("x^2 + 3")), P("x"), P("x + 3"), 8);
  bool degrees = true;
  for (const auto& r : sw.rows) degrees = degrees && r.degree == (1 << r.k) - 1;
  double max_first = 0, max_all = 0;
  for (const auto& r : sw.rows) {
    if (r.k <= 4) max_first = std::max(max_first, r.avg_root_height);
    max_all = std::max(max_all, r.avg_root_height);
  }
  bool stable = max_all <= max_first + tol::kStability;
  std::ostringstream d;
  d << "degrees 2^k-1 " << (degrees ? "exact" : "WRONG") << ", c3 = " << fmt(sw.c3) << ", c4 = " << fmt(sw.c4)
    << ", c5 = " << fmt(sw.c5) << ", avg at k=8 " << fmt(sw.rows.back().avg_root_height);
  return {degrees && std::isfinite(sw.c4) && sw.c3 > 0 && stable && sw.c5_stable, d.str()};
}

// ---- 9
Outcome bmz() {
  lab::BmzConfig cfg;
  cfg.f = P("x^2 + 1");
  cfg.curve = parse_bipoly("y - x^2");
  PolyDS ds(cfg.f);
  for (unsigned m = 1; m <= 5; ++m) {
    cfg.maps.push_back(ds.iterate(m));
    cfg.map_labels.push_back("f^" + std::to_string(m));
  }
  auto run = lab::run_bmz(cfg);
  std::vector<double> mx, err;
  for (const auto& it : run.items) {
    double e = 0;
    for (const auto& f : it.factors)
      if (f.alpha.value == it.max_canonical) e = f.alpha.error_bound;
    mx.push_back(it.max_canonical);
    err.push_back(e);
  }
  bool monotone = true;
  std::string where;
  for (std::size_t i = 1; i + 1 < mx.size(); ++i)  // m = i+1 to m = i+2
    if (mx[i + 1] > mx[i] + err[i] + err[i + 1]) {
      monotone = false;
      where += " rises at m=" + std::to_string(i + 1) + "->" + std::to_string(i + 2);
    }
  std::ostringstream d;
  d << "max per-factor heights m=1..5 [";
  for (std::size_t i = 0; i < mx.size(); ++i) d << (i ? " " : "") << fmt(mx[i]);
  d << "], relation " << (run.all_relations_hold() ? "holds" : "FAILS") << " for every factor";
  if (!monotone) d << ";" << where;
  return {monotone && run.all_relations_hold(), d.str()};
}

// ---- 10
Outcome chain_decomposition() {
  std::mt19937_64 rng(777);
  int cases = 0, bad = 0, points = 0;
  std::uniform_int_distribution<int> num(-6, 6), den(1, 3);
  for (const char* fs : {"x^2+1", "x^3+x", "x^2-3*x"}) {
    PolyDS ds(P(fs));
    auto catalog = enumerate_commuting(ds, 9, 4).members;
    for (int t = 0; t < 10; ++t) {
      ++cases;
      const int n = 1 + static_cast<int>(rng() % 5);
      auto gen = testgen::random_variety(ds, catalog, n, rng);
      auto dec = chain_decompose(gen.v, ds, 6);
      std::set<int> seen, pinned;
      bool part = true;
      for (const auto& [axis, z] : dec.pinned) part = part && seen.insert(axis).second && pinned.insert(axis).second;
      for (const auto& ch : dec.chains)
        for (int a : ch.axes) part = part && seen.insert(a).second;
      part = part && static_cast<int>(seen.size()) == n && *seen.begin() == 1 && *seen.rbegin() == n;
      // I_V: axes pinned by some equation of V
      std::set<int> iv;
      for (const auto& e : gen.v.equations())
        if (auto* a = std::get_if<VertA>(&e)) iv.insert(a->axis);
      part = part && iv == pinned;
      if (!part) ++bad;
      for (int s = 0; s < 100; ++s, ++points) {
        std::vector<ProjPoint> q;
        if (s < 50) {
          q = gen.sample_on(rng);
        } else if (s < 75) {
          q = gen.sample_on(rng);
          auto& x = q[rng() % q.size()];
          x = x.is_infinity() ? ProjPoint(Rational(1, 3)) : ProjPoint(Rational(x.value() + Rational(1, 7)));
        } else {
          for (int i = 0; i < n; ++i) {
            Rational r(num(rng), den(rng));
            r.canonicalize();
            q.emplace_back(r);
          }
        }
        if (gen.v.contains(q) != dec.contains(q)) ++bad;
      }
    }
  }
  return {bad == 0 && cases == 30, std::to_string(cases) + " varieties, " + std::to_string(points) +
                                       " membership comparisons, " + std::to_string(bad) + " disagreements"};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--known-failures" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      for (std::string tok; std::getline(ss, tok, ',');) known.insert(std::stoi(tok));
    } else {
      std::cerr << "usage: acceptance [--known-failures 9,...]\n";
      return 2;
    }
  }
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"Chebyshev identities", chebyshev_identities},
      {"classification", classification},
      {"Hasse soundness", hasse_soundness},
      {"Hasse existence", hasse_existence},
      {"canonical heights", canonical_heights},
      {"Mahler measure", mahler_measures},
      {"Eisenstein family", eisenstein_family},
      {"G_k sweep laws", gk_sweep},
      {"BMZ boundedness", bmz},
      {"chain decomposition", chain_decomposition},
  };
  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << std::setw(2) << id << "  " << criteria[i].first
              << ": " << o.detail << " [" << std::fixed << std::setprecision(1) << secs << " s]"
              << std::defaultfloat << (!o.pass && known.count(id) ? " (known failure)" : "") << std::endl;
    if (!o.pass && !known.count(id)) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
