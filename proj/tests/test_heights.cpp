#include <cmath>
#include <random>

#include "doctest.h"
#include "splitdyn/error.hpp"
#include "splitdyn/heights.hpp"
#include "splitdyn/poly_factor.hpp"
#include "splitdyn/resultant.hpp"

using namespace splitdyn;

namespace {

UniPoly P(const char* s) { return parse_poly(s); }
IntPoly I(const char* s) { return IntPoly::from_rational(P(s)); }

Rational random_rational(std::mt19937_64& rng, double max_height) {
  std::uniform_real_distribution<double> u(0, max_height);
  long lim = static_cast<long>(std::exp(u(rng)));
  std::uniform_int_distribution<long> n(-lim, lim), d(1, lim);
  Rational q(n(rng), d(rng));
  q.canonicalize();
  return q;
}

UniPoly random_poly(std::mt19937_64& rng, int deg) {
  std::uniform_int_distribution<int> c(-5, 5), den(1, 4);
  std::vector<Rational> co(deg + 1);
  for (auto& x : co) {
    x = Rational(c(rng), den(rng));
    x.canonicalize();
  }
  if (co.back() == 0) co.back() = 1;
  return UniPoly(co);
}

}  // namespace

TEST_CASE("weil heights") {
  CHECK(weil_height(2) == doctest::Approx(std::log(2.0)));
  CHECK(weil_height(Rational(3, 4)) == doctest::Approx(std::log(4.0)));
  CHECK(weil_height(0) == 0);
  std::vector<Rational> p1{2, 3}, p2{0, 0, 0}, p3{Rational(1, 2), 2};
  CHECK(height_tuple(p1) == doctest::Approx(std::log(6.0)));
  CHECK(height_tuple(p2) == 0);
  CHECK(height_tuple(p3) == doctest::Approx(2 * std::log(2.0)));
}

TEST_CASE("escape constant audit") {
  for (int d = 2; d <= 6; ++d) CHECK(escape_constant(UniPoly::monomial(1, d)) == 0);
  std::mt19937_64 rng(99);
  for (const char* s : {"x^2 + 1", "2*x^3 - 1/2"}) {
    UniPoly f = P(s);
    const double c = escape_constant(f);
    double worst = 0;
    for (int i = 0; i < 100000; ++i) {
      Rational x = random_rational(rng, 20);
      worst = std::max(worst, std::abs(weil_height(f(x)) - f.degree() * weil_height(x)));
    }
    INFO(s << " C = " << c << " worst = " << worst);
    CHECK(worst <= c + 1e-9);
  }
  // random polynomials, and algebraic points through Mahler measures
  for (int t = 0; t < 30; ++t) {
    UniPoly f = random_poly(rng, 2 + t % 3);
    const double c = escape_constant(f);
    for (int i = 0; i < 300; ++i) {
      Rational x = random_rational(rng, 8);
      CHECK(std::abs(weil_height(f(x)) - f.degree() * weil_height(x)) <= c + 1e-9);
    }
    UniPoly q = P("x^2 - 2");
    double hq = avg_root_height(IntPoly::from_rational(q));
    double hf = avg_root_height(IntPoly::from_rational(pushforward(q, f, 1)));
    CHECK(std::abs(hf - f.degree() * hq) <= c + 1e-9);
  }
}

TEST_CASE("canonical height examples") {
  auto e = canonical_height(PolyDS(P("x^2")), 2, 1e-10);
  CHECK(std::abs(e.value - std::log(2.0)) < 1e-12);
  CHECK(e.error_bound == 0);
  auto z = canonical_height(PolyDS(P("x^2 - 1")), 0, 1e-8);
  CHECK(z.value == 0);
  CHECK(z.error_bound == 0);
  PolyDS f(P("x^2 + 1"));
  // orbit 0, 1, 2, 5, 26, 677: f^4(0) = 26
  auto h4 = canonical_height_at(f, 0, 4);
  CHECK(h4.value == doctest::Approx(std::log(26.0) / 16).epsilon(1e-14));
  auto h = canonical_height(f, 0, 1e-3);
  CHECK(std::abs(h.value - std::log(26.0) / 16) <= h.error_bound + h4.error_bound);
  CHECK(std::abs(h.value - std::log(677.0) / 32) <= h.error_bound + canonical_height_at(f, 0, 5).error_bound);
  CHECK(h.error_bound <= 1e-3);
  CHECK_THROWS_AS(canonical_height(f, 0, 0), Error);
}

TEST_CASE("place-by-place tracking agrees with exact iterates") {
  std::mt19937_64 rng(5);
  std::vector<UniPoly> fs{P("x^2 + 1"), P("1/3*x^2 + 2/5*x - 7"), P("2*x^3 - 1/2"), P("-4/9*x^2 + 3"),
                          P("x^3 - 3/2*x + 1/6"), P("6*x^2 - 1/10")};
  for (const auto& fp : fs) {
    PolyDS ds(fp);
    for (int t = 0; t < 6; ++t) {
      Rational a = random_rational(rng, 5);
      for (unsigned n : {3u, 6u}) {
        std::string m1, m2;
        double exact = height_of_iterate(ds, a, n, std::size_t{1} << 30, &m1);
        double local = height_of_iterate(ds, a, n, 0, &m2);
        CHECK(m1 == "exact");
        CHECK(m2 == "local");
        CHECK(local == doctest::Approx(exact).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("telescoping consistency and vanishing on preperiodic points") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 200; ++t) {
    PolyDS ds(random_poly(rng, 2 + t % 3));
    Rational a = random_rational(rng, 3);
    unsigned n = 2 + t % 4;
    auto e1 = canonical_height_at(ds, a, n);
    auto e2 = canonical_height_at(ds, a, n + 2);
    CHECK(std::abs(e1.value - e2.value) <= e1.error_bound + e2.error_bound + 1e-12);
    CHECK(e1.value >= 0);
    CHECK(e2.error_bound <= e1.error_bound);
  }
  // both directions of "zero iff preperiodic"
  int zero_cases = 0;
  for (const char* s : {"x^2 - 1", "x^2 - 2", "x^2", "x^2 - 3/4", "x^3 - x", "-x^2 + 2", "x^2 + 1"}) {
    PolyDS ds(P(s));
    for (int t = 0; t < 30; ++t) {
      Rational a(static_cast<long>(rng() % 7) - 3, static_cast<long>(rng() % 2) + 1);
      a.canonicalize();
      bool pre = is_preperiodic_rational(ds, a).preperiodic;
      auto e = canonical_height(ds, a, 1e-6);
      if (pre) {
        ++zero_cases;
        CHECK(e.value == 0);
      } else {
        CHECK(e.value > e.error_bound);
      }
    }
  }
  CHECK(zero_cases > 20);
}

TEST_CASE("mahler examples") {
  CHECK(std::abs(mahler(I("x - 3")).measure - std::log(3.0)) < 1e-9);
  CHECK(std::abs(mahler(I("x^2 - 2")).measure - std::log(2.0)) < 1e-9);
  CHECK(std::abs(mahler(I("x^4 - x^2 + 1")).measure) < 1e-9);
  CHECK(std::abs(mahler(I("x^3")).measure) < 1e-12);
  auto r = mahler(I("x^5 - x - 1"));
  CHECK(r.root_residual < 1e-8);
  CHECK(r.roots.size() == 5);
  // deterministic for a fixed seed
  auto r2 = mahler(I("x^5 - x - 1"));
  CHECK(r.measure == r2.measure);
  CHECK(std::abs(avg_root_height(I("x^2 - 2")) - std::log(2.0) / 2) < 1e-9);
  CHECK(std::abs(avg_root_height(I("(x - 2)*(x - 3)")) - std::log(6.0) / 2) < 1e-9);
  CHECK(avg_root_height(I("x")) == 0);
  CHECK_THROWS_AS(mahler(I("5")), Error);
}

TEST_CASE("mahler against known roots and multiplicativity") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> root(-9, 9), deg(1, 10), coef(-20, 20);
  // oracle: products of linear factors with integer roots
  for (int t = 0; t < 60; ++t) {
    UniPoly q = UniPoly::constant(1);
    double expect = 0;
    int n = deg(rng);
    for (int i = 0; i < n; ++i) {
      int r = root(rng);
      q *= UniPoly::affine(1, -r);
      expect += std::log(std::max(1, std::abs(r)));
    }
    CHECK(std::abs(mahler(IntPoly::from_rational(q)).measure - expect) < 1e-7);
  }
  auto rnd = [&](int n) {
    std::vector<Rational> c(n + 1);
    for (auto& x : c) x = coef(rng);
    if (c.back() == 0) c.back() = 1;
    return UniPoly(c);
  };
  for (int t = 0; t < 100; ++t) {
    UniPoly a = rnd(deg(rng)), b = rnd(deg(rng));
    double ma = mahler(IntPoly::from_rational(a)).measure;
    double mb = mahler(IntPoly::from_rational(b)).measure;
    double mab = mahler(IntPoly::from_rational(a * b)).measure;
    CHECK(std::abs(mab - ma - mb) < 1e-8);
  }
  // a large degree instance with widely spread roots
  UniPoly big = pow(P("x^2 + 3"), 1);
  for (int k = 0; k < 6; ++k) big = compose(big, P("x^2 + 3"));
  auto rep = mahler(IntPoly::from_rational(big - UniPoly::x()));
  CHECK(rep.root_residual < 1e-8);
}

TEST_CASE("mahler error bounds and large degree multiplicativity") {
  auto r = mahler(I("x^4 - x^2 + 1"));
  CHECK(r.measure_error <= 1e-13);
  // G_k = f^k(x+3) - f^k(x) for f = x^2+3 splits as G_(k-1) * (f^(k-1)(x+3) + f^(k-1)(x)),
  // with coefficients near e^185 at k = 7
  PolyDS f(P("x^2 + 3"));
  UniPoly a = f.iterate(6), b = compose(a, P("x + 3"));
  UniPoly g6 = compose(f.iterate(1), b) - compose(f.iterate(1), a);
  UniPoly g5 = b - a, s5 = b + a;
  CHECK(g5 * s5 == g6);
  auto m6 = mahler(IntPoly::from_rational(g6));
  auto m5 = mahler(IntPoly::from_rational(g5));
  auto ms = mahler(IntPoly::from_rational(s5));
  CHECK(m6.measure_error <= 1e-12);
  CHECK(std::abs(m6.measure - m5.measure - ms.measure) < 1e-9);
  CHECK(m6.roots.size() == 127);
}

TEST_CASE("green function canonical heights") {
  PolyDS sq(P("x^2"));
  auto e = green_canonical_height(sq, I("x - 2"));
  CHECK(std::abs(e.value - std::log(2.0)) <= e.error_bound + 1e-12);
  CHECK(e.method == "green");
  // roots of unity and zero lie in the filled Julia set
  CHECK(green_canonical_height(sq, I("x^4 - x^2 + 1")).value < 1e-11);
  // x^4 + x^2 + 2 has f^2(a) = a^2 = f^4(a) under x^2+1, so it is preperiodic
  PolyDS f(P("x^2 + 1"));
  CHECK(green_canonical_height(f, I("x^4 + x^2 + 2")).value < 1e-11);
  // rational points against exact iterates
  for (int a : {2, -3, 5}) {
    auto g = green_canonical_height(f, IntPoly::from_rational(UniPoly::affine(1, -a)));
    auto c = canonical_height(f, a, 1e-10);
    CHECK(std::abs(g.value - c.value) <= g.error_bound + c.error_bound);
  }
  // against pushforward Mahler measures, and h(f(a)) = d h(a)
  for (const char* q : {"x^2 - 2", "x^2 + x - 1", "x^3 - 2", "2*x^2 + 6*x + 15"}) {
    auto g = green_canonical_height(f, I(q));
    auto m = factor_canonical_height(f, I(q), 4);
    CHECK(std::abs(g.value - m.value) <= g.error_bound + m.error_bound);
    CHECK(g.error_bound < 1e-10);
    IntPoly pushed(IntPoly::from_rational(pushforward(P(q), f.f(), 1)).primitive());
    auto gp = green_canonical_height(f, pushed);
    CHECK(std::abs(gp.value - 2 * g.value) <= gp.error_bound + 2 * g.error_bound);
  }
  CHECK_THROWS_AS(green_canonical_height(PolyDS(P("2*x^2 + 1")), I("x - 1")), Error);
  CHECK_THROWS_AS(green_canonical_height(PolyDS(P("x^2 + 1/2")), I("x - 1")), Error);
}

TEST_CASE("factor canonical heights") {
  PolyDS sq(P("x^2"));
  auto e = factor_canonical_height(sq, I("x - 2"), 3);
  CHECK(std::abs(e.value - std::log(2.0)) < 1e-9);
  auto e2 = factor_canonical_height(sq, I("x^2 - 2"), 1);
  CHECK(std::abs(e2.value - std::log(2.0) / 2) < 1e-9);
  CHECK(factor_canonical_height(sq, I("x"), 2).value == 0);
  // N versus N+1, and agreement with the rational path
  PolyDS f(P("x^2 + 1"));
  for (const char* q : {"x^2 - 2", "x^2 + x - 1", "x^3 - 2", "2*x^2 + 6*x + 15"}) {
    for (unsigned n = 1; n <= 4; ++n) {
      auto a = factor_canonical_height(f, I(q), n);
      auto b = factor_canonical_height(f, I(q), n + 1);
      CHECK(std::abs(a.value - b.value) <= a.error_bound + b.error_bound);
    }
  }
  auto lin = factor_canonical_height(f, I("x - 3"), 4);
  auto rat = canonical_height_at(f, 3, 4);
  CHECK(std::abs(lin.value - rat.value) < 1e-9);
}

TEST_CASE("symmetry height audit") {
  PolyDS odd(P("x^3 + x"));
  std::vector<Rational> samples{2, 3, Rational(5, 2)};
  auto a = symmetry_height_audit(odd, Affine{-1, 0}, samples, 1e-8);
  CHECK(a.within_bounds);
  CHECK(a.max_discrepancy <= 2e-8);
  auto id = symmetry_height_audit(odd, Affine{}, samples, 1e-8);
  CHECK(id.max_discrepancy == 0);
  std::vector<Rational> two{2};
  auto sq = symmetry_height_audit(PolyDS(P("x^2")), Affine{-1, 0}, two, 1e-8);
  CHECK(sq.max_discrepancy == 0);
  CHECK_THROWS_AS(symmetry_height_audit(PolyDS(P("x^2 + 1")), Affine{1, 1}, two, 1e-8), Error);
}
