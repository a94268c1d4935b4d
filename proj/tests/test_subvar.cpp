#include <functional>
#include <random>

#include "doctest.h"
#include "splitdyn/error.hpp"
#include "splitdyn/subvar.hpp"
#include "support/generators.hpp"

using namespace splitdyn;

namespace {

UniPoly P(const char* s) { return parse_poly(s); }

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::precondition;
}

using Pairs = std::set<std::pair<int, int>>;

// One more pass of transitivity and upper extension must add nothing.
bool closed(const PrecRelation& rel) {
  for (const auto& [p1, g1] : rel.pairs)
    for (const auto& [p2, g2] : rel.pairs) {
      if (p1.first == p1.second || p2.first == p2.second) continue;
      if (p1.second == p2.first && p1.first != p2.second && !rel.has(p1.first, p2.second)) return false;
      if (p1.first == p2.first && p1.second != p2.second && !rel.has(p1.second, p2.second) &&
          !rel.has(p2.second, p1.second)) {
        bool factors = (g2.degree() % g1.degree() == 0 && left_factor(g2, g1)) ||
                       (g1.degree() % g2.degree() == 0 && left_factor(g1, g2));
        if (factors) return false;
      }
    }
  return true;
}

std::vector<ProjPoint> pt(std::initializer_list<ProjPoint> xs) { return xs; }

}  // namespace

TEST_CASE("membership with infinity conventions") {
  PolyDS ds(P("x^2+1"));
  StructuredVariety v(2, {LinkB{1, 2, ds.f()}});
  CHECK(membership(v, pt({1, 2})));
  CHECK_FALSE(membership(v, pt({1, 3})));
  CHECK(membership(v, pt({ProjPoint::infinity(), ProjPoint::infinity()})));
  CHECK_FALSE(membership(v, pt({ProjPoint::infinity(), 5})));
  StructuredVariety w(2, {VertA{1, ProjPoint::infinity()}});
  CHECK(membership(w, pt({ProjPoint::infinity(), 5})));
  CHECK(parse_proj_point("inf").is_infinity());
  CHECK(parse_proj_point("-3/6") == ProjPoint(Rational(-1, 2)));
}

TEST_CASE("construction rejects inconsistent presentations") {
  CHECK(code_of([] { StructuredVariety(2, {VertA{1, 0}, VertA{1, 1}}); }) == ErrorCode::precondition);
  CHECK(code_of([] { StructuredVariety(2, {LinkB{1, 2, P("x+1")}, LinkB{1, 2, P("x+2")}}); }) ==
        ErrorCode::precondition);
  CHECK(code_of([] { StructuredVariety(2, {LinkB{1, 2, P("x+1")}, LinkB{2, 1, P("x+1")}}); }) ==
        ErrorCode::precondition);
  // pin pushed along a link conflicts with a pin on the target
  CHECK(code_of([] { StructuredVariety(2, {VertA{1, 0}, LinkB{1, 2, P("x^2+1")}, VertA{2, 5}}); }) ==
        ErrorCode::precondition);
  CHECK(code_of([] { StructuredVariety(2, {VertA{3, 0}}); }) == ErrorCode::precondition);
  CHECK(code_of([] { StructuredVariety(2, {LinkB{1, 1, P("x^2")}}); }) == ErrorCode::precondition);
  CHECK(code_of([] { StructuredVariety(2, {LinkB{1, 2, P("7")}}); }) == ErrorCode::precondition);
  // consistent: infinity pulled back and a compatible pin
  StructuredVariety up(2, {VertA{2, ProjPoint::infinity()}, LinkB{1, 2, P("x^3")}});
  CHECK(up.pins()[1] == std::optional<ProjPoint>(ProjPoint::infinity()));
  StructuredVariety down(3, {VertA{3, 0}, LinkB{3, 1, P("x")}, LinkB{1, 2, P("x^2+1")}});
  CHECK(down.pins()[2] == std::optional<ProjPoint>(ProjPoint(1)));
  CHECK(code_of([] {
          StructuredVariety(3, {VertA{2, ProjPoint::infinity()}, LinkB{1, 2, P("x^3")}, VertA{3, 0},
                                LinkB{3, 1, P("x")}});
        }) == ErrorCode::precondition);
}

TEST_CASE("check_periodic and check_preperiodic") {
  PolyDS f(P("x^2+1")), g(P("x^2-1")), sq(P("x^2"));
  CHECK(check_periodic(StructuredVariety(2, {LinkB{1, 2, f.f()}}), f, 4) == 1u);
  CHECK(check_periodic(StructuredVariety(1, {VertA{1, -1}}), g, 4) == 2u);
  CHECK_FALSE(check_periodic(StructuredVariety(2, {LinkB{1, 2, P("x+1")}}), sq, 4).has_value());

  auto w = check_preperiodic(StructuredVariety(1, {VertA{1, 1}}), g, 5, 4);
  REQUIRE(w);
  CHECK(w->k == 1);
  CHECK(w->n == 2);
  auto w0 = check_preperiodic(StructuredVariety(2, {LinkB{1, 2, f.f()}}), f, 5, 4);
  REQUIRE(w0);
  CHECK(w0->k == 0);
  CHECK(w0->n == 1);
  CHECK(code_of([&] { check_preperiodic(StructuredVariety(2, {LinkB{1, 2, P("x+1")}}), sq, 5, 4); }) ==
        ErrorCode::unsupported);
  // 0 -> 1 -> 2 -> 5 ... is not preperiodic for x^2+1
  CHECK_FALSE(check_preperiodic(StructuredVariety(1, {VertA{1, 0}}), f, 6, 4).has_value());
  // a mixed variety: pin plus a link of period 2, pin at a preperiodic point
  PolyDS odd(P("x^3+x"));  // -x commutes with f
  StructuredVariety mixed(3, {VertA{1, 0}, LinkB{2, 3, P("-x")}});
  auto wm = check_preperiodic(mixed, odd, 4, 4);
  REQUIRE(wm);
  CHECK(wm->k == 0);
}

TEST_CASE("prec_relation examples") {
  PolyDS f(P("x^2+1"));
  auto r1 = prec_relation(StructuredVariety(3, {LinkB{1, 2, f.f()}}), f, 4);
  CHECK(r1.as_set() == Pairs{{1, 1}, {1, 2}, {2, 2}, {3, 3}});

  const UniPoly g = f.iterate(2);
  auto r2 = prec_relation(StructuredVariety(3, {LinkB{1, 2, g}, LinkB{1, 3, compose(f.f(), g)}}), f, 4);
  CHECK(r2.has(2, 3));
  REQUIRE(r2.witness(2, 3));
  CHECK(*r2.witness(2, 3) == f.f());
  CHECK(closed(r2));

  auto r3 = prec_relation(StructuredVariety(2, {VertA{1, ProjPoint::infinity()}, VertA{2, ProjPoint::infinity()}}),
                          f, 4);
  CHECK(r3.as_set().empty());
  CHECK(r3.pinned == std::set<int>{1, 2});

  // lower extension with a linear witness: x3 = f(x1) = -x2 gives x2 = -f(x1)
  PolyDS odd(P("x^3+x"));
  auto r4 = prec_relation(StructuredVariety(3, {LinkB{1, 3, odd.f()}, LinkB{2, 3, P("-x")}}), odd, 4);
  CHECK(r4.has(1, 2));
  CHECK(*r4.witness(1, 2) == P("-x^3-x"));
  // without a linear side nothing is inferred: x2 may be another preimage
  auto r5 = prec_relation(StructuredVariety(3, {LinkB{1, 3, odd.f()}, LinkB{2, 3, odd.f()}}), odd, 4);
  CHECK_FALSE(r5.has(1, 2));
  CHECK_FALSE(r5.has(2, 1));

  CHECK(code_of([&] { prec_relation(StructuredVariety(2, {LinkB{1, 2, P("x+1")}}), PolyDS(P("x^2")), 4); }) ==
        ErrorCode::precondition);
}

TEST_CASE("chain_decompose examples") {
  PolyDS f(P("x^2+1")), sq(P("x^2"));
  auto c1 = chain_decompose(StructuredVariety(3, {LinkB{1, 2, f.f()}}), f, 4);
  REQUIRE(c1.chains.size() == 2);
  CHECK(c1.chains[0].axes == std::vector<int>{1, 2});
  CHECK(c1.chains[1].axes == std::vector<int>{3});
  CHECK(c1.pinned.empty());

  auto c2 = chain_decompose(StructuredVariety(3, {VertA{1, 0}, LinkB{2, 3, sq.f()}}), sq, 4);
  REQUIRE(c2.pinned.size() == 1);
  CHECK(c2.pinned[0].first == 1);
  REQUIRE(c2.chains.size() == 1);
  CHECK(c2.chains[0].axes == std::vector<int>{2, 3});

  auto c3 = chain_decompose(StructuredVariety(2, {VertA{1, 0}, VertA{2, 1}}), sq, 4);
  CHECK(c3.chains.empty());
  CHECK(c3.pinned.size() == 2);

  // ordering follows the relation, not the indices
  auto c4 = chain_decompose(StructuredVariety(3, {LinkB{3, 1, f.f()}, LinkB{1, 2, f.f()}}), f, 4);
  REQUIRE(c4.chains.size() == 1);
  CHECK(c4.chains[0].axes == std::vector<int>{3, 1, 2});
  auto j = c4.to_json();
  CHECK(j["chains"][0]["links"][0] == "x^2 + 1");
}

TEST_CASE("random varieties: decomposition, closure and invariance") {
  std::mt19937_64 rng(20240611);
  struct Case {
    const char* f;
    int deg_bound;
  };
  for (const Case& c : {Case{"x^2+1", 8}, Case{"x^3+x", 9}, Case{"x^2-3*x", 8}}) {
    PolyDS ds(P(c.f));
    auto catalog = enumerate_commuting(ds, c.deg_bound, 4).members;
    REQUIRE(!catalog.empty());
    for (int trial = 0; trial < 12; ++trial) {
      const int n = 1 + static_cast<int>(rng() % 5);
      auto gen = testgen::random_variety(ds, catalog, n, rng);
      const auto& v = gen.v;
      auto period = check_periodic(v, ds, 6);
      REQUIRE(period);

      auto rel = prec_relation(v, ds, 6);
      CHECK(closed(rel));
      // rebuilding the variety from the closed relation reproduces it
      std::vector<Equation> eqs;
      for (const auto& e : v.equations())
        if (std::holds_alternative<VertA>(e)) eqs.push_back(e);
      for (const auto& [p, g] : rel.pairs)
        if (p.first != p.second) eqs.push_back(LinkB{p.first, p.second, g});
      CHECK(prec_relation(StructuredVariety(n, eqs), ds, 6).as_set() == rel.as_set());

      auto dec = chain_decompose(v, ds, 6);
      std::set<int> seen;
      for (const auto& [axis, z] : dec.pinned) CHECK(seen.insert(axis).second);
      for (const auto& ch : dec.chains) {
        for (int a : ch.axes) CHECK(seen.insert(a).second);
        for (std::size_t t = 0; t < ch.links.size(); ++t) CHECK(ch.links[t].has_value());
      }
      CHECK(static_cast<int>(seen.size()) == n);
      CHECK(*seen.begin() == 1);
      CHECK(*seen.rbegin() == n);

      const UniPoly fn = ds.iterate(*period);
      for (int s = 0; s < 100; ++s) {
        auto q = gen.sample_on(rng);
        REQUIRE(v.contains(q));
        CHECK(dec.contains(q));
        if (s < 50) {
          std::vector<ProjPoint> img;
          for (const auto& x : q) img.push_back(apply(fn, x));
          CHECK(v.contains(img));
        }
        auto off = q;
        auto& x = off[rng() % off.size()];
        x = x.is_infinity() ? ProjPoint(Rational(1, 3)) : ProjPoint(Rational(x.value() + Rational(1, 7)));
        CHECK(v.contains(off) == dec.contains(off));
      }
      auto round = StructuredVariety::from_json(v.to_json());
      CHECK(round.to_json() == v.to_json());
    }
  }
}

TEST_CASE("intersect_with_curve") {
  CHECK(code_of([] { intersect_with_curve(parse_bipoly("y - x^2"), P("x^2")); }) == ErrorCode::contained_in_v);
  CHECK(intersect_with_curve(parse_bipoly("y - x - 3"), P("x^2+3")) == P("x^2 - x"));
  CHECK(intersect_with_curve(parse_bipoly("y^2 - x^3 - 1"), P("x^2")) == P("x^4 - x^3 - 1"));
  CHECK(intersect_with_curve(parse_bipoly("2*y - x"), P("x/3")) == P("-x"));
}
