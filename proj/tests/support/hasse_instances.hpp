#pragma once

// Instances for Hasse-principle soundness checks: structured V that are
// periodic or preperiodic, rational starting points, and an adversarial set
// whose orbit provably meets V.

#include <random>
#include <string>
#include <vector>

#include "splitdyn/dynsys.hpp"
#include "splitdyn/error.hpp"
#include "splitdyn/padic.hpp"
#include "splitdyn/subvar.hpp"

namespace splitdyn::testgen {

struct HasseInstance {
  PolyDS ds;
  StructuredVariety v;
  std::vector<ProjPoint> point;
  std::string label;
};

inline std::vector<UniPoly> small_commuters(const PolyDS& ds) {
  std::vector<UniPoly> out;
  for (const auto& g : {UniPoly::x(), ds.f(), ds.iterate(2), UniPoly::affine(-1, 0)})
    if (commutes_with_iterate(g, ds, 2)) out.push_back(g);
  return out;
}

inline std::vector<Rational> small_preperiodic(const PolyDS& ds) {
  std::vector<Rational> out;
  for (int a = -4; a <= 4; ++a)
    if (is_preperiodic_rational(ds, Rational(a)).preperiodic) out.emplace_back(a);
  return out;
}

inline StructuredVariety random_structured(const PolyDS& ds, int n, std::mt19937_64& rng) {
  auto pre = small_preperiodic(ds);
  auto comm = small_commuters(ds);
  if (pre.empty()) n = std::max(n, 2);
  std::vector<Equation> eqs;
  std::uniform_real_distribution<double> u(0, 1);
  int first_free = 1;
  if (!pre.empty() && (n == 1 || u(rng) < 0.4)) {
    eqs.push_back(VertA{1, pre[rng() % pre.size()]});
    first_free = 2;
  }
  for (int j = std::max(2, first_free + 1); j <= n; ++j)
    if (u(rng) < 0.8) eqs.push_back(LinkB{first_free + static_cast<int>(rng() % (j - first_free)), j, comm[rng() % comm.size()]});
  if (eqs.empty() && n >= 2) eqs.push_back(LinkB{1, 2, ds.f()});
  return StructuredVariety(n, eqs);
}

inline const std::vector<const char*>& hasse_maps() {
  static const std::vector<const char*> maps{"x^2+1", "x^2-1", "x^2+3", "x^3+x"};
  return maps;
}

/// Instances whose orbit is checked (exactly or by reduction) to avoid V up
/// to the horizon. Candidates that meet V or cannot be decided are skipped.
inline std::vector<HasseInstance> avoiding_instances(int count, std::uint64_t seed, unsigned horizon = 60) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coord(-6, 6);
  std::vector<HasseInstance> out;
  for (int attempt = 0; static_cast<int>(out.size()) < count && attempt < 50 * count; ++attempt) {
    PolyDS ds(parse_poly(hasse_maps()[attempt % hasse_maps().size()]));
    const int n = 1 + static_cast<int>(rng() % 3);
    StructuredVariety v = random_structured(ds, n, rng);
    std::vector<ProjPoint> p;
    for (int i = 0; i < v.n(); ++i) p.emplace_back(Rational(coord(rng)));
    try {
      check_orbit_avoidance(ds, v, p, horizon);
    } catch (const Error&) {
      continue;
    }
    out.push_back({ds, v, p, ds.f().str() + " " + v.to_json().dump()});
  }
  return out;
}

/// Instances with phi^k(P) on V for an explicit small k.
inline std::vector<HasseInstance> meeting_instances(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coord(-5, 5);
  std::vector<HasseInstance> out;
  for (int t = 0; static_cast<int>(out.size()) < count; ++t) {
    PolyDS ds(parse_poly(hasse_maps()[t % hasse_maps().size()]));
    auto comm = small_commuters(ds);
    Rational a = coord(rng);
    const unsigned k = static_cast<unsigned>(rng() % 3);
    switch (t % 3) {
      case 0: {  // pin at f^k(a)
        Rational z = a;
        for (unsigned s = 0; s < k; ++s) z = ds.f()(z);
        out.push_back({ds, StructuredVariety(1, {VertA{1, z}}), {ProjPoint(a)}, "pin at f^k(a)"});
        break;
      }
      case 1: {  // P on a commuting graph, so every iterate stays on it
        const UniPoly& g = comm[rng() % comm.size()];
        out.push_back({ds, StructuredVariety(2, {LinkB{1, 2, g}}), {ProjPoint(a), ProjPoint(g(a))}, "on graph"});
        break;
      }
      default: {  // pin plus a graph, reached after k steps
        Rational z = a;
        for (unsigned s = 0; s < k; ++s) z = ds.f()(z);
        out.push_back({ds, StructuredVariety(2, {VertA{1, z}, LinkB{1, 2, ds.f()}}),
                       {ProjPoint(a), ProjPoint(ds.f()(a))}, "pin and graph"});
      }
    }
  }
  return out;
}

}  // namespace splitdyn::testgen
