#pragma once

// Random structured varieties together with a sampler for points on them.

#include <algorithm>
#include <random>
#include <vector>

#include "splitdyn/dynsys.hpp"
#include "splitdyn/subvar.hpp"

namespace splitdyn::testgen {

struct GeneratedVariety {
  StructuredVariety v;
  // parent[i] = 0 for a root or a pinned axis; otherwise x_i = maps[i](x_parent[i])
  std::vector<int> parent;
  std::vector<UniPoly> maps;
  std::vector<std::optional<ProjPoint>> pins;

  std::vector<ProjPoint> sample_on(std::mt19937_64& rng) const {
    std::uniform_int_distribution<int> num(-6, 6), den(1, 4);
    const int n = v.n();
    std::vector<std::optional<ProjPoint>> x(static_cast<std::size_t>(n) + 1);
    for (int i = 1; i <= n; ++i) {
      if (pins[i]) {
        x[i] = *pins[i];
      } else if (parent[i] == 0) {
        Rational q(num(rng), den(rng));
        q.canonicalize();
        x[i] = ProjPoint(q);
      }
    }
    for (bool changed = true; changed;) {
      changed = false;
      for (int i = 1; i <= n; ++i)
        if (!x[i] && x[parent[i]]) {
          x[i] = apply(maps[i], *x[parent[i]]);
          changed = true;
        }
    }
    std::vector<ProjPoint> out;
    for (int i = 1; i <= n; ++i) out.push_back(*x[i]);
    return out;
  }
};

/// Periodic points of f among small rationals, plus infinity.
inline std::vector<ProjPoint> small_periodic_points(const PolyDS& ds) {
  std::vector<ProjPoint> out{ProjPoint::infinity()};
  for (int a = -4; a <= 4; ++a)
    for (int b = 1; b <= 2; ++b) {
      Rational q(a, b);
      q.canonicalize();
      if (exact_period(ds, q)) {
        bool seen = false;
        for (const auto& p : out) seen = seen || p == ProjPoint(q);
        if (!seen) out.push_back(q);
      }
    }
  return out;
}

/// A variety of dimension n built from pins on periodic points and trees of
/// links drawn from the commuting catalog, so it is irreducible and periodic.
inline GeneratedVariety random_variety(const PolyDS& ds, const std::vector<UniPoly>& catalog, int n,
                                       std::mt19937_64& rng) {
  auto periodic = small_periodic_points(ds);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<int> parent(static_cast<std::size_t>(n) + 1, 0);
  std::vector<UniPoly> maps(static_cast<std::size_t>(n) + 1);
  std::vector<std::optional<ProjPoint>> pins(static_cast<std::size_t>(n) + 1);
  std::vector<Equation> eqs;
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[i] = i + 1;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> placed;
  for (int i : order) {
    double r = u(rng);
    if (r < 0.2) {
      pins[i] = periodic[rng() % periodic.size()];
      eqs.push_back(VertA{i, *pins[i]});
    } else if (r < 0.45 || placed.empty()) {
      placed.push_back(i);  // new root
    } else {
      int p = placed[rng() % placed.size()];
      parent[i] = p;
      maps[i] = catalog[rng() % catalog.size()];
      eqs.push_back(LinkB{p, i, maps[i]});
      placed.push_back(i);
    }
  }
  // redundant equations implied by the tree: a composite link to a grandparent
  for (int i = 1; i <= n; ++i) {
    int p = parent[i];
    if (p && parent[p] && u(rng) < 0.5) eqs.push_back(LinkB{parent[p], i, compose(maps[i], maps[p])});
  }
  // the inverse direction of a linear link
  for (int i = 1; i <= n; ++i) {
    if (parent[i] && maps[i].degree() == 1 && u(rng) < 0.5) {
      Affine l{maps[i].coeff(1), maps[i].coeff(0)};
      eqs.push_back(LinkB{i, parent[i], l.inverse().poly()});
    }
  }
  std::shuffle(eqs.begin(), eqs.end(), rng);
  return GeneratedVariety{StructuredVariety(n, eqs), parent, maps, pins};
}

}  // namespace splitdyn::testgen
