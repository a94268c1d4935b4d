#include "splitdyn/subvar.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "splitdyn/error.hpp"
#include "splitdyn/int_poly.hpp"

namespace splitdyn {

std::string ProjPoint::str() const { return is_infinity() ? "inf" : to_string(*value_); }

ProjPoint parse_proj_point(std::string_view text) {
  std::string t(text);
  t.erase(std::remove(t.begin(), t.end(), ' '), t.end());
  if (t == "inf" || t == "oo" || t == "∞") return ProjPoint::infinity();
  return ProjPoint(parse_rational(t));
}

ProjPoint apply(const UniPoly& g, const ProjPoint& p) {
  if (p.is_infinity()) {
    require(g.degree() >= 1, "a constant map does not act on infinity");
    return p;
  }
  return g(p.value());
}

namespace {

void check_axis(int axis, int n) {
  require(axis >= 1 && axis <= n, "axis " + std::to_string(axis) + " outside 1.." + std::to_string(n));
}

bool is_nonzero_constant(const UniPoly& p) { return p.degree() == 0; }

UniPoly inverse_linear(const UniPoly& g) {
  // g = a x + b
  Affine l{g.coeff(1), g.coeff(0)};
  return l.inverse().poly();
}

}  // namespace

StructuredVariety::StructuredVariety(int n, std::vector<Equation> equations)
    : n_(n), equations_(std::move(equations)), pins_(static_cast<std::size_t>(n) + 1) {
  require(n >= 1, "ambient dimension must be positive");
  auto pin = [&](int axis, const ProjPoint& z) -> bool {
    auto& slot = pins_[static_cast<std::size_t>(axis)];
    if (!slot) {
      slot = z;
      return true;
    }
    require(*slot == z, "inconsistent variety: axis " + std::to_string(axis) + " pinned to both " +
                            slot->str() + " and " + z.str());
    return false;
  };
  for (const auto& e : equations_) {
    if (auto* a = std::get_if<VertA>(&e)) {
      check_axis(a->axis, n);
      pin(a->axis, a->zeta);
    } else {
      const auto& b = std::get<LinkB>(e);
      check_axis(b.from, n);
      check_axis(b.to, n);
      require(b.from != b.to, "a link needs two distinct axes");
      require(b.g.degree() >= 1, "a link needs a nonconstant polynomial");
    }
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& e : equations_) {
      auto* b = std::get_if<LinkB>(&e);
      if (!b) continue;
      const auto& src = pins_[static_cast<std::size_t>(b->from)];
      const auto& dst = pins_[static_cast<std::size_t>(b->to)];
      if (src) {
        changed = pin(b->to, apply(b->g, *src)) || changed;
      } else if (dst && dst->is_infinity()) {
        changed = pin(b->from, ProjPoint::infinity()) || changed;
      }
    }
  }
  for (std::size_t s = 0; s < equations_.size(); ++s) {
    auto* b1 = std::get_if<LinkB>(&equations_[s]);
    if (!b1) continue;
    for (std::size_t t = s + 1; t < equations_.size(); ++t) {
      auto* b2 = std::get_if<LinkB>(&equations_[t]);
      if (!b2) continue;
      if (b1->from == b2->from && b1->to == b2->to)
        require(!is_nonzero_constant(b1->g - b2->g), "inconsistent variety: links into axis " +
                                                           std::to_string(b1->to) + " differ by a constant");
      if (b1->from == b2->to && b1->to == b2->from)
        require(!is_nonzero_constant(compose(b2->g, b1->g) - UniPoly::x()),
                "inconsistent variety: a 2-cycle of links has no solution");
    }
  }
}

bool StructuredVariety::contains(const std::vector<ProjPoint>& p) const {
  require(static_cast<int>(p.size()) == n_, "point has the wrong dimension");
  for (const auto& e : equations_) {
    if (auto* a = std::get_if<VertA>(&e)) {
      if (!(p[static_cast<std::size_t>(a->axis - 1)] == a->zeta)) return false;
    } else {
      const auto& b = std::get<LinkB>(e);
      if (!(p[static_cast<std::size_t>(b.to - 1)] == apply(b.g, p[static_cast<std::size_t>(b.from - 1)])))
        return false;
    }
  }
  return true;
}

bool membership(const StructuredVariety& v, const std::vector<ProjPoint>& p) { return v.contains(p); }

nlohmann::json StructuredVariety::to_json() const {
  nlohmann::json eqs = nlohmann::json::array();
  for (const auto& e : equations_) {
    if (auto* a = std::get_if<VertA>(&e))
      eqs.push_back({{"type", "A"}, {"axis", a->axis}, {"zeta", a->zeta.str()}});
    else {
      const auto& b = std::get<LinkB>(e);
      eqs.push_back({{"type", "B"}, {"from", b.from}, {"to", b.to}, {"g", b.g.str()}});
    }
  }
  return {{"n", n_}, {"equations", eqs}};
}

StructuredVariety StructuredVariety::from_json(const nlohmann::json& j) {
  require(j.is_object() && j.contains("n") && j.contains("equations"),
          "variety JSON needs \"n\" and \"equations\"");
  std::vector<Equation> eqs;
  for (const auto& e : j.at("equations")) {
    const std::string type = e.at("type").get<std::string>();
    if (type == "A") {
      ProjPoint z = e.at("zeta").is_number_integer() ? ProjPoint(e.at("zeta").get<long>())
                                                      : parse_proj_point(e.at("zeta").get<std::string>());
      eqs.push_back(VertA{e.at("axis").get<int>(), z});
    } else if (type == "B") {
      eqs.push_back(LinkB{e.at("from").get<int>(), e.at("to").get<int>(), parse_poly(e.at("g").get<std::string>())});
    } else {
      fail(ErrorCode::parse, "unknown equation type \"" + type + "\"");
    }
  }
  return StructuredVariety(j.at("n").get<int>(), std::move(eqs));
}

std::optional<unsigned> check_periodic(const StructuredVariety& v, const PolyDS& ds, unsigned n_max) {
  for (unsigned n = 1; n <= n_max; ++n) {
    bool ok = true;
    for (const auto& e : v.equations()) {
      if (auto* a = std::get_if<VertA>(&e)) {
        ProjPoint y = a->zeta;
        for (unsigned s = 0; s < n; ++s) y = apply(ds.f(), y);
        ok = y == a->zeta;
      }
      if (!ok) break;
    }
    for (const auto& e : v.equations()) {
      if (!ok) break;
      if (auto* b = std::get_if<LinkB>(&e)) {
        UniPoly fn = ds.iterate(n);
        ok = compose(b->g, fn) == compose(fn, b->g);
      }
    }
    if (ok) return n;
  }
  return std::nullopt;
}

StructuredVariety push_vertical(const StructuredVariety& v, const PolyDS& ds, unsigned k) {
  std::vector<Equation> eqs = v.equations();
  for (auto& e : eqs) {
    if (auto* a = std::get_if<VertA>(&e))
      for (unsigned s = 0; s < k; ++s) a->zeta = apply(ds.f(), a->zeta);
  }
  return StructuredVariety(v.n(), std::move(eqs));
}

namespace {

std::vector<Equation> links_of(const StructuredVariety& v) {
  std::vector<Equation> out;
  for (const auto& e : v.equations())
    if (std::holds_alternative<LinkB>(e)) out.push_back(e);
  return out;
}

// Common period of the links (1 when there are none).
unsigned link_period(const StructuredVariety& v, const PolyDS& ds, unsigned n_max) {
  auto links = links_of(v);
  if (links.empty()) return 1;
  auto nb = check_periodic(StructuredVariety(v.n(), links), ds, n_max);
  if (!nb)
    fail(ErrorCode::unsupported,
         "type (B) equations are not periodic; their images under phi are not structured");
  return *nb;
}

}  // namespace

std::optional<PreperiodicWitness> check_preperiodic(const StructuredVariety& v, const PolyDS& ds, unsigned k_max,
                                                    unsigned n_max) {
  const unsigned step = link_period(v, ds, n_max);
  for (unsigned k = 0; k <= k_max; k += step) {
    StructuredVariety vk = push_vertical(v, ds, k);
    if (auto n = check_periodic(vk, ds, n_max)) return PreperiodicWitness{k, *n};
  }
  return std::nullopt;
}

bool PrecRelation::has(int i, int j) const { return witness(i, j) != nullptr; }

const UniPoly* PrecRelation::witness(int i, int j) const {
  for (const auto& [key, g] : pairs)
    if (key.first == i && key.second == j) return &g;
  return nullptr;
}

std::set<std::pair<int, int>> PrecRelation::as_set() const {
  std::set<std::pair<int, int>> s;
  for (const auto& p : pairs) s.insert(p.first);
  return s;
}

namespace {

PrecRelation build_relation(const StructuredVariety& v, const PolyDS& ds, unsigned period) {
  PrecRelation rel;
  for (int i = 1; i <= v.n(); ++i)
    if (v.pins()[static_cast<std::size_t>(i)]) rel.pinned.insert(i);
  auto free_axis = [&](int i) { return !rel.pinned.count(i); };
  const UniPoly fn = ds.iterate(period);
  auto commutes = [&](const UniPoly& g) { return compose(g, fn) == compose(fn, g); };
  auto add = [&](int i, int j, const UniPoly& g) {
    if (rel.has(i, j) || !commutes(g)) return false;
    rel.pairs.push_back({{i, j}, g});
    if (i != j && g.degree() == 1 && !rel.has(j, i)) rel.pairs.push_back({{j, i}, inverse_linear(g)});
    return true;
  };
  for (int i = 1; i <= v.n(); ++i)
    if (free_axis(i)) add(i, i, UniPoly::x());
  for (const auto& e : v.equations())
    if (auto* b = std::get_if<LinkB>(&e); b && free_axis(b->from) && free_axis(b->to)) add(b->from, b->to, b->g);

  for (bool changed = true; changed;) {
    changed = false;
    const auto snapshot = rel.pairs;
    for (const auto& [p1, g1] : snapshot) {
      for (const auto& [p2, g2] : snapshot) {
        // transitivity: x_j = g1(x_i), x_k = g2(x_j)
        if (p1.second == p2.first && p1.first != p1.second && p2.first != p2.second && p1.first != p2.second)
          changed = add(p1.first, p2.second, compose(g2, g1)) || changed;
        // upper chain extension: x_j = g1(x_i), x_k = g2(x_i)
        if (p1.first == p2.first && p1.first != p1.second && p2.first != p2.second && p1.second != p2.second) {
          int j = p1.second, k = p2.second;
          if (!rel.has(j, k) && !rel.has(k, j)) {
            if (g2.degree() % g1.degree() == 0) {
              if (auto u = left_factor(g2, g1)) changed = add(j, k, *u) || changed;
            } else if (g1.degree() % g2.degree() == 0) {
              if (auto u = left_factor(g1, g2)) changed = add(k, j, *u) || changed;
            }
          }
        }
        // lower chain extension: x_k = g1(x_i) = g2(x_j); implied when one side is linear
        if (p1.second == p2.second && p1.first != p2.first && p1.first != p1.second && p2.first != p2.second) {
          int i = p1.first, j = p2.first;
          if (!rel.has(i, j) && !rel.has(j, i)) {
            if (g2.degree() == 1)
              changed = add(i, j, compose(inverse_linear(g2), g1)) || changed;
            else if (g1.degree() == 1)
              changed = add(j, i, compose(inverse_linear(g1), g2)) || changed;
          }
        }
      }
    }
  }
  std::sort(rel.pairs.begin(), rel.pairs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return rel;
}

}  // namespace

PrecRelation prec_relation(const StructuredVariety& v, const PolyDS& ds, unsigned n_max) {
  auto n = check_periodic(v, ds, n_max);
  require(n.has_value(), "prec_relation needs a periodic variety");
  return build_relation(v, ds, *n);
}

ChainDecomposition chain_decompose(const StructuredVariety& v, const PolyDS& ds, unsigned n_max) {
  unsigned period;
  if (auto n = check_periodic(v, ds, n_max)) {
    period = *n;
  } else {
    require(check_preperiodic(v, ds, n_max, n_max).has_value(),
            "chain_decompose needs a periodic or preperiodic variety");
    period = link_period(v, ds, n_max);
  }
  PrecRelation rel = build_relation(v, ds, period);

  ChainDecomposition out;
  out.n = v.n();
  for (int i : rel.pinned) out.pinned.emplace_back(i, *v.pins()[static_cast<std::size_t>(i)]);

  std::vector<int> parent(static_cast<std::size_t>(v.n()) + 1);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (const auto& [p, g] : rel.pairs) parent[find(p.first)] = find(p.second);

  std::map<int, std::vector<int>> comps;
  for (int i = 1; i <= v.n(); ++i)
    if (!rel.pinned.count(i)) comps[find(i)].push_back(i);
  std::vector<std::vector<int>> groups;
  for (auto& [r, axes] : comps) groups.push_back(axes);
  std::sort(groups.begin(), groups.end());

  std::map<int, std::size_t> chain_of;
  for (auto& axes : groups) {
    std::map<int, int> preds;
    for (int j : axes)
      for (int i : axes)
        if (i != j && rel.has(i, j)) ++preds[j];
    std::sort(axes.begin(), axes.end(), [&](int a, int b) {
      return preds[a] != preds[b] ? preds[a] < preds[b] : a < b;
    });
    Chain c;
    c.axes = axes;
    for (std::size_t t = 0; t + 1 < axes.size(); ++t) {
      const UniPoly* w = rel.witness(axes[t], axes[t + 1]);
      c.links.push_back(w ? std::optional<UniPoly>(*w) : std::nullopt);
    }
    for (int a : axes) chain_of[a] = out.chains.size();
    out.chains.push_back(std::move(c));
  }
  for (const auto& e : v.equations()) {
    auto* b = std::get_if<LinkB>(&e);
    if (!b) continue;
    int owner = !rel.pinned.count(b->from) ? b->from : b->to;
    if (rel.pinned.count(owner)) continue;  // both ends pinned
    out.chains[chain_of[owner]].equations.push_back(e);
  }
  return out;
}

bool ChainDecomposition::contains(const std::vector<ProjPoint>& p) const {
  require(static_cast<int>(p.size()) == n, "point has the wrong dimension");
  auto at = [&](int axis) -> const ProjPoint& { return p[static_cast<std::size_t>(axis - 1)]; };
  for (const auto& [axis, z] : pinned)
    if (!(at(axis) == z)) return false;
  for (const auto& c : chains) {
    for (std::size_t t = 0; t < c.links.size(); ++t)
      if (c.links[t] && !(at(c.axes[t + 1]) == apply(*c.links[t], at(c.axes[t])))) return false;
    for (const auto& e : c.equations) {
      const auto& b = std::get<LinkB>(e);
      if (!(at(b.to) == apply(b.g, at(b.from)))) return false;
    }
  }
  return true;
}

nlohmann::json ChainDecomposition::to_json() const {
  nlohmann::json pins = nlohmann::json::array(), cs = nlohmann::json::array();
  for (const auto& [axis, z] : pinned) pins.push_back({{"axis", axis}, {"zeta", z.str()}});
  for (const auto& c : chains) {
    nlohmann::json links = nlohmann::json::array();
    for (const auto& l : c.links) links.push_back(l ? nlohmann::json(l->str()) : nlohmann::json());
    cs.push_back({{"axes", c.axes}, {"links", links}});
  }
  return {{"n", n}, {"pinned", pins}, {"chains", cs}};
}

UniPoly intersect_with_curve(const BiPoly& f, const UniPoly& g) {
  require(!f.is_zero(), "curve equation must be nonzero");
  UniPoly r = f.substitute_y(g);
  if (r.is_zero()) fail(ErrorCode::contained_in_v, "F(x, g(x)) vanishes: the curve lies in y = g(x)");
  return IntPoly::from_rational(r).to_uni_full();
}

}  // namespace splitdyn
