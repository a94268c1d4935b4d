#include "splitdyn/lab.hpp"

#include <algorithm>
#include <cmath>

#include "splitdyn/error.hpp"
#include "splitdyn/integer_factor.hpp"
#include "splitdyn/poly_factor.hpp"
#include "splitdyn/resultant.hpp"

namespace splitdyn::lab {

using nlohmann::json;

json make_report(const std::string& command, const json& config, const json& result, const json& summary) {
  return {{"schema_version", kSchemaVersion},
          {"command", command},
          {"config", config},
          {"result", result},
          {"summary", summary}};
}

std::vector<ProjPoint> parse_point(std::string_view text) {
  std::vector<ProjPoint> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = text.find(',', start);
    std::string_view part = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
    while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
    if (part.empty()) throw ParseError(start, "empty coordinate in point");
    out.push_back(parse_proj_point(part));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

BiPoly parse_curve(std::string_view text) {
  std::size_t i = text.find_first_not_of(' ');
  if (i == text.npos || text[i] != '[') return parse_bipoly(text);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.byte, "malformed coefficient list");
  }
  std::vector<std::vector<Rational>> rows;
  for (const auto& row : j) {
    if (!row.is_array()) fail(ErrorCode::parse, "coefficient rows must be lists");
    rows.emplace_back();
    for (const auto& c : row) {
      if (c.is_string())
        rows.back().push_back(parse_rational(c.get<std::string>()));
      else if (c.is_number_integer())
        rows.back().emplace_back(c.get<long>());
      else
        fail(ErrorCode::parse, "coefficients must be integers or rational strings");
    }
  }
  return BiPoly(rows);
}

json point_json(const std::vector<ProjPoint>& p) {
  json out = json::array();
  for (const auto& x : p) out.push_back(x.str());
  return out;
}

json classify_result(const PolyDS& ds) {
  json j = classify(ds).to_json();
  j["f"] = ds.f().str();
  j["escape_constant"] = ds.escape_constant();
  return j;
}

json orbit_result(const PolyDS& ds, const std::vector<ProjPoint>& point, std::uint64_t p, unsigned m) {
  StructuredVariety none(static_cast<int>(point.size()), {});
  auto good = is_good_prime(ds, none, point, p);
  require(good.good, "p = " + std::to_string(p) + " is not a good prime for f and the point");
  json j = orbit_mod(ds, point, PadicContext(p, m)).to_json();
  j["p"] = p;
  j["m"] = m;
  return j;
}

json chains_result(const PolyDS& ds, const StructuredVariety& v, unsigned n_max) {
  json j;
  auto period = check_periodic(v, ds, n_max);
  j["period"] = period ? json(*period) : json();
  if (!period) {
    auto w = check_preperiodic(v, ds, n_max, n_max);
    require(w.has_value(), "the variety is neither periodic nor preperiodic within the search bounds");
    j["preperiodic"] = {{"k", w->k}, {"n", w->n}};
  }
  auto dec = chain_decompose(v, ds, n_max);
  j["decomposition"] = dec.to_json();
  if (period) {
    json rel = json::array();
    for (const auto& [pr, g] : prec_relation(v, ds, n_max).pairs)
      rel.push_back({{"i", pr.first}, {"j", pr.second}, {"g", g.str()}});
    j["relation"] = rel;
  }
  return j;
}

// ---- Hasse

json HasseConfig::to_json() const {
  return {{"f", f.str()},
          {"variety", v.to_json()},
          {"point", point_json(point)},
          {"prime_bound", prime_bound},
          {"m_max", m_max},
          {"horizon", horizon}};
}

json HasseRun::result_json() const {
  json j = search.to_json();
  j["verified"] = verified;
  return j;
}

json HasseRun::summary_json() const {
  return {{"certified_primes", search.certificates.size()},
          {"good_primes_tried", search.good_primes.size()},
          {"density", search.density()},
          {"all_verified", verified == search.certificates.size()}};
}

HasseRun run_hasse(const HasseConfig& cfg) {
  PolyDS ds(cfg.f);
  HasseRun run;
  run.search = hasse_search(ds, cfg.v, cfg.point, cfg.prime_bound, cfg.m_max, cfg.horizon);
  std::vector<HasseCertificate> kept;
  for (auto& c : run.search.certificates)
    if (verify_certificate(ds, cfg.v, cfg.point, c)) kept.push_back(std::move(c));
  run.search.certificates = std::move(kept);
  run.verified = run.search.certificates.size();
  return run;
}

json VerifyOutcome::to_json() const {
  return {{"checked", checked}, {"passed", passed}, {"failed_primes", failed_primes}};
}

VerifyOutcome verify_certificates(const PolyDS& ds, const StructuredVariety& v, const std::vector<ProjPoint>& point,
                                  const std::vector<HasseCertificate>& certs) {
  VerifyOutcome out;
  for (const auto& c : certs) {
    ++out.checked;
    bool ok = false;
    try {
      ok = verify_certificate(ds, v, point, c);
    } catch (const Error&) {
      ok = false;
    }
    if (ok)
      ++out.passed;
    else
      out.failed_primes.push_back(c.p);
  }
  return out;
}

// ---- BMZ

json BmzConfig::to_json() const {
  json gs = json::array();
  for (std::size_t i = 0; i < maps.size(); ++i)
    gs.push_back({{"label", i < map_labels.size() ? map_labels[i] : ""}, {"g", maps[i].str()}});
  return {{"f", f.str()},
          {"curve", curve.str()},
          {"bidegree", {curve.deg_x(), curve.deg_y()}},
          {"maps", gs},
          {"height_degree_budget", height_degree_budget}};
}

json BmzFactor::to_json() const {
  return {{"factor", factor.str()},
          {"degree", factor.degree()},
          {"multiplicity", multiplicity},
          {"weil_height", weil_height},
          {"alpha", alpha.to_json()},
          {"beta", beta.to_json()},
          {"relation_gap", relation_gap},
          {"relation_allowance", relation_allowance},
          {"relation_holds", relation_holds()}};
}

json BmzItem::to_json() const {
  json fs = json::array();
  for (const auto& f : factors) fs.push_back(f.to_json());
  return {{"label", label},
          {"g", g.str()},
          {"deg_g", g.degree()},
          {"intersection", intersection.str()},
          {"factors", fs},
          {"max_canonical_height", max_canonical},
          {"max_weil_height", max_weil}};
}

bool BmzRun::all_relations_hold() const {
  for (const auto& it : items)
    for (const auto& f : it.factors)
      if (!f.relation_holds()) return false;
  return true;
}

json BmzRun::result_json() const {
  json j = json::array();
  for (const auto& it : items) j.push_back(it.to_json());
  return j;
}

json BmzRun::summary_json() const {
  double mc = 0, mw = 0;
  json seq = json::array();
  for (const auto& it : items) {
    mc = std::max(mc, it.max_canonical);
    mw = std::max(mw, it.max_weil);
    seq.push_back(it.max_canonical);
  }
  return {{"max_canonical_height", mc},
          {"max_weil_height", mw},
          {"per_map_max_canonical", seq},
          {"all_relations_hold", all_relations_hold()}};
}

BmzRun run_bmz(const BmzConfig& cfg) {
  require(cfg.curve.deg_x() > 0 && cfg.curve.deg_y() > 0, "the curve must involve both x and y");
  PolyDS ds(cfg.f);
  const int d = ds.degree();
  // Green-function heights when f allows them, pushforward Mahler measures
  // otherwise
  bool green = abs(ds.f().leading()) == 1;
  for (const auto& c : ds.f().coeffs()) green = green && c.get_den() == 1;
  BmzRun run;
  for (std::size_t i = 0; i < cfg.maps.size(); ++i) {
    BmzItem item;
    item.label = i < cfg.map_labels.size() ? cfg.map_labels[i] : cfg.maps[i].str();
    item.g = cfg.maps[i];
    item.intersection = intersect_with_curve(cfg.curve, item.g);
    const double deg_g = item.g.degree();
    if (item.intersection.degree() >= 1) {
      for (const auto& pf : factor_poly(item.intersection).factors) {
        BmzFactor bf;
        bf.factor = pf.factor;
        bf.multiplicity = pf.multiplicity;
        bf.weil_height = avg_root_height(pf.factor);
        IntPoly beta_poly(IntPoly::from_rational(pushforward_by(pf.factor.to_uni(), item.g)).primitive());
        if (green) {
          bf.alpha = green_canonical_height(ds, pf.factor);
          bf.beta = green_canonical_height(ds, beta_poly);
        } else {
          unsigned n = 1;
          while (static_cast<long>(pf.factor.degree()) * std::pow(d, n + 1) <= cfg.height_degree_budget) ++n;
          bf.alpha = factor_canonical_height(ds, pf.factor, n);
          bf.beta = factor_canonical_height(ds, beta_poly, n);
        }
        bf.relation_gap = std::abs(bf.beta.value - deg_g * bf.alpha.value);
        bf.relation_allowance = bf.beta.error_bound + deg_g * bf.alpha.error_bound;
        item.max_canonical = std::max(item.max_canonical, bf.alpha.value);
        item.max_weil = std::max(item.max_weil, bf.weil_height);
        item.factors.push_back(std::move(bf));
      }
    }
    run.items.push_back(std::move(item));
  }
  return run;
}

// ---- G_k sweep

json GkRow::to_json() const {
  return {{"k", k}, {"degree", degree}, {"coeff_height", coeff_height}, {"avg_root_height", avg_root_height}};
}

json GkSweep::result_json() const {
  json j = json::array();
  for (const auto& r : rows) j.push_back(r.to_json());
  return j;
}

json GkSweep::summary_json() const {
  return {{"c3", c3}, {"c4", c4}, {"c5", c5}, {"c3_positive", c3 > 0}, {"c5_stable", c5_stable}};
}

GkSweep run_gk_sweep(const PolyDS& ds, const UniPoly& p, const UniPoly& q, unsigned k_max) {
  require(k_max >= 1, "k_max must be at least 1");
  GkSweep sw;
  sw.d = ds.degree();
  sw.c3 = INFINITY;
  UniPoly fp = p, fq = q;
  std::vector<double> running;
  for (unsigned k = 1; k <= k_max; ++k) {
    fp = compose(ds.f(), fp);
    fq = compose(ds.f(), fq);
    UniPoly g = fq - fp;
    if (g.is_zero()) fail(ErrorCode::preperiodic_curve, "G_" + std::to_string(k) + " vanishes identically");
    GkRow row;
    row.k = k;
    row.degree = g.degree();
    IntPoly gi = IntPoly::from_rational(g);
    row.coeff_height = coefficient_height(gi);
    row.avg_root_height = g.degree() >= 1 ? avg_root_height(gi) : 0.0;
    const double dk = std::pow(sw.d, k);
    sw.c3 = std::min(sw.c3, row.degree / dk);
    sw.c4 = std::max(sw.c4, row.coeff_height / dk);
    sw.c5 = std::max(sw.c5, row.avg_root_height);
    running.push_back(sw.c5);
    sw.rows.push_back(row);
  }
  sw.c5_stable = running.back() <= running[(k_max - 1) / 2];
  return sw;
}

// ---- Eisenstein family

json EisensteinRow::to_json() const {
  return {{"k", k},
          {"s", s.str()},
          {"degree", s.degree()},
          {"factorization_exact", factorization_exact},
          {"eisenstein", eisenstein},
          {"avg_root_height", avg_root_height},
          {"max_root_height", max_root_height}};
}

json EisensteinFamily::result_json() const {
  json j = json::array();
  for (const auto& r : rows) j.push_back(r.to_json());
  return j;
}

json EisensteinFamily::summary_json() const {
  bool all_e = true, all_f = true;
  for (const auto& r : rows) {
    all_e = all_e && r.eisenstein;
    all_f = all_f && r.factorization_exact;
  }
  return {{"all_eisenstein", all_e},
          {"all_factorizations_exact", all_f},
          {"max_root_height", running_max},
          {"stable_from", stable_from}};
}

EisensteinFamily run_eisenstein_family(int d, std::uint64_t p, unsigned k_max) {
  require(d == 2, "only d = 2 is supported: for d > 2 the factorization needs the d-th roots of unity");
  require(is_probable_prime(BigInt(static_cast<unsigned long>(p))), "p must be prime");
  require(p > static_cast<std::uint64_t>(d), "p must exceed d");
  require(k_max >= 1, "k_max must be at least 1");
  EisensteinFamily fam;
  fam.d = d;
  fam.p = p;
  const Rational pr(static_cast<unsigned long>(p));
  const UniPoly f = UniPoly::monomial(1, static_cast<std::size_t>(d)) + UniPoly::constant(pr);
  UniPoly a = UniPoly::affine(1, pr), b = UniPoly::x();  // f^{k-1}(x+p), f^{k-1}(x)
  UniPoly g_prev = a - b;                                 // G_0 = p
  for (unsigned k = 1; k <= k_max; ++k) {
    EisensteinRow row;
    row.k = k;
    row.s = a + b;
    a = compose(f, a);
    b = compose(f, b);
    UniPoly g = a - b;
    row.factorization_exact = g == g_prev * row.s;
    IntPoly si = IntPoly::from_rational(row.s);
    row.eisenstein = eisenstein(si, BigInt(static_cast<unsigned long>(p)));
    row.avg_root_height = avg_root_height(si);
    if (row.eisenstein) {
      row.max_root_height = row.avg_root_height;  // irreducible: conjugate roots share their height
    } else {
      for (const auto& pf : factor_poly(row.s).factors)
        row.max_root_height = std::max(row.max_root_height, avg_root_height(pf.factor));
    }
    if (row.max_root_height > fam.running_max) {
      fam.running_max = row.max_root_height;
      fam.stable_from = k;
    }
    fam.rows.push_back(std::move(row));
    g_prev = std::move(g);
  }
  return fam;
}

// ---- split maps

json SplitConfig::to_json() const {
  json f = json::array(), p = json::array();
  for (const auto& x : fs) f.push_back(x.str());
  for (const auto& x : ps) p.push_back(x.str());
  return {{"fs", f},
          {"ps", p},
          {"q", q.str()},
          {"variety", v.to_json()},
          {"point", point_json(point)},
          {"prime_bound", prime_bound},
          {"m_max", m_max},
          {"horizon", horizon}};
}

json SplitRun::result_json() const {
  return {{"pushed_point", point_json(pushed_point)},
          {"conjugacy_checks", conjugacy_checks},
          {"diagonal", diagonal.result_json()},
          {"interpretation",
           "certificates concern the diagonal system (q,...,q) and the point P; the f-orbit of p(P) is the "
           "image under (p_1,...,p_n) of the q-orbit of P"}};
}

json SplitRun::summary_json() const {
  json s = diagonal.summary_json();
  s["semiconjugacy_verified"] = true;
  return s;
}

SplitRun run_split(const SplitConfig& cfg) {
  const std::size_t n = cfg.fs.size();
  require(n >= 1 && cfg.ps.size() == n, "need matching lists of f_i and p_i");
  require(static_cast<int>(n) == cfg.v.n() && cfg.point.size() == n, "dimension mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    require(cfg.ps[i].degree() >= 1, "each p_i must be nonconstant");
    if (!(compose(cfg.fs[i], cfg.ps[i]) == compose(cfg.ps[i], cfg.q)))
      fail(ErrorCode::semiconjugacy_fails, "f_" + std::to_string(i + 1) + " o p_" + std::to_string(i + 1) +
                                                " != p_" + std::to_string(i + 1) + " o q");
  }
  SplitRun run;
  for (std::size_t i = 0; i < n; ++i) run.pushed_point.push_back(apply(cfg.ps[i], cfg.point[i]));
  for (std::size_t i = 0; i < n; ++i) {
    ProjPoint up = cfg.point[i], down = run.pushed_point[i];
    for (unsigned k = 1; k <= 3; ++k) {
      up = apply(cfg.q, up);
      down = apply(cfg.fs[i], down);
      if (!(apply(cfg.ps[i], up) == down))
        fail(ErrorCode::semiconjugacy_fails, "orbit check failed on coordinate " + std::to_string(i + 1));
      ++run.conjugacy_checks;
    }
  }
  HasseConfig hc;
  hc.f = cfg.q;
  hc.v = cfg.v;
  hc.point = cfg.point;
  hc.prime_bound = cfg.prime_bound;
  hc.m_max = cfg.m_max;
  hc.horizon = cfg.horizon;
  run.diagonal = run_hasse(hc);
  return run;
}

}  // namespace splitdyn::lab
