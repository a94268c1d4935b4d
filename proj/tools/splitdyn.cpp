// splitdyn <command> [flags] --json out.json
//
// Exit codes: 0 ok, 1 a verification found a failing certificate,
// 2 precondition or input error, 3 budget exhausted.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "splitdyn/error.hpp"
#include "splitdyn/lab.hpp"

using namespace splitdyn;
using nlohmann::json;

namespace {

struct Common {
  std::string json_path;
  std::uint64_t seed = 42;
};

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::budget:
    case ErrorCode::degree_cap:
    case ErrorCode::precision:
    case ErrorCode::non_convergence:
      return 3;
    default:
      return 2;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Inline JSON, or @path.
json load_json_arg(const std::string& text) {
  std::string body = !text.empty() && text[0] == '@' ? read_file(text.substr(1)) : text;
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw ParseError(e.byte, "malformed JSON");
  }
}

StructuredVariety load_variety(const std::string& text) { return StructuredVariety::from_json(load_json_arg(text)); }

void emit(const Common& c, json report, double seconds) {
  report["config"]["seed"] = c.seed;
  report["wall_clock_seconds"] = seconds;
  const std::string out = report.dump(2);
  if (c.json_path.empty()) {
    std::cout << out << "\n";
    return;
  }
  std::ofstream f(c.json_path);
  require(static_cast<bool>(f), "cannot write " + c.json_path);
  f << out << "\n";
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--json", c.json_path, "write the report here instead of stdout");
  sub->add_option("--seed", c.seed, "recorded in the report; every command is deterministic");
}

json verification_json(const lab::VerifyOutcome& v) {
  json j = v.to_json();
  j["all_passed"] = v.passed == v.checked;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Experiments on split polynomial dynamics: Hasse searches, heights, intersection sweeps"};
  app.require_subcommand(1);
  Common common;
  int status = 0;

  // classify
  std::string f_text;
  auto* classify = app.add_subcommand("classify", "Special or disintegrated verdict with a transcript");
  classify->add_option("--f", f_text, "polynomial in x")->required();
  add_common(classify, common);

  // orbit
  std::string point_text;
  std::uint64_t prime = 0;
  unsigned m = 1;
  auto* orbit = app.add_subcommand("orbit", "tail and cycle of a point mod p^m");
  orbit->add_option("--f", f_text)->required();
  orbit->add_option("--point", point_text, "comma separated coordinates, inf allowed")->required();
  orbit->add_option("--p", prime)->required();
  orbit->add_option("--m", m);
  add_common(orbit, common);

  // chains
  std::string variety_text;
  unsigned n_max = 4;
  auto* chains = app.add_subcommand("chains", "periodicity and chain decomposition of a structured variety");
  chains->add_option("--f", f_text)->required();
  chains->add_option("--variety", variety_text, "JSON {n, equations} inline or @file")->required();
  chains->add_option("--n-max", n_max);
  add_common(chains, common);

  // hasse
  std::uint64_t prime_bound = limits::kDefaultPrimeBound;
  unsigned m_max = limits::kDefaultMMax;
  unsigned horizon = limits::kOrbitAvoidanceHorizon;
  bool verify_flag = false;
  auto* hasse = app.add_subcommand("hasse", "p-adic certificates that the orbit avoids V");
  hasse->add_option("--f", f_text)->required();
  hasse->add_option("--variety", variety_text)->required();
  hasse->add_option("--point", point_text)->required();
  hasse->add_option("--prime-bound", prime_bound);
  hasse->add_option("--m-max", m_max);
  hasse->add_option("--horizon", horizon);
  hasse->add_flag("--verify", verify_flag, "rerun the independent checker on every certificate");
  add_common(hasse, common);

  // verify
  std::string report_path;
  auto* verify = app.add_subcommand("verify", "check the certificates of a hasse or split report");
  verify->add_option("--report", report_path)->required();
  add_common(verify, common);

  // bmz
  std::string curve_text, bidegree_text;
  std::vector<std::string> g_texts;
  unsigned iterates = 0;
  auto* bmz = app.add_subcommand("bmz", "heights of the points of C on graphs of commuting maps");
  bmz->add_option("--f", f_text)->required();
  bmz->add_option("--F", curve_text, "curve F(x, y), text or nested list")->required();
  bmz->add_option("--bidegree", bidegree_text, "expected M,N; checked against F");
  bmz->add_option("--g", g_texts, "explicit maps, repeatable");
  bmz->add_option("--iterates", iterates, "use g = f^1 .. f^m");
  add_common(bmz, common);

  // gk-sweep
  std::string p_text = "x", q_text;
  unsigned k_max = 8;
  auto* gk = app.add_subcommand("gk-sweep", "degrees and heights of G_k = f^k(Q) - f^k(P)");
  gk->add_option("--f", f_text)->required();
  gk->add_option("--P", p_text);
  gk->add_option("--Q", q_text)->required();
  gk->add_option("--k-max", k_max);
  add_common(gk, common);

  // eisenstein
  int d = 2;
  std::uint64_t p_family = 3;
  auto* eis = app.add_subcommand("eisenstein", "the family f = x^d + p, curve y = x + p");
  eis->add_option("--d", d);
  eis->add_option("--p", p_family);
  eis->add_option("--k-max", k_max);
  add_common(eis, common);

  // split
  std::vector<std::string> fs_text, ps_text;
  auto* split = app.add_subcommand("split", "reduce a split map to its diagonal q-system and run hasse");
  split->add_option("--f", fs_text, "f_1 .. f_n, repeatable")->required();
  split->add_option("--p-map", ps_text, "p_1 .. p_n with f_i o p_i = p_i o q, repeatable")->required();
  split->add_option("--q", q_text)->required();
  split->add_option("--variety", variety_text, "V on the q side")->required();
  split->add_option("--point", point_text, "P on the q side")->required();
  split->add_option("--prime-bound", prime_bound);
  split->add_option("--m-max", m_max);
  split->add_option("--horizon", horizon);
  split->add_flag("--verify", verify_flag);
  add_common(split, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  auto seconds = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
  try {
    if (*classify) {
      PolyDS ds(parse_poly(f_text));
      json r = lab::classify_result(ds);
      emit(common, lab::make_report("classify", {{"f", ds.f().str()}}, r, {{"verdict", r["verdict"]}}), seconds());
    } else if (*orbit) {
      PolyDS ds(parse_poly(f_text));
      auto pt = lab::parse_point(point_text);
      json r = lab::orbit_result(ds, pt, prime, m);
      json cfg = {{"f", ds.f().str()}, {"point", lab::point_json(pt)}, {"p", prime}, {"m", m}};
      emit(common, lab::make_report("orbit", cfg, r, {{"tail_len", r["tail_len"]}, {"cycle_len", r["cycle_len"]}}),
           seconds());
    } else if (*chains) {
      PolyDS ds(parse_poly(f_text));
      auto v = load_variety(variety_text);
      json r = lab::chains_result(ds, v, n_max);
      json cfg = {{"f", ds.f().str()}, {"variety", v.to_json()}, {"n_max", n_max}};
      emit(common, lab::make_report("chains", cfg, r, {{"chains", r["decomposition"]["chains"].size()}}), seconds());
    } else if (*hasse) {
      lab::HasseConfig cfg;
      cfg.f = parse_poly(f_text);
      cfg.v = load_variety(variety_text);
      cfg.point = lab::parse_point(point_text);
      cfg.prime_bound = prime_bound;
      cfg.m_max = m_max;
      cfg.horizon = horizon;
      auto run = lab::run_hasse(cfg);
      json summary = run.summary_json();
      if (verify_flag) {
        auto v = lab::verify_certificates(PolyDS(cfg.f), cfg.v, cfg.point, run.search.certificates);
        summary["verification"] = verification_json(v);
        if (v.passed != v.checked) status = 1;
      }
      emit(common, lab::make_report("hasse", cfg.to_json(), run.result_json(), summary), seconds());
    } else if (*verify) {
      json rep = load_json_arg("@" + report_path);
      const std::string cmd = rep.at("command").get<std::string>();
      const json& cfg = rep.at("config");
      json certs_json;
      UniPoly f;
      if (cmd == "hasse") {
        f = parse_poly(cfg.at("f").get<std::string>());
        certs_json = rep.at("result").at("certificates");
      } else if (cmd == "split") {
        f = parse_poly(cfg.at("q").get<std::string>());
        certs_json = rep.at("result").at("diagonal").at("certificates");
      } else {
        fail(ErrorCode::precondition, "verify needs a hasse or split report, got " + cmd);
      }
      auto v = StructuredVariety::from_json(cfg.at("variety"));
      std::vector<ProjPoint> pt;
      for (const auto& c : cfg.at("point")) pt.push_back(parse_proj_point(c.get<std::string>()));
      std::vector<HasseCertificate> certs;
      for (const auto& c : certs_json) certs.push_back(HasseCertificate::from_json(c));
      auto out = lab::verify_certificates(PolyDS(f), v, pt, certs);
      if (out.passed != out.checked) status = 1;
      json vcfg = {{"report", report_path}, {"command", cmd}};
      emit(common, lab::make_report("verify", vcfg, out.to_json(), verification_json(out)), seconds());
    } else if (*bmz) {
      lab::BmzConfig cfg;
      cfg.f = parse_poly(f_text);
      cfg.curve = lab::parse_curve(curve_text);
      if (!bidegree_text.empty()) {
        auto bd = lab::parse_point(bidegree_text);
        require(bd.size() == 2, "--bidegree takes M,N");
        require(bd[0] == ProjPoint(Rational(cfg.curve.deg_x())) && bd[1] == ProjPoint(Rational(cfg.curve.deg_y())),
                "F has bidegree (" + std::to_string(cfg.curve.deg_x()) + "," + std::to_string(cfg.curve.deg_y()) +
                    "), not " + bidegree_text);
      }
      PolyDS ds(cfg.f);
      for (const auto& g : g_texts) {
        cfg.maps.push_back(parse_poly(g));
        cfg.map_labels.push_back(g);
      }
      for (unsigned k = 1; k <= iterates; ++k) {
        cfg.maps.push_back(ds.iterate(k));
        cfg.map_labels.push_back("f^" + std::to_string(k));
      }
      require(!cfg.maps.empty(), "give --g or --iterates");
      auto run = lab::run_bmz(cfg);
      emit(common, lab::make_report("bmz", cfg.to_json(), run.result_json(), run.summary_json()), seconds());
    } else if (*gk) {
      PolyDS ds(parse_poly(f_text));
      UniPoly pp = parse_poly(p_text), qq = parse_poly(q_text);
      auto sw = lab::run_gk_sweep(ds, pp, qq, k_max);
      json cfg = {{"f", ds.f().str()}, {"P", pp.str()}, {"Q", qq.str()}, {"k_max", k_max}};
      emit(common, lab::make_report("gk-sweep", cfg, sw.result_json(), sw.summary_json()), seconds());
    } else if (*eis) {
      auto fam = lab::run_eisenstein_family(d, p_family, k_max);
      json cfg = {{"d", d}, {"p", p_family}, {"k_max", k_max}};
      emit(common, lab::make_report("eisenstein", cfg, fam.result_json(), fam.summary_json()), seconds());
    } else if (*split) {
      lab::SplitConfig cfg;
      for (const auto& s : fs_text) cfg.fs.push_back(parse_poly(s));
      for (const auto& s : ps_text) cfg.ps.push_back(parse_poly(s));
      cfg.q = parse_poly(q_text);
      cfg.v = load_variety(variety_text);
      cfg.point = lab::parse_point(point_text);
      cfg.prime_bound = prime_bound;
      cfg.m_max = m_max;
      cfg.horizon = horizon;
      auto run = lab::run_split(cfg);
      json summary = run.summary_json();
      if (verify_flag) {
        auto v = lab::verify_certificates(PolyDS(cfg.q), cfg.v, cfg.point, run.diagonal.search.certificates);
        summary["verification"] = verification_json(v);
        if (v.passed != v.checked) status = 1;
      }
      emit(common, lab::make_report("split", cfg.to_json(), run.result_json(), summary), seconds());
    }
  } catch (const Error& e) {
    std::cerr << json{{"error", to_string(e.code())}, {"message", e.what()}}.dump() << "\n";
    return exit_code_for(e.code());
  } catch (const json::exception& e) {
    std::cerr << json{{"error", "parse"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }
  return status;
}
