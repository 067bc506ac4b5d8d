#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "whf/cli.hpp"

namespace whf::cli {

namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorKind::BadConfig, what); }

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) bad(where + " must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, _] : j.items())
    if (!ok.count(k)) bad("unknown key '" + k + "' in " + where);
}

double number(const json& j, const std::string& what) {
  if (!j.is_number()) bad(what + " must be a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) bad(what + " must be finite");
  return x;
}

int count(const json& j, const std::string& what) {
  if (!j.is_number_integer()) bad(what + " must be an integer");
  return j.get<int>();
}

cplx complex_param(const json& j, const std::string& what) {
  try {
    return complex_from_json(j);
  } catch (const Error&) {
    bad(what + " must be a number or a [re, im] pair");
  }
}

CRational rational_param(const json& j, const std::string& what) {
  try {
    return rational_from_json(j);
  } catch (const Error& e) {
    bad(what + ": " + e.what());
  }
}

}  // namespace

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonCanonical:
    case ErrorKind::R2SystemSingular:
    case ErrorKind::NonZeroWinding: return kExitNonCanonical;
    case ErrorKind::DegenerateBranch:
    case ErrorKind::BranchPointNearContour: return kExitDegenerate;
    case ErrorKind::UnsupportedMultiplicity: return kExitMultiplicity;
    case ErrorKind::BadConfig: return kExitBadConfig;
    default: return kExitInvariant;
  }
}

std::vector<std::pair<double, double>> GridSpec::points() const {
  auto node = [](double lo, double hi, int n, int i) { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); };
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i < rho_n; ++i)
    for (int j = 0; j < v_n; ++j) out.emplace_back(node(rho_min, rho_max, rho_n, i), node(v_min, v_max, v_n, j));
  return out;
}

std::pair<double, double> RunConfig::reference_point() const {
  switch (spec.family) {
    case Family::aiii_eps: return {4.0, 3.0};
    case Family::aiii_cs: return {3.0, 5.0};
    case Family::custom: break;
  }
  return {grid.rho_min, grid.v_min};
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  fail(ErrorKind::BadConfig, "expected a number or [re, im]");
}

json poly_to_json(const CPoly& p) {
  json a = json::array();
  for (auto c : p.coeffs()) a.push_back(complex_to_json(c));
  return a;
}

CPoly poly_from_json(const json& j) {
  if (!j.is_array()) fail(ErrorKind::BadConfig, "coefficients must be an array");
  std::vector<cplx> c;
  for (const auto& x : j) c.push_back(complex_from_json(x));
  return CPoly(std::move(c));
}

json rational_to_json(const CRational& r) {
  json o = json::object();
  o["num"] = poly_to_json(r.num());
  o["den"] = poly_to_json(r.den());
  return o;
}

CRational rational_from_json(const json& j) {
  if (j.is_number() || j.is_array()) return CRational::constant(complex_from_json(j));
  only_keys(j, "rational", {"num", "den"});
  const CPoly num = j.contains("num") ? poly_from_json(j["num"]) : CPoly{};
  const CPoly den = j.contains("den") ? poly_from_json(j["den"]) : CPoly::constant(1.0);
  if (den.is_zero()) fail(ErrorKind::BadConfig, "zero denominator");
  return rat_normalize(num, den);
}

RunConfig parse_config(const json& j) {
  only_keys(j, "config", {"problem", "contour", "grid", "tolerances", "output", "workers"});
  RunConfig cfg;

  if (!j.contains("problem")) bad("missing 'problem'");
  const json& pr = j["problem"];
  only_keys(pr, "problem", {"family", "params", "lambda"});
  if (!pr.contains("family") || !pr["family"].is_string()) bad("problem.family must be a string");
  cfg.family = pr["family"].get<std::string>();
  const json params = pr.contains("params") ? pr["params"] : json::object();
  std::optional<int> lambda;
  if (pr.contains("lambda")) {
    lambda = count(pr["lambda"], "problem.lambda");
    if (*lambda != 1 && *lambda != -1) bad("problem.lambda must be +1 or -1");
  }

  if (cfg.family == "aiii_eps") {
    only_keys(params, "problem.params", {"eps"});
    cfg.spec = MonodromySpec::epsilon(params.contains("eps") ? complex_param(params["eps"], "eps") : cplx(1.0));
    if (lambda && *lambda != 1) bad("aiii_eps requires lambda = +1");
  } else if (cfg.family == "aiii_cs") {
    only_keys(params, "problem.params", {"c", "s"});
    if (!params.contains("c") || !params.contains("s")) bad("aiii_cs needs params c and s");
    cfg.spec = MonodromySpec::cs(complex_param(params["c"], "c"), complex_param(params["s"], "s"));
    if (lambda && *lambda != -1) bad("aiii_cs requires lambda = -1");
  } else if (cfg.family == "custom") {
    only_keys(params, "problem.params", {"variable", "entries"});
    if (!lambda) bad("custom families need problem.lambda");
    Variable var = Variable::omega;
    if (params.contains("variable")) {
      if (!params["variable"].is_string()) bad("params.variable must be a string");
      const auto s = params["variable"].get<std::string>();
      if (s == "tau") var = Variable::tau;
      else if (s != "omega") bad("params.variable must be 'omega' or 'tau'");
    }
    if (!params.contains("entries")) bad("custom families need params.entries");
    const json& e = params["entries"];
    only_keys(e, "params.entries", {"m11", "m12", "m21", "m22"});
    for (const char* k : {"m11", "m12", "m22"})
      if (!e.contains(k)) bad(std::string("missing entry ") + k);
    const CRational m12 = rational_param(e["m12"], "m12");
    cfg.spec = MonodromySpec::custom({rational_param(e["m11"], "m11"), m12,
                                      e.contains("m21") ? rational_param(e["m21"], "m21") : m12,
                                      rational_param(e["m22"], "m22")},
                                     *lambda, var);
  } else {
    bad("unknown family '" + cfg.family + "'");
  }
  try {
    validate(cfg.spec);
  } catch (const Error& e) {
    bad(e.what());
  }

  if (j.contains("contour")) {
    only_keys(j["contour"], "contour", {"margin"});
    if (j["contour"].contains("margin")) cfg.margin = number(j["contour"]["margin"], "contour.margin");
    if (!(cfg.margin > 0.0 && cfg.margin < 0.5)) bad("contour.margin must lie in (0, 0.5)");
  }

  const auto ref = std::pair<double, double>{cfg.spec.family == Family::aiii_cs ? 3.0 : 4.0,
                                             cfg.spec.family == Family::aiii_cs ? 5.0 : 3.0};
  cfg.grid = {ref.first, ref.first, 1, ref.second, ref.second, 1};
  if (j.contains("grid")) {
    const json& g = j["grid"];
    only_keys(g, "grid", {"rho_min", "rho_max", "rho_n", "v_min", "v_max", "v_n"});
    for (const char* k : {"rho_min", "rho_max", "rho_n", "v_min", "v_max", "v_n"})
      if (!g.contains(k)) bad(std::string("grid.") + k + " is required");
    cfg.grid.rho_min = number(g["rho_min"], "grid.rho_min");
    cfg.grid.rho_max = number(g["rho_max"], "grid.rho_max");
    cfg.grid.rho_n = count(g["rho_n"], "grid.rho_n");
    cfg.grid.v_min = number(g["v_min"], "grid.v_min");
    cfg.grid.v_max = number(g["v_max"], "grid.v_max");
    cfg.grid.v_n = count(g["v_n"], "grid.v_n");
  }
  if (cfg.grid.rho_n < 1 || cfg.grid.v_n < 1) bad("grid sizes must be at least 1");
  if (!(cfg.grid.rho_min > 0.0)) bad("grid.rho_min must be positive");
  if (cfg.grid.rho_max < cfg.grid.rho_min || cfg.grid.v_max < cfg.grid.v_min) bad("grid bounds are reversed");

  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    only_keys(t, "tolerances", {"verify_tol", "quadrature_tol", "fd_step"});
    if (t.contains("verify_tol")) cfg.verify_tol = number(t["verify_tol"], "verify_tol");
    if (t.contains("quadrature_tol")) cfg.quadrature_tol = number(t["quadrature_tol"], "quadrature_tol");
    if (t.contains("fd_step")) cfg.fd_step = number(t["fd_step"], "fd_step");
  }
  if (!(cfg.verify_tol > 0.0) || !(cfg.quadrature_tol > 0.0) || !(cfg.fd_step > 0.0)) bad("tolerances must be positive");

  if (j.contains("output")) {
    const json& o = j["output"];
    only_keys(o, "output", {"report_path", "table_path"});
    for (const char* k : {"report_path", "table_path"})
      if (o.contains(k) && !o[k].is_string()) bad(std::string("output.") + k + " must be a string");
    if (o.contains("report_path")) cfg.report_path = o["report_path"].get<std::string>();
    if (o.contains("table_path")) cfg.table_path = o["table_path"].get<std::string>();
  }
  if (j.contains("workers")) {
    cfg.workers = count(j["workers"], "workers");
    if (cfg.workers < 0) bad("workers must be non-negative");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    bad(std::string("parse error: ") + e.what());
  }
  return parse_config(j);
}

}  // namespace whf::cli
