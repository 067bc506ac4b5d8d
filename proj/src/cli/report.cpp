#include "whf/cli.hpp"

namespace whf::cli {

namespace {

json column_json(const std::array<CRational, 2>& col) {
  return json::array({rational_to_json(col[0]), rational_to_json(col[1])});
}

json matrix_json(const Mat2& m) {
  json out = json::array();
  for (int i = 0; i < 2; ++i) out.push_back(json::array({complex_to_json(m(i, 0)), complex_to_json(m(i, 1))}));
  return out;
}

json verification_json(const VerificationReport& r) {
  json o = json::object();
  o["boundary"] = r.boundary;
  o["x_at_zero"] = r.x_at_zero;
  o["determinant"] = r.determinant;
  o["symmetry"] = r.symmetry;
  o["propagation"] = r.propagation;
  o["r2_plus"] = r.r2_plus;
  o["r2_minus"] = r.r2_minus;
  o["tol"] = r.tol;
  o["pass"] = r.pass;
  return o;
}

}  // namespace

json factorization_report(const RunConfig& cfg, double rho, double v) {
  json rep = json::object();
  rep["family"] = cfg.family;
  rep["lambda"] = cfg.spec.lambda;
  rep["rho"] = rho;
  rep["v"] = v;
  try {
    const auto sp = branch_points(rho, v, cfg.spec.lambda, cfg.margin);
    rep["branch_points"] = {{"tau0", complex_to_json(sp.tau0)}, {"tau0tilde", complex_to_json(sp.tau0tilde)}};
    const auto m = spectral_substitute(cfg.spec, sp);
    const Contour c = make_contour(cfg.spec.lambda);
    const auto f = factorize(m, c);

    rep["f_plus"] = column_json(f.first.plus);
    rep["f_minus"] = column_json(f.first.minus);
    rep["s_plus"] = column_json(f.second.plus);
    rep["s_minus"] = column_json(f.second.minus);
    rep["r1"] = rational_to_json(f.r1);
    rep["r2"] = rational_to_json(f.r2);
    rep["r1_numerator"] = poly_to_json(f.r1_numerator);
    rep["r2_numerator"] = poly_to_json(f.r2_numerator);
    rep["p2"] = poly_to_json(f.sd.p2);
    rep["delta_plus"] = rational_to_json(f.delta.plus);
    rep["delta_minus"] = rational_to_json(f.delta.minus);

    const Mat2 axis = axis_matrix(f);
    rep["axis_matrix"] = matrix_json(axis);
    rep["Delta"] = metric_delta(axis);
    rep["chi"] = complex_to_json(metric_chi(axis));

    const auto ver = assemble_and_verify(m, f, c, cfg.verify_tol);
    rep["verification"] = verification_json(ver);
    rep["pass"] = ver.pass;
    rep["status"] = "ok";
    rep["exit_code"] = ver.pass ? kExitOk : kExitInvariant;
  } catch (const Error& e) {
    rep["pass"] = false;
    rep["status"] = std::string(to_string(e.kind()));
    rep["error"] = e.what();
    rep["exit_code"] = exit_code(e.kind());
  }
  return rep;
}

}  // namespace whf::cli
