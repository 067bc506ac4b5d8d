// Acceptance gate: one line per criterion, non-zero exit if any fails.

#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "fourier_oracle.hpp"
#include "whf/cli.hpp"

using namespace whf;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string sci(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.2e", x);
  return b;
}

Outcome golden_epsilon() {
  const auto g = fx::eps_golden();
  const auto f = factorize(g.m, g.c);
  const cplx expect[5] = {0.0, 0.0, 0.0, -1.0, 0.25};
  double r2 = f.r2_numerator.degree() == 4 ? 0.0 : 1.0;
  for (int k = 0; k <= 4; ++k) r2 = std::max(r2, std::abs(f.r2_numerator[k] - expect[k]));
  const auto cc = closed_form_columns(g.spec, g.sp);
  const double s = std::max(fx::column_deviation(f.second.plus, cc.second.plus),
                            fx::column_deviation(f.second.minus, cc.second.minus));
  return {r2 < 1e-9 && s < 1e-9, "R2 coefficient error " + sci(r2) + ", s+- vs closed form " + sci(s)};
}

Outcome golden_cs() {
  const auto g = fx::cs_golden();
  const auto f = factorize(g.m, g.c);
  double rel = 0.0;
  for (auto z : sample(g.c, 256)) {
    rel = std::max(rel, std::abs(f.second.plus[0](z) + f.first.plus[1](z)));
    rel = std::max(rel, std::abs(f.second.minus[0](z) - f.first.minus[1](z)));
  }
  const auto cc = closed_form_columns(g.spec, g.sp);
  double dev = 0.0;
  for (const auto* pair : {&f.first, &f.second}) {
    const auto& ref = pair == &f.first ? cc.first : cc.second;
    dev = std::max({dev, fx::column_deviation(pair->plus, ref.plus), fx::column_deviation(pair->minus, ref.minus)});
  }
  return {rel < 1e-10 && dev < 1e-9, "s1+ = -f2+, s1- = f2- residual " + sci(rel) + ", closed form " + sci(dev)};
}

Outcome verifier_suite() {
  Outcome o;
  for (const auto& [name, g] : {std::pair{"eps", fx::eps_golden()}, std::pair{"cs", fx::cs_golden()}}) {
    const auto f = factorize(g.m, g.c);
    const auto r = assemble_and_verify(g.m, f, g.c, 1e-10);
    const double core = std::max({r.boundary, r.x_at_zero, r.determinant, r.symmetry});
    const double cross = std::max(r.r2_plus, r.r2_minus);
    o.pass = o.pass && core < 1e-10 && cross < 1e-9;
    o.detail += std::string(o.detail.empty() ? "" : "; ") + name + ": identities " + sci(core) + ", r2 cross " + sci(cross);
  }
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  for (const auto& [name, g] : {std::pair{"eps", fx::eps_golden()}, std::pair{"cs", fx::cs_golden()}}) {
    const auto cols = solve_columns(g.m, g.c, {1.0, 0.0});
    const auto gal = oracle::galerkin_solve([&](cplx z) { return g.m.eval(z); }, Vec2(1.0, 0.0), 64);
    double d = 0.0;
    for (auto z : sample(g.c, 128)) {
      d = std::max(d, (gal.plus(z) - cols.plus_at(z)).cwiseAbs().maxCoeff());
      d = std::max(d, (gal.minus(z) - cols.minus_at(z)).cwiseAbs().maxCoeff());
    }
    o.pass = o.pass && d < 1e-8;
    o.detail += std::string(o.detail.empty() ? "N=64, " : "; ") + name + " " + sci(d);
  }
  return o;
}

Outcome metric_reproduction() {
  Outcome o;
  struct Case {
    const char* name;
    MonodromySpec spec;
    double delta;
    std::vector<double> rhos, vs;
  };
  const std::vector<Case> cases = {
      {"eps", MonodromySpec::epsilon(1.0), 4.0 / 17.0, {2.0, 3.0, 4.5, 5.0, 6.0}, {1.0, 2.0, 4.0, 5.0}},
      {"cs", MonodromySpec::cs(std::sqrt(2.0), 1.0), 9.0 / 83.0, {1.0, 2.0, 2.5, 3.5, 4.0}, {4.5, 5.5, 6.0, 7.0}},
  };
  for (const auto& c : cases) {
    FieldIntegrator fi(c.spec);
    fi.calibrate();
    const auto cal = fi.calibration();
    const double d = std::abs(metric_delta(axis_at(c.spec, cal.rho, cal.v)) - c.delta);
    double wb = 0.0, wp = 0.0;
    int n = 0;
    for (double rho : c.rhos)
      for (double v : c.vs) {
        const auto [b, psi] = fi.at(rho, v);
        const auto cf = *closed_form_fields(c.spec, rho, v);
        wb = std::max(wb, std::abs(b - cf.B));
        wp = std::max(wp, std::abs(std::exp(psi) - cf.exp_psi));
        ++n;
      }
    const auto [b0, psi0] = fi.at(cal.rho, cal.v);
    const auto cf0 = *closed_form_fields(c.spec, cal.rho, cal.v);
    o.pass = o.pass && d < 1e-10 && wb < 1e-4 && wp < 1e-4 && n == 20 && std::abs(b0 - cf0.B) < 1e-12 &&
             std::abs(std::exp(psi0) - cf0.exp_psi) < 1e-12;
    o.detail += std::string(o.detail.empty() ? "" : "; ") + c.name + ": Delta " + sci(d) + ", B " + sci(wb) +
                ", e^psi " + sci(wp) + " over " + std::to_string(n) + " points";
  }
  return o;
}

Outcome field_equation() {
  // Points where the O(h^2) defect at h = 1e-3 dominates double rounding.
  Outcome o;
  const auto eps = MonodromySpec::epsilon(1.0);
  const auto cs = MonodromySpec::cs(std::sqrt(2.0), 1.0);
  const std::vector<std::tuple<const char*, MonodromySpec, double, double>> pts = {
      {"eps", eps, 0.4, 0.5}, {"eps", eps, 0.8, 0.3}, {"eps", eps, 1.0, 0.5}, {"eps", eps, 0.6, 0.4}, {"eps", eps, 0.7, 0.9},
      {"cs", cs, 0.6, 1.0},   {"cs", cs, 1.0, 1.6},   {"cs", cs, 0.5, 1.0},   {"cs", cs, 0.4, 0.8},   {"cs", cs, 0.7, 1.2},
  };
  double lo = 1e300, hi = 0.0, worst = 0.0;
  for (const auto& [name, spec, rho, v] : pts) {
    const double r1 = field_residual(spec, rho, v, 1e-3), r2 = field_residual(spec, rho, v, 5e-4);
    lo = std::min(lo, r1 / r2);
    hi = std::max(hi, r1 / r2);
    worst = std::max(worst, r1);
  }
  o.pass = lo >= 3.5 && hi <= 4.5 && worst < 1e-5;
  char b[160];
  std::snprintf(b, sizeof b, "5 points per family, ratio in [%.3f, %.3f], max residual %.2e at h=1e-3", lo, hi, worst);
  o.detail = b;
  return o;
}

Outcome property_suite() {
  std::mt19937_64 rng(2024);
  const Mat2 j = jmat();
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Mat2 a = fx::random_matrix(rng);
    const cplx d = a.determinant();
    const double s = std::max(1.0, std::abs(d));
    worst = std::max(worst, (a * j * a.transpose() - d * j).cwiseAbs().maxCoeff() / s);
    worst = std::max(worst, std::abs((Vec2(a.col(1)).transpose() * j * a.col(0))(0) - d) / s);
    const Mat2 ainv = a.inverse();
    worst = std::max(worst, ((-1.0 / d) * j * a.transpose() * j - ainv).cwiseAbs().maxCoeff() /
                                std::max(1.0, ainv.cwiseAbs().maxCoeff()));
    const Vec2 f = fx::random_complex(rng) * Vec2(1.0, 0.0) + fx::random_complex(rng) * Vec2(0.0, 1.0);
    worst = std::max(worst, std::abs((f.transpose() * j * f)(0)) / std::max(1.0, f.squaredNorm()));

    const double al = std::uniform_real_distribution<double>(-1.5, 1.5)(rng);
    const cplx c2 = std::pow(std::cosh(al), 2), s2 = std::pow(std::sinh(al), 2);
    const cplx x = fx::random_complex(rng) + 0.1;
    const double sc = std::max({1.0, std::norm(c2 * x), std::norm(c2 / x)});
    worst = std::max(worst, std::abs((c2 / x + s2 * x) * (s2 / x + c2 * x) - c2 * s2 * std::pow(x + 1.0 / x, 2) - 1.0) / sc);
    worst = std::max(worst, std::abs((c2 / x - s2 * x) * (s2 / x - c2 * x) - c2 * s2 * std::pow(x - 1.0 / x, 2) + 1.0) / sc);
  }
  // propagation identity on both families at random regular points
  std::uniform_real_distribution<double> ur(0.5, 4.0), uv(-2.0, 4.0), ua(0.1, 1.2), ue(-2.0, 2.0);
  int runs = 0;
  double prop = 0.0;
  while (runs < 100) {
    fx::Golden g;
    try {
      if (runs % 2) {
        const double a = ua(rng), rho = ur(rng);
        g = fx::cs_golden(std::cosh(a), std::sinh(a), rho, rho + 0.5 + 2.0 * ua(rng));
      } else {
        g = fx::eps_golden(ue(rng), ur(rng), uv(rng));
      }
    } catch (const Error&) {
      continue;
    }
    ++runs;
    const auto f = factorize(g.m, g.c);
    for (auto z : sample(g.c, 32)) {
      const Vec2 lhs = g.m.eval(z) * (j * f.sd.Q2(z) * f.first.plus_at(z));
      const Vec2 rhs = j * f.sd.Q1(z) * f.first.minus_at(z);
      prop = std::max(prop, (lhs - rhs).cwiseAbs().maxCoeff() / std::max(1.0, rhs.cwiseAbs().maxCoeff()));
    }
  }
  return {worst < 1e-10 && prop < 1e-10,
          "100 cases: algebraic identities " + sci(worst) + ", propagation " + sci(prop) + " over " + std::to_string(runs) +
              " factorisations"};
}

Outcome negative_controls() {
  Outcome o;
  auto expect = [&](const char* what, ErrorKind kind, int code, const std::function<void()>& f) {
    std::string got = "none";
    bool ok = false;
    try {
      f();
    } catch (const Error& e) {
      got = std::string(to_string(e.kind()));
      ok = e.kind() == kind && cli::exit_code(e.kind()) == code;
    }
    o.pass = o.pass && ok;
    o.detail += std::string(o.detail.empty() ? "" : "; ") + what + " -> " + got + " (exit " +
                std::to_string(ok ? code : -1) + ")";
  };
  const Contour c = make_contour(1);
  expect("(t-2)/(2t-1)", ErrorKind::NonZeroWinding, 2, [&] {
    scalar_canonical_factorize(rat_normalize(CPoly{-2.0, 1.0}, CPoly{-1.0, 2.0}), c);
  });
  const CRational t(CPoly{0.0, 1.0});
  expect("diag(t, 1/t)", ErrorKind::NonCanonical, 2,
         [&] { factorize(RationalMatrix2(t, CRational(), CRational(), inverse(t)), c); });
  expect("p~1 = t^3", ErrorKind::UnsupportedMultiplicity, 4, [&] { classify_r1_zeros(CPoly::monomial(3), 3, c); });
  auto g = fx::eps_golden();
  auto m = g.m;
  m.e[1][0] = m.e[1][0] + CRational::constant(1e-3);
  m = RationalMatrix2(m(0, 0), m(0, 1), m(1, 0), m(1, 1));
  expect("symmetry broken by 1e-3", ErrorKind::NotSymmetric, 1, [&] { factorize(m, g.c); });

  // the same controls through the command front end
  std::ostringstream log;
  const std::string dir = WHF_TEST_DATA;
  const int codes[4] = {cli::cmd_factorize(cli::load_config(dir + "/winding.json"), {}, "/dev/null", log),
                        cli::cmd_factorize(cli::load_config(dir + "/diag_tau.json"), {}, "/dev/null", log),
                        cli::cmd_factorize(cli::load_config(dir + "/double_square.json"), {}, "/dev/null", log),
                        cli::cmd_verify(cli::load_config(dir + "/broken_symmetry.json"), 1, log)};
  const bool cli_ok = codes[0] == 2 && codes[1] == 2 && codes[2] == 4 && codes[3] == 1;
  o.pass = o.pass && cli_ok;
  o.detail += "; cli exits " + std::to_string(codes[0]) + "," + std::to_string(codes[1]) + "," +
              std::to_string(codes[2]) + "," + std::to_string(codes[3]);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"golden epsilon factorisation", golden_epsilon},
      {"golden c/s factorisation", golden_cs},
      {"verifier suite", verifier_suite},
      {"Fourier-Galerkin oracle", oracle_equivalence},
      {"metric reproduction", metric_reproduction},
      {"field-equation residual", field_equation},
      {"property suite", property_suite},
      {"negative controls", negative_controls},
  };
  int failed = 0;
  int k = 0;
  for (const auto& [name, run] : criteria) {
    ++k;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", k, name, o.detail.c_str());
    if (!o.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
