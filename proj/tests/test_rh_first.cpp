#include <doctest.h>

#include "fixtures.hpp"
#include "fourier_oracle.hpp"

using namespace whf;

namespace {

double boundary_residual(const RationalMatrix2& m, const ColumnPair& p, int n = 128) {
  double worst = 0.0;
  for (auto z : sample(make_contour(1), n)) {
    const Vec2 lhs = m.eval(z) * p.plus_at(z), rhs = p.minus_at(z);
    worst = std::max(worst, (lhs - rhs).norm() / std::max(1.0, rhs.norm()));
  }
  return worst;
}

void check_certificate(const ColumnPair& p, const Contour& c) {
  for (const auto& e : p.plus)
    for (const auto& cl : e.poles()) CHECK(classify_point(c, cl.location) == Region::Exterior);
  for (const auto& e : p.minus) {
    for (const auto& cl : e.poles()) CHECK(classify_point(c, cl.location) == Region::Interior);
    CHECK(e.bounded_at_infinity());
  }
}

double oracle_deviation(const fx::Golden& g, const ColumnPair& cols) {
  const auto gal = oracle::galerkin_solve([&](cplx z) { return g.m.eval(z); }, Vec2(1.0, 0.0));
  double d = 0.0;
  for (auto z : sample(g.c, 128)) {
    d = std::max(d, (gal.plus(z) - cols.plus_at(z)).cwiseAbs().maxCoeff());
    d = std::max(d, (gal.minus(z) - cols.minus_at(z)).cwiseAbs().maxCoeff());
  }
  return d;
}

}  // namespace

TEST_CASE("dplus_pole_polynomial") {
  const auto g = fx::eps_golden();
  const CPoly pi = dplus_pole_polynomial(g.m, g.c);
  REQUIRE(pi.degree() == 2);
  // tau (tau + 1/2)
  CHECK(std::abs(pi[0]) < 1e-12);
  CHECK(std::abs(pi[1] - 0.5) < 1e-12);
  CHECK(std::abs(pi[2] - 1.0) < 1e-12);
  CHECK(dplus_pole_polynomial(RationalMatrix2::identity(), g.c).degree() == 0);
}

TEST_CASE("solve_columns on the epsilon family") {
  const auto g = fx::eps_golden();
  const auto cols = solve_columns(g.m, g.c, {1.0, 0.0});
  // f+ = (1 - tau/2, 0), f- = (tau/(4 tau + 2), tau/(4 tau + 2))
  for (auto z : sample(g.c, 32)) {
    CHECK(std::abs(cols.plus[0](z) - (1.0 - z / 2.0)) < 1e-12);
    CHECK(std::abs(cols.plus[1](z)) < 1e-12);
    CHECK(std::abs(cols.minus[0](z) - z / (4.0 * z + 2.0)) < 1e-12);
    CHECK(std::abs(cols.minus[1](z) - z / (4.0 * z + 2.0)) < 1e-12);
  }
  CHECK(boundary_residual(g.m, cols) < 1e-9);
  check_certificate(cols, g.c);
}

TEST_CASE("solve_columns on the c/s family") {
  const auto g = fx::cs_golden();
  const auto cols = solve_columns(g.m, g.c, {1.0, 0.0});
  const auto closed = closed_form_columns(g.spec, g.sp);
  CHECK(fx::column_deviation(cols.plus, closed.first.plus) < 1e-9);
  CHECK(fx::column_deviation(cols.minus, closed.first.minus) < 1e-9);
  CHECK(boundary_residual(g.m, cols) < 1e-9);
  check_certificate(cols, g.c);
}

TEST_CASE("solve_columns on the identity") {
  const auto cols = solve_columns(RationalMatrix2::identity(), make_contour(1), {1.0, 0.0});
  CHECK(std::abs(cols.plus[0](0.3) - 1.0) < 1e-14);
  CHECK(std::abs(cols.plus[1](0.3)) < 1e-14);
  CHECK(std::abs(cols.minus[0](3.0) - 1.0) < 1e-14);
  CHECK(std::abs(cols.minus[1](3.0)) < 1e-14);
}

TEST_CASE("kernel_dimension") {
  CHECK(kernel_dimension(fx::cs_golden().m, make_contour(-1)) == 0);
  CHECK(kernel_dimension(fx::eps_golden().m, make_contour(1)) == 0);

  const CRational t(CPoly{0.0, 1.0});
  const RationalMatrix2 d(t, CRational(), CRational(), inverse(t));
  const Contour c = make_contour(1);
  // partial indices (1, -1): (0, tau) -> (0, 1) fails to decay, (0, 1) -> (0, 1/tau) spans the kernel
  CHECK(kernel_dimension(d, c) == 1);
  try {
    solve_columns(d, c, {1.0, 0.0});
    FAIL("expected NonCanonical");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonCanonical);
  }
}

TEST_CASE("boundary identity at random regular points") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ur(0.5, 5.0), uv(-3.0, 5.0), ue(-2.0, 2.0);
  for (int t = 0; t < 20; ++t) {
    fx::Golden g;
    try {
      g = fx::eps_golden(ue(rng), ur(rng), uv(rng));
    } catch (const Error&) {
      continue;
    }
    const auto cols = solve_columns(g.m, g.c, {1.0, 0.0});
    CHECK(boundary_residual(g.m, cols) < 1e-9);
    check_certificate(cols, g.c);
  }
}

TEST_CASE("Fourier-Galerkin oracle reproduces the rational columns") {
  for (const auto& g : {fx::eps_golden(), fx::cs_golden(), fx::eps_golden(0.3, 2.5, 1.5), fx::cs_golden(1.25, 0.75, 2.0, 4.0)}) {
    const auto cols = solve_columns(g.m, g.c, {1.0, 0.0});
    CHECK(oracle_deviation(g, cols) < 1e-8);
  }
}
