#include <doctest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"

using namespace whf;

namespace {

bool has_cluster(const std::vector<RootCluster>& cs, cplx z, int mult, double tol = 1e-6) {
  return std::any_of(cs.begin(), cs.end(),
                     [&](const RootCluster& c) { return std::abs(c.location - z) < tol && c.multiplicity == mult; });
}

std::vector<cplx> random_points(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<cplx> z;
  for (int i = 0; i < n; ++i) z.emplace_back(u(rng), u(rng));
  return z;
}

}  // namespace

TEST_CASE("poly_eval examples") {
  CHECK(std::abs(poly_eval(CPoly{-1.0, 0.0, 1.0}, 2.0) - 3.0) < 1e-15);
  CHECK(poly_eval(CPoly{}, cplx(5, 1)) == cplx(0.0));
  // tau^2 (tau-2)^2 / 4 = tau^4/4 - tau^3 + tau^2
  CHECK(std::abs(poly_eval(CPoly{0.0, 0.0, 1.0, -1.0, 0.25}, 1.0) - 0.25) < 1e-15);
}

TEST_CASE("poly_derivative examples") {
  const CPoly d = poly_derivative(CPoly{0.0, 0.0, 0.0, -1.0, 0.25});
  REQUIRE(d.degree() == 3);
  CHECK(std::abs(d[2] + 3.0) < 1e-15);
  CHECK(std::abs(d[3] - 1.0) < 1e-15);
  CHECK(poly_derivative(CPoly::constant(7.0)).is_zero());
  CHECK(poly_derivative(CPoly{0.0, 1.0}).degree() == 0);
}

TEST_CASE("poly_roots examples") {
  auto r = poly_roots(CPoly{-1.0, 0.0, 1.0});
  CHECK(r.size() == 2);
  CHECK(has_cluster(r, 1.0, 1));
  CHECK(has_cluster(r, -1.0, 1));

  r = poly_roots(CPoly{0.0, 0.0, 4.0, -4.0, 1.0});
  CHECK(r.size() == 2);
  CHECK(has_cluster(r, 0.0, 2));
  CHECK(has_cluster(r, 2.0, 2));

  const cplx z0(1, 1);
  const RootCluster c3{z0, 3};
  r = poly_roots(CPoly::from_roots(std::span<const RootCluster>(&c3, 1)));
  CHECK(r.size() == 1);
  CHECK(has_cluster(r, z0, 3));
}

TEST_CASE("rat_normalize examples") {
  auto r = rat_normalize(CPoly{-1.0, 0.0, 1.0}, CPoly{-1.0, 1.0});
  CHECK(r.den().degree() == 0);
  CHECK(std::abs(r.num()[0] - 1.0) < 1e-12);
  CHECK(std::abs(r.num()[1] - 1.0) < 1e-12);

  r = rat_normalize(CPoly{0.0, 2.0}, CPoly::constant(2.0));
  CHECK(r.den().degree() == 0);
  CHECK(std::abs(r.num()[1] - 1.0) < 1e-15);

  // tau (tau-4)(tau-2) (-1/2) / (tau-2)^2 = -tau (tau-4) / (2 (tau-2))
  const CPoly num = CPoly{0.0, 8.0, -6.0, 1.0} * cplx(-0.5);
  const CPoly den{4.0, -4.0, 1.0};
  r = rat_normalize(num, den);
  CHECK(r.den().degree() == 1);
  std::mt19937_64 rng(11);
  for (auto z : random_points(rng, 10)) {
    const cplx expect = -z * (z - 4.0) / (2.0 * (z - 2.0));
    CHECK(std::abs(r(z) - expect) < 1e-12 * std::max(1.0, std::abs(expect)));
  }
}

TEST_CASE("rat_arith examples") {
  const CRational inv_tau = rat_normalize(CPoly::constant(1.0), CPoly{0.0, 1.0});
  const CRational sum = inv_tau + CRational(CPoly{0.0, 1.0});
  CHECK(sum.num().degree() == 2);
  CHECK(sum.den().degree() == 1);
  CHECK(std::abs(sum(2.0) - 2.5) < 1e-15);

  // m+ m- = omega at the (4,3) point of the epsilon family
  const auto sp = branch_points(4.0, 3.0, 1);
  const auto bp = blaschke_factors(sp);
  const CRational prod = bp.minus * bp.plus;
  for (auto z : sample(make_contour(1), 16)) {
    const cplx expect = -2.0 * (z - sp.tau0) * (z - sp.tau0tilde) / z;
    CHECK(std::abs(prod(z) - expect) < 1e-12 * std::abs(expect));
  }

  const CRational q = rat_normalize(CPoly{0.0, 0.0, 1.0}, CPoly{1.0, 4.0, 1.0});
  const CRational one = q * inverse(q);
  CHECK(one.num().degree() == 0);
  CHECK(one.den().degree() == 0);
  CHECK(std::abs(one(0.3) - 1.0) < 1e-12);
}

TEST_CASE("rat_eval_infinity examples") {
  const auto bp = blaschke_factors(branch_points(4.0, 3.0, 1));
  auto v = rat_eval_infinity(inverse(bp.minus));
  CHECK_FALSE(v.infinite);
  CHECK(std::abs(v.value - 0.25) < 1e-14);

  v = rat_eval_infinity(rat_normalize(CPoly::constant(1.0), CPoly{0.0, 1.0}));
  CHECK_FALSE(v.infinite);
  CHECK(std::abs(v.value) == 0.0);

  v = rat_eval_infinity(rat_normalize(CPoly{0.0, 0.0, 1.0}, CPoly{0.0, 1.0}));
  CHECK(v.infinite);
}

TEST_CASE("roots of a product are the union of the roots") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> deg(1, 8);
  for (int t = 0; t < 30; ++t) {
    const CPoly p = fx::random_poly(rng, deg(rng)), q = fx::random_poly(rng, deg(rng));
    const auto rp = poly_roots(p), rq = poly_roots(q), rpq = poly_roots(p * q);
    int total = 0;
    for (const auto& c : rpq) total += c.multiplicity;
    CHECK(total == p.degree() + q.degree());
    for (const auto* set : {&rp, &rq})
      for (const auto& c : *set) {
        const bool found = std::any_of(rpq.begin(), rpq.end(), [&](const RootCluster& d) {
          return std::abs(d.location - c.location) < 1e-6 * std::max(1.0, std::abs(c.location));
        });
        CHECK(found);
      }
  }
}

TEST_CASE("reported roots annihilate the polynomial and its derivatives") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 30; ++t) {
    // random roots, some doubled
    std::vector<RootCluster> roots;
    const int n = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < n; ++i) roots.push_back({fx::random_complex(rng), 1 + static_cast<int>(rng() % 2)});
    const CPoly p = CPoly::from_roots(roots);
    for (const auto& c : poly_roots(p)) {
      const double scale = std::max(1.0, std::pow(std::abs(c.location), p.degree())) * p.max_abs();
      CHECK(std::abs(poly_eval(p, c.location)) < 1e-9 * scale);
      if (c.multiplicity >= 2) CHECK(std::abs(poly_eval(poly_derivative(p), c.location)) < 1e-6 * scale);
    }
  }
}

TEST_CASE("normalization is idempotent and arithmetic round-trips") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    const CRational a = rat_normalize(fx::random_poly(rng, 3), fx::random_poly(rng, 2));
    const CRational b = rat_normalize(fx::random_poly(rng, 2), fx::random_poly(rng, 3));
    const CRational again = rat_normalize(a.num(), a.den());
    CHECK(again.num().degree() == a.num().degree());
    CHECK(again.den().degree() == a.den().degree());
    const auto pts = random_points(rng, 16);
    CHECK(max_sample_deviation(again, a, pts) < 1e-12);
    CHECK(max_sample_deviation((a + b) - b, a, pts) < 1e-10);
    CHECK(max_sample_deviation((a * b) / b, a, pts) < 1e-10);
  }
}

TEST_CASE("Taylor and Laurent expansions") {
  // 1/(1 - tau) = sum tau^k
  const CRational r = rat_normalize(CPoly::constant(1.0), CPoly{1.0, -1.0});
  const auto t = rat_taylor(r, 0.0, 5);
  for (auto c : t) CHECK(std::abs(c - 1.0) < 1e-14);
  // tau/(tau - 2) = sum 2^j tau^-j
  const CRational s = rat_normalize(CPoly{0.0, 1.0}, CPoly{-2.0, 1.0});
  const auto l = rat_laurent_at_infinity(s, 5);
  for (int j = 0; j < 5; ++j) CHECK(std::abs(l[static_cast<size_t>(j)] - std::pow(2.0, j)) < 1e-12);
}

TEST_CASE("division by the zero polynomial") {
  CHECK_THROWS_AS(rat_normalize(CPoly{1.0}, CPoly{}), Error);
}
