#pragma once

#include <cmath>
#include <random>

#include "whf/gravity.hpp"

namespace fx {

using namespace whf;

struct Golden {
  MonodromySpec spec;
  SpectralPoint sp;
  RationalMatrix2 m;
  Contour c;
};

inline Golden make_golden(const MonodromySpec& spec, double rho, double v) {
  Golden g{spec, branch_points(rho, v, spec.lambda), {}, make_contour(spec.lambda)};
  g.m = spectral_substitute(spec, g.sp);
  return g;
}

inline Golden eps_golden(double eps = 1.0, double rho = 4.0, double v = 3.0) {
  return make_golden(MonodromySpec::epsilon(eps), rho, v);
}

inline Golden cs_golden(double c = std::sqrt(2.0), double s = 1.0, double rho = 3.0, double v = 5.0) {
  return make_golden(MonodromySpec::cs(c, s), rho, v);
}

/// Largest entrywise deviation of two column pairs at n contour samples.
inline double column_deviation(const std::array<CRational, 2>& a, const std::array<CRational, 2>& b, int n = 128) {
  double d = 0.0;
  for (auto z : sample(make_contour(1), n))
    for (size_t i = 0; i < 2; ++i) d = std::max(d, std::abs(a[i](z) - b[i](z)));
  return d;
}

inline CPoly random_poly(std::mt19937_64& rng, int degree) {
  std::normal_distribution<double> nd;
  std::vector<cplx> c;
  for (int i = 0; i <= degree; ++i) c.emplace_back(nd(rng), nd(rng));
  return CPoly(std::move(c));
}

inline cplx random_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  return {nd(rng), nd(rng)};
}

inline Mat2 random_matrix(std::mt19937_64& rng) {
  Mat2 a;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) a(i, j) = random_complex(rng);
  return a;
}

}  // namespace fx
