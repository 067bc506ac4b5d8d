#pragma once

#include "whf/contour.hpp"
#include "whf/ratfun.hpp"

namespace whf {

/// r = minus * plus on the contour. plus and 1/plus are analytic inside,
/// minus and 1/minus are analytic outside (including infinity), plus(0) = 1.
struct ScalarFactorization {
  CRational minus = CRational::constant(1.0);
  CRational plus = CRational::constant(1.0);
  int winding = 0;
};

/// Interior zeros minus interior poles, with multiplicity. Throws ZeroOnContour.
int winding_number(const CRational& r, const Contour& c);

/// Throws NonZeroWinding when no canonical factorisation exists, ZeroOnContour
/// when r vanishes or blows up on the contour.
ScalarFactorization scalar_canonical_factorize(const CRational& r, const Contour& c);

}  // namespace whf
