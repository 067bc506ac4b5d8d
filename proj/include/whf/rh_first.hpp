#pragma once

// First columns of a canonical factorisation M = M_- X: the pair
// (phi_+, phi_-) with M phi_+ = phi_- on the contour, phi_+ analytic inside,
// phi_- analytic outside and bounded at infinity, phi_+(0) prescribed.

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "whf/contour.hpp"
#include "whf/ratfun.hpp"

namespace whf {

using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

/// 2x2 matrix of rational functions. `symmetric` records whether the off-diagonal
/// entries agree by sampling.
struct RationalMatrix2 {
  std::array<std::array<CRational, 2>, 2> e;
  bool symmetric = false;

  RationalMatrix2() = default;
  RationalMatrix2(CRational a, CRational b, CRational c, CRational d);

  static RationalMatrix2 identity();
  static RationalMatrix2 symmetric_from(CRational a, CRational b, CRational d) { return {a, b, b, std::move(d)}; }

  const CRational& operator()(int i, int j) const { return e[static_cast<size_t>(i)][static_cast<size_t>(j)]; }
  Mat2 eval(cplx z) const;
};

CRational determinant(const RationalMatrix2& m);

/// Columns of X^{-1} (plus) and M_- (minus) belonging to one normalization.
struct ColumnPair {
  std::array<CRational, 2> plus;
  std::array<CRational, 2> minus;

  Vec2 plus_at(cplx z) const { return {plus[0](z), plus[1](z)}; }
  Vec2 minus_at(cplx z) const { return {minus[0](z), minus[1](z)}; }
};

/// Monic polynomial whose clusters are the interior poles of all entries, each
/// with its largest multiplicity over the entries. Throws ZeroOnContour.
CPoly dplus_pole_polynomial(const RationalMatrix2& m, const Contour& c);

/// The unique ColumnPair with plus(0) = norm. Requires det m = 1.
/// Throws NonCanonical when the reduced system is singular or inconsistent and
/// PrecondViolation when the determinant is not one or the second plus
/// component fails to come out analytic.
ColumnPair solve_columns(const RationalMatrix2& m, const Contour& c, const std::array<cplx, 2>& norm);

/// Dimension of the solution space of the homogeneous problem (phi_- vanishing at infinity).
int kernel_dimension(const RationalMatrix2& m, const Contour& c);

/// Row and unknown counts of the last system built for m (diagnostics).
struct SystemShape {
  int rows = 0;
  int unknowns = 0;
  int rank = 0;
};
SystemShape first_column_system_shape(const RationalMatrix2& m, const Contour& c);

}  // namespace whf
