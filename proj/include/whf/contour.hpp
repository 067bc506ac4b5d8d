#pragma once

#include <vector>

#include "whf/ratfun.hpp"

namespace whf {

/// Default half-width of the band around the contour treated as "on" it.
inline constexpr double kContourBand = 1e-8;
/// Default clearance required between a branch point and the contour.
inline constexpr double kBranchMargin = 0.05;

enum class ContourKind { unit_circle };

enum class Region { Interior, Exterior, OnContour };

/// Admissible contour: the unit circle, invariant under tau -> -lambda / tau.
struct Contour {
  ContourKind kind = ContourKind::unit_circle;
  int lambda = -1;

  /// Image of z under the involution tau -> -lambda / tau.
  cplx involution(cplx z) const { return -static_cast<double>(lambda) / z; }
};

/// Throws BadLambda unless lambda is +1 or -1.
Contour make_contour(int lambda);

Region classify_point(const Contour& c, cplx z, double band = kContourBand);

/// n equispaced points exp(2 pi i k / n), n >= 4.
std::vector<cplx> sample(const Contour& c, int n);

/// Throws BranchPointNearContour unless |t0| < 1 - margin and |t0tilde| > 1 + margin.
void check_branch_separation(const Contour& c, cplx t0, cplx t0tilde, double margin = kBranchMargin);

/// Throws ZeroOnContour if any cluster lies in the contour band.
void require_off_contour(const Contour& c, const std::vector<RootCluster>& clusters, const char* what,
                         double band = kContourBand);

}  // namespace whf
