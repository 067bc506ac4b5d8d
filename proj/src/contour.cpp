#include "whf/contour.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "whf/error.hpp"

namespace whf {

Contour make_contour(int lambda) {
  if (lambda != 1 && lambda != -1)
    fail(ErrorKind::BadLambda, "lambda must be +1 or -1, got " + std::to_string(lambda));
  Contour c{ContourKind::unit_circle, lambda};
  // The unit circle maps onto itself under the involution for |lambda| = 1.
  for (auto z : sample(c, 16))
    if (std::abs(std::abs(c.involution(z)) - 1.0) > 1e-12)
      fail(ErrorKind::BadLambda, "contour is not invariant under the involution");
  return c;
}

Region classify_point(const Contour&, cplx z, double band) {
  const double r = std::abs(z);
  if (r < 1.0 - band) return Region::Interior;
  if (r > 1.0 + band) return Region::Exterior;
  return Region::OnContour;
}

std::vector<cplx> sample(const Contour&, int n) {
  if (n < 4) fail(ErrorKind::InvalidArgument, "contour sampling needs n >= 4");
  std::vector<cplx> pts(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    // Exact values at the quarter points keep n = 4 free of round-off.
    if ((4 * k) % n == 0) {
      static constexpr cplx quarter[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      pts[static_cast<size_t>(k)] = quarter[(4 * k) / n];
    } else {
      pts[static_cast<size_t>(k)] = std::polar(1.0, 2.0 * std::numbers::pi * k / n);
    }
  }
  return pts;
}

void check_branch_separation(const Contour&, cplx t0, cplx t0tilde, double margin) {
  if (!(margin > 0.0 && margin < 0.5)) fail(ErrorKind::InvalidArgument, "branch margin must lie in (0, 0.5)");
  if (!(std::abs(t0) < 1.0 - margin) || !(std::abs(t0tilde) > 1.0 + margin))
    fail(ErrorKind::BranchPointNearContour,
         "branch points |t0| = " + std::to_string(std::abs(t0)) + ", |t0~| = " +
             std::to_string(std::abs(t0tilde)) + " are not separated by the unit circle");
}

void require_off_contour(const Contour& c, const std::vector<RootCluster>& clusters, const char* what,
                         double band) {
  for (const auto& rc : clusters)
    if (classify_point(c, rc.location, band) == Region::OnContour)
      fail(ErrorKind::ZeroOnContour, std::string(what) + " at |z| = " + std::to_string(std::abs(rc.location)));
}

}  // namespace whf
