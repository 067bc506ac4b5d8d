#pragma once

// Internal helpers shared by the factorisation modules.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "whf/contour.hpp"
#include "whf/ratfun.hpp"

namespace whf::detail {

/// Relative distance under which clusters from different polynomials are the same point.
inline constexpr double kSamePointTol = 1e-7;

inline bool same_point(cplx a, cplx b) {
  return std::abs(a - b) <= kSamePointTol * std::max(1.0, std::abs(a));
}

/// Multiset of points; nearby points share one entry.
class ClusterSet {
 public:
  /// Adds multiplicities (product of factors).
  void add(cplx z, int m) {
    if (auto* c = find(z)) c->multiplicity += m;
    else items_.push_back({z, m});
  }
  /// Keeps the larger multiplicity (least common multiple of factors).
  void max_with(cplx z, int m) {
    if (auto* c = find(z)) c->multiplicity = std::max(c->multiplicity, m);
    else items_.push_back({z, m});
  }
  int multiplicity_at(cplx z) const {
    for (const auto& c : items_)
      if (same_point(c.location, z)) return c.multiplicity;
    return 0;
  }
  const std::vector<RootCluster>& items() const { return items_; }

  std::vector<RootCluster> in_region(const Contour& contour, Region r) const {
    std::vector<RootCluster> out;
    for (const auto& c : items_)
      if (classify_point(contour, c.location) == r) out.push_back(c);
    return out;
  }

 private:
  RootCluster* find(cplx z) {
    for (auto& c : items_)
      if (same_point(c.location, z)) return &c;
    return nullptr;
  }
  std::vector<RootCluster> items_;
};

struct LeastSquares {
  Eigen::VectorXcd x;
  int rank = 0;
  double residual = 0.0;  // |Ax - b| / max(1, |b|) on the row-scaled system
};

/// Rank-revealing least squares on a row-equilibrated copy of the system.
/// Singular values below rank_tol * sigma_max count as zero.
inline LeastSquares least_squares(Eigen::MatrixXcd a, Eigen::VectorXcd b, double rank_tol = 1e-9) {
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double s = std::max(a.row(i).cwiseAbs().maxCoeff(), std::abs(b(i)));
    if (s > 0.0) {
      a.row(i) /= s;
      b(i) /= s;
    }
  }
  LeastSquares out;
  if (a.cols() == 0) {
    out.x = Eigen::VectorXcd(0);
    out.residual = b.size() ? b.norm() / std::max(1.0, b.norm()) : 0.0;
    return out;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  svd.setThreshold(rank_tol);
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rank_tol * smax) ++out.rank;
  out.x = svd.solve(b);
  out.residual = (a * out.x - b).norm() / std::max(1.0, b.norm());
  return out;
}

/// Coefficients with magnitude below rel * scale become exact zeros.
inline CPoly chop(const CPoly& p, double scale, double rel = 1e-13) {
  std::vector<cplx> c(p.coeffs().begin(), p.coeffs().end());
  for (auto& x : c)
    if (std::abs(x) <= rel * scale) x = 0.0;
  return CPoly(std::move(c));
}

}  // namespace whf::detail
