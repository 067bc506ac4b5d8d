#pragma once

// Complex polynomials and rational functions with root-cluster based
// normalization. Everything downstream (contour checks, factor columns,
// monodromy entries) is built from these two value types.

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "whf/error.hpp"

namespace whf {

using cplx = std::complex<double>;

/// Leading coefficients at or below this fraction of the largest one are dropped.
inline constexpr double kTrimTol = 1e-13;
/// Default geometric clustering radius for poly_roots, relative to the largest root.
inline constexpr double kClusterTol = 1e-8;
/// Absolute floor for the clustering radius.
inline constexpr double kClusterFloor = 1e-10;
/// Iteration cap of the simultaneous root finder.
inline constexpr int kRootIterCap = 200;

/// Zero of a polynomial together with its multiplicity.
struct RootCluster {
  cplx location;
  int multiplicity = 1;
};

/// Polynomial with complex coefficients stored in ascending order.
/// The zero polynomial has no coefficients and degree -1.
class CPoly {
 public:
  CPoly() = default;
  explicit CPoly(std::vector<cplx> coeffs);
  CPoly(std::initializer_list<cplx> coeffs) : CPoly(std::vector<cplx>(coeffs)) {}

  static CPoly constant(cplx c) { return CPoly(std::vector<cplx>{c}); }
  /// c * tau^k
  static CPoly monomial(int k, cplx c = 1.0);
  /// lead * prod (tau - z)^m over the clusters.
  static CPoly from_roots(std::span<const RootCluster> roots, cplx lead = 1.0);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  cplx leading() const { return c_.empty() ? cplx{} : c_.back(); }
  std::span<const cplx> coeffs() const { return c_; }
  /// Coefficient of tau^k, zero outside the stored range.
  cplx operator[](int k) const {
    return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[static_cast<size_t>(k)] : cplx{};
  }
  double max_abs() const;

  cplx operator()(cplx z) const;

  CPoly& operator+=(const CPoly& o);
  CPoly& operator-=(const CPoly& o);
  CPoly& operator*=(cplx s);

  friend CPoly operator+(CPoly a, const CPoly& b) { return a += b; }
  friend CPoly operator-(CPoly a, const CPoly& b) { return a -= b; }
  friend CPoly operator-(CPoly a) { return a *= -1.0; }
  friend CPoly operator*(const CPoly& a, const CPoly& b);
  friend CPoly operator*(CPoly a, cplx s) { return a *= s; }
  friend CPoly operator*(cplx s, CPoly a) { return a *= s; }

 private:
  void trim();
  std::vector<cplx> c_;
};

cplx poly_eval(const CPoly& p, cplx z);
CPoly poly_derivative(const CPoly& p);

struct PolyDivMod {
  CPoly quotient;
  CPoly remainder;
};
PolyDivMod poly_divmod(const CPoly& a, const CPoly& b);

/// Divides p by (tau - z)^times, discarding the remainder. Uses forward
/// deflation inside the unit disk and backward deflation outside it.
CPoly deflate(const CPoly& p, cplx z, int times = 1);

/// Coefficients of p(z0 + h) in powers of h, orders 0..count-1.
std::vector<cplx> poly_taylor(const CPoly& p, cplx z0, int count);

/// All roots of p merged into clusters. Roots closer than
/// max(cluster_tol * max|root|, 1e-10) are merged geometrically; nearby
/// groups the geometric pass leaves split (multiple roots resolve only to
/// eps^(1/m)) are merged when p and its first m-1 derivatives vanish at the
/// group centroid to rounding level. Throws NonConvergence.
std::vector<RootCluster> poly_roots(const CPoly& p, double cluster_tol = kClusterTol);

/// Quotient of two polynomials with a monic denominator and no shared root clusters.
class CRational {
 public:
  CRational() : den_(CPoly::constant(1.0)) {}
  CRational(const CPoly& p) : num_(p), den_(CPoly::constant(1.0)) {}  // NOLINT(implicit)
  static CRational constant(cplx c) { return CRational(CPoly::constant(c)); }

  const CPoly& num() const { return num_; }
  const CPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool bounded_at_infinity() const { return num_.degree() <= den_.degree(); }

  cplx operator()(cplx z) const { return num_(z) / den_(z); }
  /// r'(z) evaluated directly by the quotient rule.
  cplx derivative_at(cplx z) const;

  std::vector<RootCluster> zeros() const;
  std::vector<RootCluster> poles() const;

  friend CRational rat_normalize(const CPoly& num, const CPoly& den);

 private:
  CRational(CPoly num, CPoly den, int) : num_(std::move(num)), den_(std::move(den)) {}
  CPoly num_;
  CPoly den_;
};

/// Cancels common root clusters of num and den and makes den monic. Throws ZeroDenominator.
CRational rat_normalize(const CPoly& num, const CPoly& den);

enum class RatOp { add, sub, mul, div };
CRational rat_arith(const CRational& a, const CRational& b, RatOp op);

inline CRational operator+(const CRational& a, const CRational& b) { return rat_arith(a, b, RatOp::add); }
inline CRational operator-(const CRational& a, const CRational& b) { return rat_arith(a, b, RatOp::sub); }
inline CRational operator*(const CRational& a, const CRational& b) { return rat_arith(a, b, RatOp::mul); }
inline CRational operator/(const CRational& a, const CRational& b) { return rat_arith(a, b, RatOp::div); }
CRational operator*(cplx s, const CRational& a);
CRational operator-(const CRational& a);
CRational inverse(const CRational& a);
CRational rat_derivative(const CRational& a);

struct ValueAtInfinity {
  bool infinite = false;
  cplx value{};
};
ValueAtInfinity rat_eval_infinity(const CRational& r);

/// Taylor coefficients of r(z0 + h), orders 0..count-1. r must be finite at z0.
std::vector<cplx> rat_taylor(const CRational& r, cplx z0, int count);

/// For r bounded at infinity, coefficients e_j with r = sum_j e_j tau^{-j}, j = 0..count-1.
std::vector<cplx> rat_laurent_at_infinity(const CRational& r, int count);

/// Max relative deviation |a(z)-b(z)| / max(1,|b(z)|) over the given points.
double max_sample_deviation(const CRational& a, const CRational& b, std::span<const cplx> points);

std::string to_string(const CPoly& p);

}  // namespace whf
