#pragma once

// Second columns of the canonical factorisation of a symmetric 2x2 matrix,
// obtained from the first columns through the rational pair (r1, r2), and the
// assembled factorisation with its verification report.

#include <string>
#include <vector>

#include "whf/rh_first.hpp"
#include "whf/scalarfac.hpp"

namespace whf {

/// Diagonal quotient q = a/d = p1/p2 with p1 monic.
struct SymmetricData {
  CRational q;
  CPoly p1;
  CPoly p2;

  /// Q1 = diag(1, -q), Q2 = diag(q, -1) at z.
  Mat2 Q1(cplx z) const;
  Mat2 Q2(cplx z) const;
};

/// Throws NotSymmetric, QuotientUnboundedAtInfinity, PoleOnContour.
SymmetricData diag_quotient(const RationalMatrix2& m, const Contour& c);

/// r1 = delta_plus (q f1+^2 - f2+^2). Throws ZeroOnContour, PrecondViolation
/// (denominator not dividing p2, or numerator degree above deg p2).
CRational compute_r1(const SymmetricData& sd, const CRational& delta_plus, const std::array<CRational, 2>& fplus);

/// Numerator of r1 over the denominator p2.
CPoly r1_numerator(const SymmetricData& sd, const CRational& r1);

struct R1Zeros {
  std::vector<RootCluster> interior;
  std::vector<RootCluster> exterior;
  int at_infinity = 0;  // order of the zero of r1 at infinity
};

/// Zeros of r1 = r1_num / p2 counted through the numerator over p2, so zeros
/// shared with p2 are kept. Throws UnsupportedMultiplicity (order >= 3) and ZeroOnContour.
R1Zeros classify_r1_zeros(const CPoly& r1_num, int deg_p2, const Contour& c);

/// Linear conditions on the coefficients R2_0..R2_n, n = deg p2.
struct R2System {
  Eigen::MatrixXcd a;
  Eigen::VectorXcd b;
  std::vector<std::string> labels;  // one per row
};

R2System assemble_R2_system(const SymmetricData& sd, const R1Zeros& zeros, const ColumnPair& cols);

struct R2Solution {
  CPoly numerator;
  CRational r2;
};

/// Throws R2SystemSingular when the system is rank deficient or inconsistent.
R2Solution solve_r2(const R2System& sys, const SymmetricData& sd);

/// s+ and s- from the first columns:
///   s1+ = (R2 f1+ + p2 f2+)/p~1, s2+ = (R2 f2+ + p1 f1+)/p~1,
///   s1- = (R2 f1- + p1 f2-)/p~1, s2- = (R2 f2- + p2 f1-)/p~1,
/// with the interior (plus) or exterior and infinite (minus) zeros of p~1
/// divided out exactly. Throws ResidualPole when a numerator fails to vanish there.
ColumnPair build_second_columns(const SymmetricData& sd, const CPoly& r1_num, const R1Zeros& zeros,
                                const CPoly& r2_num, const ColumnPair& cols);

struct Factorization {
  SymmetricData sd;
  ColumnPair first;
  ColumnPair second;
  CRational r1;
  CRational r2;
  CPoly r1_numerator;
  CPoly r2_numerator;
  R1Zeros zeros;
  ScalarFactorization delta;
  RationalMatrix2 Xinv;
  RationalMatrix2 Mminus;
};

Factorization factorize(const RationalMatrix2& m, const Contour& c);

struct VerificationReport {
  double boundary = 0.0;       // |M Xinv - Mminus|
  double x_at_zero = 0.0;      // |Xinv(0) - I|
  double determinant = 0.0;    // |delta_+ det[f+ s+] - 1|
  double symmetry = 0.0;       // |M Q1 M - delta Q2|
  double propagation = 0.0;    // |M J Q2 f+ - J Q1 f-|
  double r2_plus = 0.0;        // |r2 - delta_+ s+^T Q2 f+|
  double r2_minus = 0.0;       // |r2 - delta_-^{-1} s-^T Q1 f-|
  double tol = 0.0;
  bool pass = false;
};

inline constexpr int kVerifySamples = 256;

VerificationReport assemble_and_verify(const RationalMatrix2& m, const Factorization& f, const Contour& c,
                                       double tol);

/// J = [[0, -1], [1, 0]]
inline Mat2 jmat() {
  Mat2 j;
  j << 0.0, -1.0, 1.0, 0.0;
  return j;
}

/// The 2x2 matrix with columns f and s.
inline Mat2 columns(const Vec2& f, const Vec2& s) {
  Mat2 a;
  a.col(0) = f;
  a.col(1) = s;
  return a;
}

}  // namespace whf
