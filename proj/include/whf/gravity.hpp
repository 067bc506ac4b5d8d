#pragma once

// Monodromy matrices on the spectral curve, the axis matrix extracted from
// their canonical factorisation, and the metric functions Delta, B, psi.

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "whf/wh_sym.hpp"

namespace whf {

enum class Family { aiii_cs, aiii_eps, custom };

/// Entries of a custom monodromy are rational in omega or directly in tau.
enum class Variable { omega, tau };

struct MonodromySpec {
  Family family = Family::aiii_eps;
  int lambda = 1;
  cplx c = 1.0, s = 0.0;  // aiii_cs, c^2 - s^2 = 1
  cplx eps = 1.0;         // aiii_eps
  Variable variable = Variable::omega;
  std::array<CRational, 4> entries;  // custom: M11, M12, M21, M22

  static MonodromySpec cs(cplx c, cplx s);
  static MonodromySpec epsilon(cplx eps);
  static MonodromySpec custom(std::array<CRational, 4> entries, int lambda, Variable var);

  /// Entries as rational functions of omega (families) or of the declared variable (custom).
  std::array<CRational, 4> omega_entries() const;
};

/// Throws InvalidArgument when the family constraints fail.
void validate(const MonodromySpec& spec);

struct SpectralPoint {
  double rho = 0.0;
  double v = 0.0;
  int lambda = 1;
  cplx tau0;
  cplx tau0tilde;
};

/// Zeros of omega(tau). Throws DegenerateBranch when tau0 is not inside the
/// unit circle by the margin, InvalidArgument when rho <= 0.
SpectralPoint branch_points(double rho, double v, int lambda, double margin = kBranchMargin);

/// omega(tau) = v + (lambda/2) rho (lambda - tau^2) / tau as a rational function.
CRational spectral_curve(const SpectralPoint& sp);

struct BlaschkePair {
  CRational minus;
  CRational plus;
};

/// m+ = 1 - tau/tau0tilde, m- = lambda (rho/2) tau0tilde (tau - tau0)/tau, m- m+ = omega.
BlaschkePair blaschke_factors(const SpectralPoint& sp);

/// r(omega(tau)) for r rational in omega.
CRational compose(const CRational& r, const CRational& omega);

/// M_{rho,v}(tau) = M(omega(tau)).
RationalMatrix2 spectral_substitute(const MonodromySpec& spec, const SpectralPoint& sp);

/// Entrywise limit of M_- at infinity. Throws UnboundedAtInfinity, PrecondViolation
/// when the limit is not symmetric with unit determinant to 1e-9.
Mat2 axis_matrix(const Factorization& f);

/// Axis matrix from the first minus column alone: symmetric, det 1.
Mat2 axis_from_first_column(const ColumnPair& first);

/// Delta = 1 / M22. Throws ZeroEntry.
double metric_delta(const Mat2& axis);

/// chi = M12 / M22.
cplx metric_chi(const Mat2& axis);

/// Closed-form columns of the two families under m+(0) = 1.
struct ClosedColumns {
  ColumnPair first;
  ColumnPair second;
};
ClosedColumns closed_form_columns(const MonodromySpec& spec, const SpectralPoint& sp);

/// Closed-form Delta, B, e^psi of the two families (nullopt for custom).
struct ClosedFields {
  double delta;
  double B;
  double exp_psi;
};
std::optional<ClosedFields> closed_form_fields(const MonodromySpec& spec, double rho, double v);

/// Fast axis matrix at (rho, v) through the first-column solve only.
Mat2 axis_at(const MonodromySpec& spec, double rho, double v, double margin = kBranchMargin);

/// Frobenius norm of d_rho(rho A_rho) + lambda d_v(rho A_v), A_i = M^{-1} d_i M,
/// by nested central differences of step h. Throws DegenerateBranch.
double field_residual(const MonodromySpec& spec, double rho, double v, double h, double margin = kBranchMargin);

inline constexpr double kQuadStep = 0.01;
inline constexpr double kFdStep = 1e-4;

/// Integrates B and psi along axis-parallel paths. Integrand samples are cached
/// on a lattice anchored at the calibration point, so paths that share segments
/// share work. Not thread-safe.
class FieldIntegrator {
 public:
  struct Calibration {
    double rho, v;
    double B;    // B at the calibration point
    double psi;  // psi at the calibration point
    double sigma;
  };

  FieldIntegrator(MonodromySpec spec, double h = kFdStep, double step = kQuadStep, double margin = kBranchMargin);

  /// Default calibration: (4,3) for aiii_eps, (3,5) for aiii_cs with closed-form
  /// B, psi and a twist sign matched to the closed-form derivative; custom
  /// families use the given point with B = psi = 0 and sigma = 1.
  void calibrate(std::optional<std::pair<double, double>> point = std::nullopt);
  const Calibration& calibration() const { return cal_; }

  /// B and psi at the end of the path; path[0] must be the calibration point and
  /// consecutive vertices must share rho or v. Throws PathTooCoarse otherwise.
  std::pair<double, double> integrate(const std::vector<std::pair<double, double>>& path);

  /// Path calibration -> (rho, v_cal) -> (rho, v).
  std::pair<double, double> at(double rho, double v);

  /// Integrand values (dB/drho, dB/dv, dpsi/drho, dpsi/dv) at a point.
  std::array<double, 4> gradient(double rho, double v);

 private:
  std::array<double, 4> raw_gradient(double rho, double v);
  std::pair<double, double> segment(double r0, double v0, double r1, double v1);
  MonodromySpec spec_;
  double h_, step_, margin_;
  Calibration cal_{};
  bool calibrated_ = false;
  std::map<std::pair<long long, long long>, std::array<double, 4>> cache_;
};

/// B and psi along a path from the family's calibration point.
double twist_B(const MonodromySpec& spec, const std::vector<std::pair<double, double>>& path, double h = kFdStep);
double conformal_psi(const MonodromySpec& spec, const std::vector<std::pair<double, double>>& path,
                     double h = kFdStep);

struct MetricFields {
  double Delta = 0.0;
  double B = 0.0;
  double psi = 0.0;
  double residual = 0.0;
};

}  // namespace whf
