#include "whf/wh_sym.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "detail.hpp"
#include "whf/error.hpp"

namespace whf {

namespace {

constexpr double kZeroComponentTol = 1e-9;

bool negligible(cplx x, double scale) { return std::abs(x) <= kZeroComponentTol * scale; }

Eigen::RowVectorXcd value_row(cplx z, int n) {
  Eigen::RowVectorXcd r(n + 1);
  cplx p = 1.0;
  for (int j = 0; j <= n; ++j, p *= z) r(j) = p;
  return r;
}

Eigen::RowVectorXcd derivative_row(cplx z, int n) {
  Eigen::RowVectorXcd r = Eigen::RowVectorXcd::Zero(n + 1);
  cplx p = 1.0;
  for (int j = 1; j <= n; ++j, p *= z) r(j) = static_cast<double>(j) * p;
  return r;
}

struct RowBuilder {
  int n;
  std::vector<Eigen::RowVectorXcd> rows;
  std::vector<cplx> rhs;
  std::vector<std::string> labels;

  void push(Eigen::RowVectorXcd row, cplx b, std::string label) {
    rows.push_back(std::move(row));
    rhs.push_back(b);
    labels.push_back(std::move(label));
  }
};

std::string at(const char* what, cplx z) {
  return std::string(what) + " at (" + std::to_string(z.real()) + "," + std::to_string(z.imag()) + ")";
}

// Both second-column numerators must vanish at the zero z of r1:
//   interior: R2 f1+ + p2 f2+ and R2 f2+ + p1 f1+
//   exterior: R2 f1- + p1 f2- and R2 f2- + p2 f1-
// (u, v, pu, pv) = (f1+, f2+, p2, p1) inside and (f1-, f2-, p1, p2) outside;
// the value rows read R2 u + pu v = 0 and R2 v + pv u = 0.
void zero_rows(RowBuilder& rb, const RootCluster& zc, const CRational& u, const CRational& v, const CPoly& pu,
               const CPoly& pv, const char* side) {
  const cplx z = zc.location;
  const int n = rb.n;
  const cplx uz = u(z), vz = v(z);
  const double scale = std::max(std::abs(uz), std::abs(vz));
  const bool u0 = negligible(uz, scale), v0 = negligible(vz, scale);
  const auto val = value_row(z, n);
  const auto der = derivative_row(z, n);

  if (zc.multiplicity == 1) {
    if (u0 || v0) rb.push(val, 0.0, at(side, z) + " simple, R2 = 0");
    else rb.push(val * uz, -pu(z) * vz, at(side, z) + " simple");
    return;
  }
  const cplx du = u.derivative_at(z), dv = v.derivative_at(z);
  if (v0) {
    rb.push(val, 0.0, at(side, z) + " double (i), R2 = 0");
    rb.push(der * uz, -pu(z) * dv, at(side, z) + " double (i), derivative");
  } else if (u0) {
    rb.push(val, 0.0, at(side, z) + " double (ii), R2 = 0");
    rb.push(der * vz, -pv(z) * du, at(side, z) + " double (ii), derivative");
  } else {
    const cplx dpu = poly_derivative(pu)(z);
    rb.push(val * uz, -pu(z) * vz, at(side, z) + " double (iii)");
    rb.push(der * uz + val * du, -(dpu * vz + pu(z) * dv), at(side, z) + " double (iii), derivative");
  }
}

// Orders n .. n-k+1 of the Laurent expansion at infinity of R2 u + pu v.
void infinity_rows(RowBuilder& rb, int k, const CRational& u, const CRational& v, const CPoly& pu) {
  const int n = rb.n;
  const auto eu = rat_laurent_at_infinity(u, n + 1);
  const auto ev = rat_laurent_at_infinity(v, n + 1);
  for (int i = 0; i < k; ++i) {
    const int power = n - i;
    Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Zero(n + 1);
    cplx b = 0.0;
    for (int j = power; j <= n; ++j) {
      row(j) = eu[static_cast<size_t>(j - power)];
      b -= pu[j] * ev[static_cast<size_t>(j - power)];
    }
    rb.push(row, b, "infinity order " + std::to_string(power));
  }
}

void require_plus(const CRational& r, const Contour& c, const char* what) {
  for (const auto& p : r.poles())
    if (classify_point(c, p.location) != Region::Exterior)
      fail(ErrorKind::ResidualPole, std::string(what) + " keeps a pole inside the contour");
}

void require_minus(const CRational& r, const Contour& c, const char* what) {
  if (!r.bounded_at_infinity()) fail(ErrorKind::ResidualPole, std::string(what) + " is unbounded at infinity");
  for (const auto& p : r.poles())
    if (classify_point(c, p.location) != Region::Interior)
      fail(ErrorKind::ResidualPole, std::string(what) + " keeps a pole outside the contour");
}

double rel(double diff, double ref) { return diff / std::max(1.0, ref); }

}  // namespace

Mat2 SymmetricData::Q1(cplx z) const {
  Mat2 m;
  m << 1.0, 0.0, 0.0, -q(z);
  return m;
}

Mat2 SymmetricData::Q2(cplx z) const {
  Mat2 m;
  m << q(z), 0.0, 0.0, -1.0;
  return m;
}

SymmetricData diag_quotient(const RationalMatrix2& m, const Contour& c) {
  if (!m.symmetric) fail(ErrorKind::NotSymmetric, "off-diagonal entries differ");
  if (m(0, 0).is_zero() || m(1, 1).is_zero()) fail(ErrorKind::ZeroEntry, "diagonal entry vanishes identically");
  SymmetricData sd;
  sd.q = m(0, 0) / m(1, 1);
  if (!sd.q.bounded_at_infinity()) fail(ErrorKind::QuotientUnboundedAtInfinity, "deg p1 > deg p2");
  for (const auto& p : sd.q.poles())
    if (classify_point(c, p.location) == Region::OnContour) fail(ErrorKind::PoleOnContour, "q has a pole on the contour");
  const cplx lead = sd.q.num().leading();
  sd.p1 = sd.q.num() * (1.0 / lead);
  sd.p2 = sd.q.den() * (1.0 / lead);
  return sd;
}

CPoly r1_numerator(const SymmetricData& sd, const CRational& r1) {
  const CRational ratio = rat_normalize(sd.p2, r1.den());
  if (ratio.den().degree() > 0) fail(ErrorKind::PrecondViolation, "poles of r1 are not among those of q");
  const CPoly pt = r1.num() * ratio.num();
  return detail::chop(pt, pt.max_abs());
}

CRational compute_r1(const SymmetricData& sd, const CRational& delta_plus, const std::array<CRational, 2>& fplus) {
  const CRational r1 = delta_plus * (sd.q * fplus[0] * fplus[0] - fplus[1] * fplus[1]);
  if (r1.is_zero()) fail(ErrorKind::NonCanonical, "r1 vanishes identically");
  const CPoly pt = r1_numerator(sd, r1);
  if (pt.degree() > sd.p2.degree()) fail(ErrorKind::PrecondViolation, "deg r1 numerator exceeds deg p2");
  return r1;
}

R1Zeros classify_r1_zeros(const CPoly& r1_num, int deg_p2, const Contour& c) {
  R1Zeros z;
  if (r1_num.is_zero()) fail(ErrorKind::NonCanonical, "r1 vanishes identically");
  const auto roots = r1_num.degree() > 0 ? poly_roots(r1_num) : std::vector<RootCluster>{};
  for (const auto& rc : roots) {
    if (rc.multiplicity >= 3)
      fail(ErrorKind::UnsupportedMultiplicity, at("zero of r1", rc.location) + " has order " +
                                                   std::to_string(rc.multiplicity));
    switch (classify_point(c, rc.location)) {
      case Region::Interior: z.interior.push_back(rc); break;
      case Region::Exterior: z.exterior.push_back(rc); break;
      case Region::OnContour: fail(ErrorKind::ZeroOnContour, at("r1 vanishes", rc.location));
    }
  }
  z.at_infinity = deg_p2 - r1_num.degree();
  if (z.at_infinity >= 3)
    fail(ErrorKind::UnsupportedMultiplicity, "zero of r1 at infinity has order " + std::to_string(z.at_infinity));
  return z;
}

R2System assemble_R2_system(const SymmetricData& sd, const R1Zeros& zeros, const ColumnPair& cols) {
  RowBuilder rb{sd.p2.degree(), {}, {}, {}};
  for (const auto& zc : zeros.interior) zero_rows(rb, zc, cols.plus[0], cols.plus[1], sd.p2, sd.p1, "interior");
  for (const auto& zc : zeros.exterior) zero_rows(rb, zc, cols.minus[0], cols.minus[1], sd.p1, sd.p2, "exterior");
  if (zeros.at_infinity > 0) {
    infinity_rows(rb, zeros.at_infinity, cols.minus[0], cols.minus[1], sd.p1);
    infinity_rows(rb, zeros.at_infinity, cols.minus[1], cols.minus[0], sd.p2);
  }

  // s1+(0) = 0: the order-k Taylor coefficient of R2 f1+ + p2 f2+ at 0, where k
  // is the order of the zero of r1 at 0 (lower orders vanish by the rows above).
  int k = 0;
  for (const auto& zc : zeros.interior)
    if (detail::same_point(zc.location, 0.0)) k = zc.multiplicity;
  const auto t1 = rat_taylor(cols.plus[0], 0.0, k + 1);
  const auto tp = rat_taylor(CRational(sd.p2) * cols.plus[1], 0.0, k + 1);
  Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Zero(rb.n + 1);
  for (int j = 0; j <= std::min(k, rb.n); ++j) row(j) = t1[static_cast<size_t>(k - j)];
  rb.push(row, -tp[static_cast<size_t>(k)], "normalization s1+(0) = 0");

  R2System sys;
  sys.a.resize(static_cast<Eigen::Index>(rb.rows.size()), rb.n + 1);
  sys.b.resize(static_cast<Eigen::Index>(rb.rows.size()));
  for (size_t i = 0; i < rb.rows.size(); ++i) {
    sys.a.row(static_cast<Eigen::Index>(i)) = rb.rows[i];
    sys.b(static_cast<Eigen::Index>(i)) = rb.rhs[i];
  }
  sys.labels = std::move(rb.labels);
  return sys;
}

R2Solution solve_r2(const R2System& sys, const SymmetricData& sd) {
  const int unknowns = static_cast<int>(sys.a.cols());
  const auto ls = detail::least_squares(sys.a, sys.b);
  if (ls.rank < unknowns)
    fail(ErrorKind::R2SystemSingular, "rank " + std::to_string(ls.rank) + " of " + std::to_string(unknowns));
  if (ls.residual > 1e-8) fail(ErrorKind::R2SystemSingular, "inconsistent (residual " + std::to_string(ls.residual) + ")");
  std::vector<cplx> c(ls.x.data(), ls.x.data() + ls.x.size());
  R2Solution out;
  const double scale = std::max(ls.x.cwiseAbs().maxCoeff(), sd.p1.max_abs());
  out.numerator = detail::chop(CPoly(std::move(c)), scale);
  out.r2 = rat_normalize(out.numerator, sd.p2);
  return out;
}

namespace {

struct Frac {
  CPoly num;
  CPoly den;
};

Frac frac(const CRational& r) { return {r.num(), r.den()}; }

// (R u + pu v) / p~1 with u = un/ud, v = vn/vd, zero clusters of p~1 removed.
CRational second_component(const CPoly& r2, const Frac& u, const CPoly& pu, const Frac& v, const CPoly& r1_num,
                           const std::vector<RootCluster>& cancel, bool minus, const char* what) {
  CPoly num = r2 * u.num * v.den + pu * v.num * u.den;
  std::vector<RootCluster> keep;
  const auto all = r1_num.degree() > 0 ? poly_roots(r1_num) : std::vector<RootCluster>{};
  CPoly den = u.den * v.den * CPoly::constant(r1_num.leading());
  for (const auto& rc : all) {
    bool removed = false;
    for (const auto& cc : cancel)
      if (detail::same_point(rc.location, cc.location)) removed = true;
    if (!removed) keep.push_back(rc);
  }
  den = den * CPoly::from_roots(keep);
  const double scale = std::max(num.max_abs(), 1e-300);
  for (const auto& cc : cancel) {
    for (int k = 0; k < cc.multiplicity; ++k) {
      double mag = 0.0, rz = 1.0;
      for (auto c : num.coeffs()) {
        mag += std::abs(c) * rz;
        rz *= std::max(1.0, std::abs(cc.location));
      }
      if (num.is_zero()) break;
      if (std::abs(num(cc.location)) > 1e-7 * std::max(mag, 1e-300))
        fail(ErrorKind::ResidualPole, std::string(what) + " keeps a pole of 1/r1");
      num = deflate(num, cc.location, 1);
    }
  }
  if (minus && num.degree() > den.degree()) {
    std::vector<cplx> c(num.coeffs().begin(), num.coeffs().end());
    for (int k = den.degree() + 1; k <= num.degree(); ++k) {
      if (std::abs(c[static_cast<size_t>(k)]) > 1e-8 * scale)
        fail(ErrorKind::ResidualPole, std::string(what) + " is unbounded at infinity");
      c[static_cast<size_t>(k)] = 0.0;
    }
    num = CPoly(std::move(c));
  }
  return rat_normalize(num, den);
}

}  // namespace

ColumnPair build_second_columns(const SymmetricData& sd, const CPoly& r1_num, const R1Zeros& zeros,
                                const CPoly& r2_num, const ColumnPair& cols) {
  const Frac f1p = frac(cols.plus[0]), f2p = frac(cols.plus[1]);
  const Frac f1m = frac(cols.minus[0]), f2m = frac(cols.minus[1]);
  ColumnPair s;
  s.plus[0] = second_component(r2_num, f1p, sd.p2, f2p, r1_num, zeros.interior, false, "s1+");
  s.plus[1] = second_component(r2_num, f2p, sd.p1, f1p, r1_num, zeros.interior, false, "s2+");
  s.minus[0] = second_component(r2_num, f1m, sd.p1, f2m, r1_num, zeros.exterior, true, "s1-");
  s.minus[1] = second_component(r2_num, f2m, sd.p2, f1m, r1_num, zeros.exterior, true, "s2-");
  return s;
}

namespace {

void certify(const ColumnPair& s, const Contour& c) {
  require_plus(s.plus[0], c, "s1+");
  require_plus(s.plus[1], c, "s2+");
  require_minus(s.minus[0], c, "s1-");
  require_minus(s.minus[1], c, "s2-");
  const Vec2 at0 = s.plus_at(0.0);
  if (std::abs(at0(0)) > 1e-9 || std::abs(at0(1) - 1.0) > 1e-9)
    fail(ErrorKind::NonCanonical, "s+(0) differs from (0, 1)");
}

}  // namespace

Factorization factorize(const RationalMatrix2& m, const Contour& c) {
  if (!m.symmetric) fail(ErrorKind::NotSymmetric, "off-diagonal entries differ");
  Factorization f;
  f.delta = scalar_canonical_factorize(determinant(m), c);
  f.first = solve_columns(m, c, {1.0, 0.0});
  // the quotient conditions only concern the second columns
  f.sd = diag_quotient(m, c);
  f.r1 = compute_r1(f.sd, f.delta.plus, f.first.plus);
  f.r1_numerator = r1_numerator(f.sd, f.r1);
  f.zeros = classify_r1_zeros(f.r1_numerator, f.sd.p2.degree(), c);
  const auto sol = solve_r2(assemble_R2_system(f.sd, f.zeros, f.first), f.sd);
  f.r2_numerator = sol.numerator;
  f.r2 = sol.r2;
  f.second = build_second_columns(f.sd, f.r1_numerator, f.zeros, f.r2_numerator, f.first);
  certify(f.second, c);
  f.Xinv = RationalMatrix2(f.first.plus[0], f.second.plus[0], f.first.plus[1], f.second.plus[1]);
  f.Mminus = RationalMatrix2(f.first.minus[0], f.second.minus[0], f.first.minus[1], f.second.minus[1]);
  return f;
}

VerificationReport assemble_and_verify(const RationalMatrix2& m, const Factorization& f, const Contour& c,
                                       double tol) {
  VerificationReport r;
  r.tol = tol;
  const Mat2 j = jmat();
  for (auto z : sample(c, kVerifySamples)) {
    const Mat2 mz = m.eval(z);
    const Mat2 xi = f.Xinv.eval(z);
    const Mat2 mm = f.Mminus.eval(z);
    const cplx dp = f.delta.plus(z), dm = f.delta.minus(z);
    const cplx det = mz.determinant();
    const Mat2 q1 = f.sd.Q1(z), q2 = f.sd.Q2(z);
    const Vec2 fp = f.first.plus_at(z), fm = f.first.minus_at(z);
    const Vec2 sp = f.second.plus_at(z), sm = f.second.minus_at(z);

    r.boundary = std::max(r.boundary, rel((mz * xi - mm).cwiseAbs().maxCoeff(), mm.cwiseAbs().maxCoeff()));
    r.determinant = std::max(r.determinant, std::abs(dp * xi.determinant() - 1.0));
    const Mat2 lhs = mz * q1 * mz;
    r.symmetry = std::max(r.symmetry, rel((lhs - det * q2).cwiseAbs().maxCoeff(), lhs.cwiseAbs().maxCoeff()));
    const Vec2 rhs = j * q1 * fm;
    r.propagation = std::max(r.propagation, rel((mz * (j * q2 * fp) - rhs).cwiseAbs().maxCoeff(), rhs.cwiseAbs().maxCoeff()));
    const cplx r2 = f.r2(z);
    r.r2_plus = std::max(r.r2_plus, rel(std::abs(r2 - dp * (sp.transpose() * q2 * fp)(0)), std::abs(r2)));
    r.r2_minus = std::max(r.r2_minus, rel(std::abs(r2 - (sm.transpose() * q1 * fm)(0) / dm), std::abs(r2)));
  }
  r.x_at_zero = (f.Xinv.eval(0.0) - Mat2::Identity()).cwiseAbs().maxCoeff();
  r.pass = r.boundary < tol && r.x_at_zero < tol && r.determinant < tol && r.symmetry < tol &&
           r.propagation < tol && r.r2_plus < tol && r.r2_minus < tol;
  return r;
}

}  // namespace whf
