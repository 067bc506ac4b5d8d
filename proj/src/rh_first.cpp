#include "whf/rh_first.hpp"

#include <cmath>
#include <string>

#include "detail.hpp"
#include "whf/error.hpp"

namespace whf {

RationalMatrix2::RationalMatrix2(CRational a, CRational b, CRational c, CRational d)
    : e{{{std::move(a), std::move(b)}, {std::move(c), std::move(d)}}} {
  // Symmetric when the off-diagonal entries agree on a spread of points.
  static const cplx probes[] = {{0.3, 0.7}, {-1.3, 0.2}, {2.1, -0.9}, {0.05, -0.4}, {-0.7, -2.3}};
  double worst = 0.0;
  for (auto z : probes) {
    const cplx x = e[0][1](z), y = e[1][0](z);
    worst = std::max(worst, std::abs(x - y) / std::max({1.0, std::abs(x), std::abs(y)}));
  }
  symmetric = worst < 1e-12;
}

RationalMatrix2 RationalMatrix2::identity() {
  return {CRational::constant(1.0), CRational(), CRational(), CRational::constant(1.0)};
}

Mat2 RationalMatrix2::eval(cplx z) const {
  Mat2 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out(i, j) = (*this)(i, j)(z);
  return out;
}

CRational determinant(const RationalMatrix2& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

namespace {

// Interior pole data of every entry, computed once per matrix.
struct EntryPoles {
  std::array<std::array<std::vector<RootCluster>, 2>, 2> poles;
};

EntryPoles entry_poles(const RationalMatrix2& m, const Contour& c) {
  EntryPoles ep;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      auto p = m(i, j).poles();
      require_off_contour(c, p, "matrix entry pole");
      ep.poles[static_cast<size_t>(i)][static_cast<size_t>(j)] = std::move(p);
    }
  return ep;
}

detail::ClusterSet interior_poles(const EntryPoles& ep, const Contour& c) {
  detail::ClusterSet s;
  for (const auto& row : ep.poles)
    for (const auto& entry : row)
      for (const auto& p : entry)
        if (classify_point(c, p.location) == Region::Interior) s.max_with(p.location, p.multiplicity);
  return s;
}

// One contribution x_unknown * numer / prod (tau - z)^m.
struct Term {
  int unknown;
  CPoly numer;
  detail::ClusterSet den;
};

// sum_k x_k numer[k] / (interior * exterior)
struct LinearRational {
  std::vector<CPoly> numer;
  CPoly interior;
  CPoly exterior;
};

LinearRational combine(const std::vector<Term>& terms, int unknowns, const Contour& c) {
  detail::ClusterSet common;
  for (const auto& t : terms)
    for (const auto& rc : t.den.items()) common.max_with(rc.location, rc.multiplicity);

  LinearRational lr;
  lr.numer.assign(static_cast<size_t>(unknowns), CPoly{});
  for (const auto& t : terms) {
    std::vector<RootCluster> missing;
    for (const auto& rc : common.items()) {
      const int extra = rc.multiplicity - t.den.multiplicity_at(rc.location);
      if (extra > 0) missing.push_back({rc.location, extra});
    }
    lr.numer[static_cast<size_t>(t.unknown)] += t.numer * CPoly::from_roots(missing);
  }
  lr.interior = CPoly::from_roots(common.in_region(c, Region::Interior));
  auto ext = common.in_region(c, Region::Exterior);
  auto on = common.in_region(c, Region::OnContour);
  if (!on.empty()) fail(ErrorKind::ZeroOnContour, "pole of the column system on the contour");
  lr.exterior = CPoly::from_roots(ext);
  return lr;
}

// Terms of phi_k+ = sum over the adjugate row, with T_i = N_i / pi_+.
// Component 0: q22 T1 - q12 T2. Component 1: -q21 T1 + q11 T2.
std::vector<Term> plus_terms(const RationalMatrix2& m, const EntryPoles& ep, const detail::ClusterSet& pi_plus,
                             int component, int coeffs_per_numerator) {
  struct Src {
    int i, j;
    double sign;
  };
  const Src src[2][2] = {{{1, 1, 1.0}, {0, 1, -1.0}}, {{1, 0, -1.0}, {0, 0, 1.0}}};
  std::vector<Term> terms;
  for (int which = 0; which < 2; ++which) {
    const auto s = src[component][which];
    const CRational& q = m(s.i, s.j);
    if (q.is_zero()) continue;
    detail::ClusterSet den = pi_plus;
    for (const auto& p : ep.poles[static_cast<size_t>(s.i)][static_cast<size_t>(s.j)])
      den.add(p.location, p.multiplicity);
    for (int k = 0; k < coeffs_per_numerator; ++k)
      terms.push_back({which * coeffs_per_numerator + k, q.num() * CPoly::monomial(k, s.sign), den});
  }
  return terms;
}

struct ColumnSystem {
  Eigen::MatrixXcd a;
  Eigen::VectorXcd b;
  LinearRational first, second;
  CPoly pi_plus;
  int per = 0;  // coefficients per numerator
};

// Divisibility rows for both plus components; optional normalization rows.
ColumnSystem build_system(const RationalMatrix2& m, const Contour& c, const std::array<cplx, 2>* norm) {
  const auto ep = entry_poles(m, c);
  const auto pi = interior_poles(ep, c);
  ColumnSystem sys;
  sys.pi_plus = CPoly::from_roots(pi.items());
  const int p = sys.pi_plus.degree();
  sys.per = norm ? p + 1 : p;
  const int unknowns = 2 * sys.per;

  sys.first = combine(plus_terms(m, ep, pi, 0, sys.per), unknowns, c);
  sys.second = combine(plus_terms(m, ep, pi, 1, sys.per), unknowns, c);

  const int rows1 = sys.first.interior.degree(), rows2 = sys.second.interior.degree();
  const int div_rows = rows1 + rows2;
  const int rows = div_rows + (norm ? 2 : 0);
  sys.a = Eigen::MatrixXcd::Zero(rows, unknowns);
  sys.b = Eigen::VectorXcd::Zero(rows);
  for (int k = 0; k < unknowns; ++k) {
    const auto dm = poly_divmod(sys.first.numer[static_cast<size_t>(k)], sys.first.interior);
    const auto dm2 = poly_divmod(sys.second.numer[static_cast<size_t>(k)], sys.second.interior);
    for (int r = 0; r < rows1; ++r) sys.a(r, k) = dm.remainder[r];
    for (int r = 0; r < rows2; ++r) sys.a(rows1 + r, k) = dm2.remainder[r];
    if (norm) {
      sys.a(div_rows, k) = dm.quotient(0.0) / sys.first.exterior(0.0);
      sys.a(div_rows + 1, k) = dm2.quotient(0.0) / sys.second.exterior(0.0);
    }
  }
  if (norm) {
    sys.b(div_rows) = (*norm)[0];
    sys.b(div_rows + 1) = (*norm)[1];
  }
  return sys;
}

void require_unit_determinant(const RationalMatrix2& m, const Contour& c) {
  double worst = 0.0;
  for (auto z : sample(c, 64)) worst = std::max(worst, std::abs(m.eval(z).determinant() - 1.0));
  if (worst > 1e-9)
    fail(ErrorKind::PrecondViolation, "first-column solve requires det M = 1 (deviation " + std::to_string(worst) + ")");
}

CPoly combine_solution(const LinearRational& lr, const Eigen::VectorXcd& x) {
  CPoly s;
  for (Eigen::Index k = 0; k < x.size(); ++k) s += lr.numer[static_cast<size_t>(k)] * x(k);
  return s;
}

}  // namespace

CPoly dplus_pole_polynomial(const RationalMatrix2& m, const Contour& c) {
  return CPoly::from_roots(interior_poles(entry_poles(m, c), c).items());
}

ColumnPair solve_columns(const RationalMatrix2& m, const Contour& c, const std::array<cplx, 2>& norm) {
  require_unit_determinant(m, c);
  const ColumnSystem sys = build_system(m, c, &norm);
  const int unknowns = static_cast<int>(sys.a.cols());
  const auto ls = detail::least_squares(sys.a, sys.b);
  if (ls.rank < unknowns)
    fail(ErrorKind::NonCanonical, "first-column system has a " + std::to_string(unknowns - ls.rank) +
                                      "-dimensional kernel (rank " + std::to_string(ls.rank) + " of " +
                                      std::to_string(unknowns) + ")");
  if (ls.residual > 1e-8)
    fail(ErrorKind::NonCanonical, "first-column system is inconsistent (residual " + std::to_string(ls.residual) + ")");

  ColumnPair out;
  const int per = sys.per;
  std::array<CPoly, 2> n;
  double xscale = ls.x.cwiseAbs().maxCoeff();
  for (int i = 0; i < 2; ++i) {
    std::vector<cplx> coeffs(static_cast<size_t>(per));
    for (int k = 0; k < per; ++k) coeffs[static_cast<size_t>(k)] = ls.x(i * per + k);
    n[static_cast<size_t>(i)] = detail::chop(CPoly(std::move(coeffs)), xscale);
  }
  for (int i = 0; i < 2; ++i) out.minus[static_cast<size_t>(i)] = rat_normalize(n[static_cast<size_t>(i)], sys.pi_plus);

  const CPoly s1 = combine_solution(sys.first, ls.x);
  const CPoly s2 = combine_solution(sys.second, ls.x);
  const double scale = std::max(s1.max_abs(), s2.max_abs());
  const auto d1 = poly_divmod(s1, sys.first.interior);
  const auto d2 = poly_divmod(s2, sys.second.interior);
  if (d2.remainder.max_abs() > 1e-7 * scale)
    fail(ErrorKind::PrecondViolation, "second plus component is not analytic inside the contour");
  const double qscale = std::max(d1.quotient.max_abs(), d2.quotient.max_abs());
  out.plus[0] = rat_normalize(detail::chop(d1.quotient, qscale), sys.first.exterior);
  out.plus[1] = rat_normalize(detail::chop(d2.quotient, qscale), sys.second.exterior);

  const Vec2 at0 = out.plus_at(0.0);
  if (std::abs(at0(0) - norm[0]) > 1e-10 || std::abs(at0(1) - norm[1]) > 1e-10)
    fail(ErrorKind::NonCanonical, "plus column misses its normalization at 0");
  return out;
}

int kernel_dimension(const RationalMatrix2& m, const Contour& c) {
  require_unit_determinant(m, c);
  const ColumnSystem sys = build_system(m, c, nullptr);
  const int unknowns = static_cast<int>(sys.a.cols());
  if (unknowns == 0) return 0;
  if (sys.a.rows() == 0) return unknowns;
  return unknowns - detail::least_squares(sys.a, Eigen::VectorXcd::Zero(sys.a.rows())).rank;
}

SystemShape first_column_system_shape(const RationalMatrix2& m, const Contour& c) {
  const std::array<cplx, 2> norm{1.0, 0.0};
  const ColumnSystem sys = build_system(m, c, &norm);
  SystemShape s;
  s.rows = static_cast<int>(sys.a.rows());
  s.unknowns = static_cast<int>(sys.a.cols());
  s.rank = detail::least_squares(sys.a, sys.b).rank;
  return s;
}

}  // namespace whf
