#include "whf/gravity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "whf/error.hpp"

namespace whf {

namespace {

CRational over_omega(CPoly num) { return rat_normalize(num, CPoly{0.0, 1.0}); }

double family_sign(int lambda) { return static_cast<double>(lambda); }

Contour contour_for(const MonodromySpec& spec) { return make_contour(spec.lambda); }

CPoly power(const CPoly& p, int k) {
  CPoly out = CPoly::constant(1.0);
  for (int i = 0; i < k; ++i) out = out * p;
  return out;
}

// sum_k n_k P^k D^(deg - k) for n(w) with w = P / D
CPoly homogenize(const CPoly& n, const CPoly& p, const CPoly& d, int deg) {
  CPoly out;
  for (int k = 0; k <= n.degree(); ++k) out += n[k] * (power(p, k) * power(d, deg - k));
  return out;
}

}  // namespace

MonodromySpec MonodromySpec::cs(cplx c, cplx s) {
  MonodromySpec m;
  m.family = Family::aiii_cs;
  m.lambda = -1;
  m.c = c;
  m.s = s;
  return m;
}

MonodromySpec MonodromySpec::epsilon(cplx eps) {
  MonodromySpec m;
  m.family = Family::aiii_eps;
  m.lambda = 1;
  m.eps = eps;
  return m;
}

MonodromySpec MonodromySpec::custom(std::array<CRational, 4> entries, int lambda, Variable var) {
  MonodromySpec m;
  m.family = Family::custom;
  m.lambda = lambda;
  m.variable = var;
  m.entries = std::move(entries);
  return m;
}

std::array<CRational, 4> MonodromySpec::omega_entries() const {
  switch (family) {
    case Family::aiii_cs: {
      const cplx c2 = c * c, s2 = s * s, cs = c * s;
      const CRational off = over_omega(CPoly{cs, 0.0, cs});
      return {over_omega(CPoly{c2, 0.0, s2}), off, off, over_omega(CPoly{s2, 0.0, c2})};
    }
    case Family::aiii_eps: {
      const CRational off = over_omega(CPoly{eps});
      return {over_omega(CPoly{1.0}), off, off, over_omega(CPoly{eps * eps, 0.0, 1.0})};
    }
    case Family::custom: return entries;
  }
  return entries;
}

void validate(const MonodromySpec& spec) {
  if (spec.lambda != 1 && spec.lambda != -1) fail(ErrorKind::BadLambda, "lambda must be +1 or -1");
  switch (spec.family) {
    case Family::aiii_cs:
      if (std::abs(spec.c * spec.c - spec.s * spec.s - 1.0) > 1e-12)
        fail(ErrorKind::InvalidArgument, "aiii_cs requires c^2 - s^2 = 1");
      if (spec.lambda != -1) fail(ErrorKind::InvalidArgument, "aiii_cs uses lambda = -1");
      break;
    case Family::aiii_eps:
      if (spec.lambda != 1) fail(ErrorKind::InvalidArgument, "aiii_eps uses lambda = +1");
      break;
    case Family::custom:
      for (const auto& e : spec.entries)
        if (e.den().is_zero()) fail(ErrorKind::InvalidArgument, "custom entry has a zero denominator");
      break;
  }
}

SpectralPoint branch_points(double rho, double v, int lambda, double margin) {
  if (!(rho > 0.0)) fail(ErrorKind::InvalidArgument, "rho must be positive");
  if (lambda != 1 && lambda != -1) fail(ErrorKind::BadLambda, "lambda must be +1 or -1");
  SpectralPoint sp{rho, v, lambda, {}, {}};
  if (lambda == 1) {
    sp.tau0 = (v - std::sqrt(v * v + rho * rho)) / rho;
    sp.tau0tilde = -1.0 / sp.tau0;
  } else {
    sp.tau0 = (-v + std::sqrt(cplx(v * v - rho * rho))) / rho;
    sp.tau0tilde = 1.0 / sp.tau0;
  }
  if (!(std::abs(sp.tau0) < 1.0 - margin) || !(std::abs(sp.tau0tilde) > 1.0 + margin))
    fail(ErrorKind::DegenerateBranch, "branch points too close to the contour at rho=" + std::to_string(rho) +
                                          " v=" + std::to_string(v) + " (|tau0|=" +
                                          std::to_string(std::abs(sp.tau0)) + ")");
  return sp;
}

CRational spectral_curve(const SpectralPoint& sp) {
  const double l = family_sign(sp.lambda);
  return over_omega(CPoly{sp.rho / 2.0, sp.v, -l * sp.rho / 2.0});
}

BlaschkePair blaschke_factors(const SpectralPoint& sp) {
  const double l = family_sign(sp.lambda);
  BlaschkePair b;
  b.plus = CRational(CPoly{1.0, -1.0 / sp.tau0tilde});
  const cplx k = l * (sp.rho / 2.0) * sp.tau0tilde;
  b.minus = over_omega(CPoly{-k * sp.tau0, k});
  return b;
}

CRational compose(const CRational& r, const CRational& omega) {
  const CPoly& p = omega.num();
  const CPoly& d = omega.den();
  const int dn = r.num().degree(), dd = r.den().degree();
  if (dn < 0) return CRational();
  CPoly num = homogenize(r.num(), p, d, dn);
  CPoly den = homogenize(r.den(), p, d, dd);
  if (dd > dn) num = num * power(d, dd - dn);
  else if (dn > dd) den = den * power(d, dn - dd);
  return rat_normalize(num, den);
}

RationalMatrix2 spectral_substitute(const MonodromySpec& spec, const SpectralPoint& sp) {
  auto e = spec.omega_entries();
  if (spec.family != Family::custom || spec.variable == Variable::omega) {
    const CRational w = spectral_curve(sp);
    for (auto& x : e) x = compose(x, w);
  }
  RationalMatrix2 m(e[0], e[1], e[2], e[3]);
  if (spec.family != Family::custom) {
    double worst = 0.0;
    for (auto z : sample(make_contour(sp.lambda), 16)) worst = std::max(worst, std::abs(m.eval(z).determinant() - 1.0));
    if (worst > 1e-9) fail(ErrorKind::PrecondViolation, "monodromy determinant differs from 1");
  }
  return m;
}

Mat2 axis_matrix(const Factorization& f) {
  Mat2 a;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const auto val = rat_eval_infinity(f.Mminus(i, j));
      if (val.infinite) fail(ErrorKind::UnboundedAtInfinity, "M_- entry grows at infinity");
      a(i, j) = val.value;
    }
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if (std::abs(a(0, 1) - a(1, 0)) > 1e-9 * scale || std::abs(a.determinant() - 1.0) > 1e-9 * scale * scale)
    fail(ErrorKind::PrecondViolation, "axis matrix is not symmetric with unit determinant");
  return a;
}

Mat2 axis_from_first_column(const ColumnPair& first) {
  const auto a = rat_eval_infinity(first.minus[0]);
  const auto b = rat_eval_infinity(first.minus[1]);
  if (a.infinite || b.infinite) fail(ErrorKind::UnboundedAtInfinity, "first minus column grows at infinity");
  if (a.value == 0.0) fail(ErrorKind::ZeroEntry, "f1-(infinity) vanishes");
  Mat2 m;
  m << a.value, b.value, b.value, (1.0 + b.value * b.value) / a.value;
  return m;
}

double metric_delta(const Mat2& axis) {
  if (std::abs(axis(1, 1)) < 1e-300) fail(ErrorKind::ZeroEntry, "M22 vanishes");
  return (1.0 / axis(1, 1)).real();
}

cplx metric_chi(const Mat2& axis) {
  if (std::abs(axis(1, 1)) < 1e-300) fail(ErrorKind::ZeroEntry, "M22 vanishes");
  return axis(0, 1) / axis(1, 1);
}

ClosedColumns closed_form_columns(const MonodromySpec& spec, const SpectralPoint& sp) {
  const auto [mm, mp] = blaschke_factors(sp);
  const CRational imm = inverse(mm), imp = inverse(mp);
  ClosedColumns out;
  switch (spec.family) {
    case Family::aiii_cs: {
      const cplx c2 = spec.c * spec.c, s2 = spec.s * spec.s, sc = spec.s * spec.c;
      out.first.plus = {c2 * mp - s2 * imp, sc * (imp - mp)};
      out.first.minus = {c2 * imm + s2 * mm, sc * (imm + mm)};
      out.second.plus = {sc * (mp - imp), c2 * imp - s2 * mp};
      out.second.minus = {sc * (imm + mm), s2 * imm + c2 * mm};
      break;
    }
    case Family::aiii_eps: {
      const cplx e = spec.eps;
      out.first.plus = {mp, CRational()};
      out.first.minus = {imm, e * imm};
      out.second.plus = {e * (mp - imp), imp};
      out.second.minus = {e * imm, mm + (e * e) * imm};
      break;
    }
    case Family::custom: fail(ErrorKind::InvalidArgument, "no closed form for custom families");
  }
  return out;
}

std::optional<ClosedFields> closed_form_fields(const MonodromySpec& spec, double rho, double v) {
  switch (spec.family) {
    case Family::aiii_eps: {
      const double r = std::sqrt(v * v + rho * rho);
      const cplx e = spec.eps;
      const double m = 0.5 * (v + r);
      return ClosedFields{(m / (e * e + m * m)).real(), (2.0 * e * (v - r)).real(), (v + r) / (2.0 * r)};
    }
    case Family::aiii_cs: {
      const double r = std::sqrt(v * v - rho * rho);
      const cplx c = spec.c, s = spec.s;
      const double m = 0.5 * (v + r);
      return ClosedFields{(m / (s * s + c * c * m * m)).real(), (-2.0 * c * s * (v - r)).real(), (v + r) / (2.0 * r)};
    }
    case Family::custom: return std::nullopt;
  }
  return std::nullopt;
}

Mat2 axis_at(const MonodromySpec& spec, double rho, double v, double margin) {
  const auto sp = branch_points(rho, v, spec.lambda, margin);
  const auto m = spectral_substitute(spec, sp);
  return axis_from_first_column(solve_columns(m, contour_for(spec), {1.0, 0.0}));
}

double field_residual(const MonodromySpec& spec, double rho, double v, double h, double margin) {
  auto M = [&](double r, double w) { return axis_at(spec, r, w, margin); };
  const Mat2 m0 = M(rho, v);
  const Mat2 rp = M(rho + h, v), rm = M(rho - h, v), rpp = M(rho + 2 * h, v), rmm = M(rho - 2 * h, v);
  const Mat2 vp = M(rho, v + h), vm = M(rho, v - h), vpp = M(rho, v + 2 * h), vmm = M(rho, v - 2 * h);
  const Mat2 ar_p = rp.inverse() * (rpp - m0) / (2 * h);
  const Mat2 ar_m = rm.inverse() * (m0 - rmm) / (2 * h);
  const Mat2 av_p = vp.inverse() * (vpp - m0) / (2 * h);
  const Mat2 av_m = vm.inverse() * (m0 - vmm) / (2 * h);
  const Mat2 out = ((rho + h) * ar_p - (rho - h) * ar_m) / (2 * h) +
                   family_sign(spec.lambda) * rho * (av_p - av_m) / (2 * h);
  return out.norm();
}

FieldIntegrator::FieldIntegrator(MonodromySpec spec, double h, double step, double margin)
    : spec_(std::move(spec)), h_(h), step_(step), margin_(margin) {
  if (!(h_ > 0.0) || !(step_ > 0.0)) fail(ErrorKind::InvalidArgument, "steps must be positive");
}

std::array<double, 4> FieldIntegrator::raw_gradient(double rho, double v) {
  const std::pair<long long, long long> key{std::llround(rho * 1e9), std::llround(v * 1e9)};
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;

  auto M = [&](double r, double w) { return axis_at(spec_, r, w, margin_); };
  const Mat2 m0 = M(rho, v);
  const Mat2 rp = M(rho + h_, v), rm = M(rho - h_, v);
  const Mat2 vp = M(rho, v + h_), vm = M(rho, v - h_);
  const Mat2 inv = m0.inverse();
  const Mat2 ar = inv * (rp - rm) / (2 * h_);
  const Mat2 av = inv * (vp - vm) / (2 * h_);
  const cplx delta = 1.0 / m0(1, 1);
  const cplx dchi_r = (metric_chi(rp) - metric_chi(rm)) / (2 * h_);
  const cplx dchi_v = (metric_chi(vp) - metric_chi(vm)) / (2 * h_);
  const double l = family_sign(spec_.lambda);
  const cplx w = rho / (delta * delta);
  std::array<double, 4> g{(w * dchi_v).real(), (-l * w * dchi_r).real(),
                          (rho / 4.0 * (ar * ar - l * av * av).trace()).real(), (rho / 2.0 * (ar * av).trace()).real()};
  cache_.emplace(key, g);
  return g;
}

std::array<double, 4> FieldIntegrator::gradient(double rho, double v) {
  auto g = raw_gradient(rho, v);
  const double sigma = calibrated_ ? cal_.sigma : 1.0;
  g[0] *= sigma;
  g[1] *= sigma;
  return g;
}

void FieldIntegrator::calibrate(std::optional<std::pair<double, double>> point) {
  std::pair<double, double> p;
  if (point) p = *point;
  else if (spec_.family == Family::aiii_eps) p = {4.0, 3.0};
  else if (spec_.family == Family::aiii_cs) p = {3.0, 5.0};
  else fail(ErrorKind::InvalidArgument, "custom families need an explicit calibration point");

  cal_ = {p.first, p.second, 0.0, 0.0, 1.0};
  const auto closed = closed_form_fields(spec_, p.first, p.second);
  if (closed) {
    cal_.B = closed->B;
    cal_.psi = std::log(closed->exp_psi);
    // Twist sign from the closed-form gradient of B.
    const double hh = 1e-4;
    const double dbr = (closed_form_fields(spec_, p.first + hh, p.second)->B -
                        closed_form_fields(spec_, p.first - hh, p.second)->B) / (2 * hh);
    const double dbv = (closed_form_fields(spec_, p.first, p.second + hh)->B -
                        closed_form_fields(spec_, p.first, p.second - hh)->B) / (2 * hh);
    const auto g = raw_gradient(p.first, p.second);
    const double dot = dbr * g[0] + dbv * g[1];
    if (dot < 0.0) cal_.sigma = -1.0;
  }
  calibrated_ = true;
}

std::pair<double, double> FieldIntegrator::segment(double r0, double v0, double r1, double v1) {
  const bool along_rho = (v0 == v1);
  if (!along_rho && r0 != r1) fail(ErrorKind::PathTooCoarse, "path segments must be axis-parallel");
  const double a = along_rho ? r0 : v0, b = along_rho ? r1 : v1;
  if (a == b) return {0.0, 0.0};
  const double anchor = along_rho ? cal_.rho : cal_.v;
  // nodes: a, lattice points anchor + k*step strictly between a and b, b
  std::vector<double> nodes{a};
  const double lo = std::min(a, b), hi = std::max(a, b);
  const long long k0 = static_cast<long long>(std::floor((lo - anchor) / step_)) + 1;
  const long long k1 = static_cast<long long>(std::ceil((hi - anchor) / step_)) - 1;
  std::vector<double> inner;
  for (long long k = k0; k <= k1; ++k) {
    const double x = anchor + static_cast<double>(k) * step_;
    if (x > lo + 1e-12 && x < hi - 1e-12) inner.push_back(x);
  }
  if (a > b) std::reverse(inner.begin(), inner.end());
  nodes.insert(nodes.end(), inner.begin(), inner.end());
  nodes.push_back(b);

  const int ib = along_rho ? 0 : 1, ip = along_rho ? 2 : 3;
  double db = 0.0, dpsi = 0.0;
  auto eval = [&](double x) { return along_rho ? gradient(x, v0) : gradient(r0, x); };
  auto prev = eval(nodes[0]);
  for (size_t i = 1; i < nodes.size(); ++i) {
    const auto cur = eval(nodes[i]);
    const double dx = nodes[i] - nodes[i - 1];
    db += 0.5 * dx * (prev[static_cast<size_t>(ib)] + cur[static_cast<size_t>(ib)]);
    dpsi += 0.5 * dx * (prev[static_cast<size_t>(ip)] + cur[static_cast<size_t>(ip)]);
    prev = cur;
  }
  return {db, dpsi};
}

std::pair<double, double> FieldIntegrator::integrate(const std::vector<std::pair<double, double>>& path) {
  if (!calibrated_) calibrate();
  if (path.empty() || path.front().first != cal_.rho || path.front().second != cal_.v)
    fail(ErrorKind::InvalidArgument, "path must start at the calibration point");
  double b = cal_.B, psi = cal_.psi;
  for (size_t i = 1; i < path.size(); ++i) {
    const auto [db, dp] = segment(path[i - 1].first, path[i - 1].second, path[i].first, path[i].second);
    b += db;
    psi += dp;
  }
  return {b, psi};
}

std::pair<double, double> FieldIntegrator::at(double rho, double v) {
  if (!calibrated_) calibrate();
  return integrate({{cal_.rho, cal_.v}, {rho, cal_.v}, {rho, v}});
}

double twist_B(const MonodromySpec& spec, const std::vector<std::pair<double, double>>& path, double h) {
  FieldIntegrator fi(spec, h);
  fi.calibrate();
  return fi.integrate(path).first;
}

double conformal_psi(const MonodromySpec& spec, const std::vector<std::pair<double, double>>& path, double h) {
  FieldIntegrator fi(spec, h);
  fi.calibrate();
  return fi.integrate(path).second;
}

}  // namespace whf
