#include "whf/ratfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "whf/error.hpp"

namespace whf {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
// Relative distance under which a numerator and a denominator cluster are
// treated as the same point during normalization.
constexpr double kCancelTol = 1e-7;
// Taylor coefficients below this fraction of their rounding scale count as zero
// when a group of nearby roots is tested as one multiple root.
constexpr double kMultipleRootTol = 1e-10;

double abs_horner(std::span<const cplx> c, double r) {
  double s = 0.0;
  for (size_t k = c.size(); k-- > 0;) s = s * r + std::abs(c[k]);
  return s;
}

// Simultaneous Aberth-Ehrlich iteration on a polynomial with nonzero constant term.
std::vector<cplx> aberth(std::span<const cplx> coeffs) {
  const int n = static_cast<int>(coeffs.size()) - 1;
  std::vector<cplx> a(coeffs.begin(), coeffs.end());
  const cplx lead = a.back();
  for (auto& x : a) x /= lead;
  a.back() = 1.0;

  if (n == 1) return {-a[0]};

  double radius = 0.0;
  for (int k = 0; k < n; ++k)
    radius = std::max(radius, std::pow(std::abs(a[static_cast<size_t>(k)]), 1.0 / (n - k)));
  if (radius == 0.0) radius = 1.0;

  std::vector<cplx> z(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k)
    z[static_cast<size_t>(k)] =
        std::polar(radius, 2.0 * std::numbers::pi * k / n + 0.4);

  std::vector<bool> done(static_cast<size_t>(n), false);

  for (int iter = 0; iter < kRootIterCap; ++iter) {
    bool all_done = true;
    for (size_t i = 0; i < z.size(); ++i) {
      if (done[i]) continue;
      const cplx zi = z[i];
      cplx p = a.back(), dp = 0.0;
      for (size_t k = a.size() - 1; k-- > 0;) {
        dp = dp * zi + p;
        p = p * zi + a[k];
      }
      const double bound = 4.0 * (n + 1) * kEps * abs_horner(a, std::abs(zi));
      if (std::abs(p) <= bound) {
        done[i] = true;
        continue;
      }
      all_done = false;
      const cplx ratio = p / dp;
      cplx sum = 0.0;
      for (size_t j = 0; j < z.size(); ++j)
        if (j != i) sum += 1.0 / (zi - z[j]);
      const cplx w = ratio / (1.0 - ratio * sum);
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
        z[i] = zi + std::polar(radius * 1e-3, 1.0 + iter);
        continue;
      }
      z[i] = zi - w;
      if (std::abs(w) <= 4.0 * kEps * std::abs(z[i])) done[i] = true;
    }
    if (all_done) return z;
  }
  if (std::all_of(done.begin(), done.end(), [](bool b) { return b; })) return z;
  fail(ErrorKind::NonConvergence, "root finder did not converge in " +
                                      std::to_string(kRootIterCap) + " iterations");
}

struct Group {
  std::vector<cplx> members;
  cplx center;
  int mult() const { return static_cast<int>(members.size()); }
};

cplx centroid(const std::vector<cplx>& pts) {
  cplx s = 0.0;
  for (auto z : pts) s += z;
  return s / static_cast<double>(pts.size());
}

// Newton on p^(m-1), which has a simple zero at an m-fold root of p.
cplx polish(const CPoly& p, cplx z, int m, double max_move) {
  const cplx start = z;
  auto residual = [&](cplx x) { return std::abs(poly_taylor(p, x, m)[static_cast<size_t>(m - 1)]); };
  double best = residual(z);
  for (int it = 0; it < 4 && best > 0.0; ++it) {
    auto t = poly_taylor(p, z, m + 1);
    const cplx am = t[static_cast<size_t>(m)];
    if (am == cplx{}) break;
    const cplx cand = z - t[static_cast<size_t>(m - 1)] / (static_cast<double>(m) * am);
    if (std::abs(cand - start) > max_move) break;
    const double r = residual(cand);
    if (!(r < best)) break;
    best = r;
    z = cand;
  }
  return z;
}

// True when p and its first m-1 derivatives vanish at z to rounding level.
bool is_multiple_root(const CPoly& p, cplx z, int m) {
  auto t = poly_taylor(p, z, m);
  std::vector<cplx> absc;
  for (auto c : p.coeffs()) absc.emplace_back(std::abs(c));
  auto scale = poly_taylor(CPoly(absc), std::abs(z), m);
  for (int j = 0; j < m; ++j)
    if (std::abs(t[static_cast<size_t>(j)]) > kMultipleRootTol * scale[static_cast<size_t>(j)].real())
      return false;
  return true;
}

// Single-linkage components of group centers within radius r.
std::vector<std::vector<size_t>> components(const std::vector<Group>& groups, double r) {
  const size_t n = groups.size();
  std::vector<size_t> parent(n);
  std::iota(parent.begin(), parent.end(), size_t{0});
  auto find = [&](size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (std::abs(groups[i].center - groups[j].center) <= r) parent[find(i)] = find(j);
  std::vector<std::vector<size_t>> out;
  std::vector<long> slot(n, -1);
  for (size_t i = 0; i < n; ++i) {
    const size_t root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<long>(out.size());
      out.emplace_back();
    }
    out[static_cast<size_t>(slot[root])].push_back(i);
  }
  return out;
}

std::vector<Group> merge(const std::vector<Group>& groups, const std::vector<size_t>& idx) {
  std::vector<Group> out;
  Group g;
  for (size_t i : idx)
    g.members.insert(g.members.end(), groups[i].members.begin(), groups[i].members.end());
  g.center = centroid(g.members);
  out.push_back(std::move(g));
  return out;
}

}  // namespace

// ---------------------------------------------------------------- CPoly

CPoly::CPoly(std::vector<cplx> coeffs) : c_(std::move(coeffs)) { trim(); }

CPoly CPoly::monomial(int k, cplx c) {
  std::vector<cplx> v(static_cast<size_t>(k) + 1, cplx{});
  v.back() = c;
  return CPoly(std::move(v));
}

CPoly CPoly::from_roots(std::span<const RootCluster> roots, cplx lead) {
  CPoly p = constant(lead);
  for (const auto& r : roots)
    for (int k = 0; k < r.multiplicity; ++k) p = p * CPoly{-r.location, 1.0};
  return p;
}

void CPoly::trim() {
  const double m = max_abs();
  if (m == 0.0) {
    c_.clear();
    return;
  }
  while (!c_.empty() && std::abs(c_.back()) <= kTrimTol * m) c_.pop_back();
}

double CPoly::max_abs() const {
  double m = 0.0;
  for (auto c : c_) m = std::max(m, std::abs(c));
  return m;
}

cplx CPoly::operator()(cplx z) const {
  cplx s = 0.0;
  for (size_t k = c_.size(); k-- > 0;) s = s * z + c_[k];
  return s;
}

CPoly& CPoly::operator+=(const CPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), cplx{});
  for (size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
  trim();
  return *this;
}

CPoly& CPoly::operator-=(const CPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), cplx{});
  for (size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
  trim();
  return *this;
}

CPoly& CPoly::operator*=(cplx s) {
  for (auto& c : c_) c *= s;
  trim();
  return *this;
}

CPoly operator*(const CPoly& a, const CPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<cplx> r(a.c_.size() + b.c_.size() - 1, cplx{});
  for (size_t i = 0; i < a.c_.size(); ++i)
    for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  return CPoly(std::move(r));
}

cplx poly_eval(const CPoly& p, cplx z) { return p(z); }

CPoly poly_derivative(const CPoly& p) {
  if (p.degree() < 1) return {};
  std::vector<cplx> d(static_cast<size_t>(p.degree()));
  for (int k = 1; k <= p.degree(); ++k) d[static_cast<size_t>(k - 1)] = static_cast<double>(k) * p[k];
  return CPoly(std::move(d));
}

PolyDivMod poly_divmod(const CPoly& a, const CPoly& b) {
  if (b.is_zero()) fail(ErrorKind::ZeroDenominator, "polynomial division by zero");
  if (a.degree() < b.degree()) return {CPoly{}, a};
  std::vector<cplx> rem(a.coeffs().begin(), a.coeffs().end());
  const int db = b.degree();
  std::vector<cplx> q(static_cast<size_t>(a.degree() - db + 1), cplx{});
  const cplx lead = b.leading();
  for (int k = a.degree() - db; k >= 0; --k) {
    const cplx f = rem[static_cast<size_t>(k + db)] / lead;
    q[static_cast<size_t>(k)] = f;
    for (int j = 0; j <= db; ++j) rem[static_cast<size_t>(k + j)] -= f * b[j];
  }
  rem.resize(static_cast<size_t>(db));
  return {CPoly(std::move(q)), CPoly(std::move(rem))};
}

CPoly deflate(const CPoly& p, cplx z, int times) {
  CPoly cur = p;
  for (int t = 0; t < times && cur.degree() >= 1; ++t) {
    const int n = cur.degree();
    std::vector<cplx> q(static_cast<size_t>(n));
    if (std::abs(z) <= 1.0) {
      q[static_cast<size_t>(n - 1)] = cur[n];
      for (int k = n - 1; k >= 1; --k) q[static_cast<size_t>(k - 1)] = cur[k] + z * q[static_cast<size_t>(k)];
    } else {
      q[0] = -cur[0] / z;
      for (int k = 1; k < n; ++k) q[static_cast<size_t>(k)] = (q[static_cast<size_t>(k - 1)] - cur[k]) / z;
    }
    cur = CPoly(std::move(q));
  }
  return cur;
}

std::vector<cplx> poly_taylor(const CPoly& p, cplx z0, int count) {
  std::vector<cplx> c(p.coeffs().begin(), p.coeffs().end());
  std::vector<cplx> out(static_cast<size_t>(std::max(count, 0)), cplx{});
  const int n = static_cast<int>(c.size());
  // Repeated synthetic division by (tau - z0).
  for (int j = 0; j < count && j < n; ++j) {
    for (int k = n - 2; k >= j; --k) c[static_cast<size_t>(k)] += z0 * c[static_cast<size_t>(k + 1)];
    out[static_cast<size_t>(j)] = c[static_cast<size_t>(j)];
  }
  return out;
}

std::vector<RootCluster> poly_roots(const CPoly& p, double cluster_tol) {
  if (p.is_zero()) fail(ErrorKind::InvalidArgument, "roots of the zero polynomial");
  if (p.degree() < 1) return {};

  auto c = p.coeffs();
  size_t zeros_at_origin = 0;
  while (zeros_at_origin < c.size() && c[zeros_at_origin] == cplx{}) ++zeros_at_origin;

  std::vector<cplx> raw(zeros_at_origin, cplx{});
  if (c.size() - zeros_at_origin > 1) {
    auto rest = aberth(c.subspan(zeros_at_origin));
    raw.insert(raw.end(), rest.begin(), rest.end());
  }

  double max_root = 0.0;
  for (auto z : raw) max_root = std::max(max_root, std::abs(z));
  const double tight = std::max(cluster_tol * max_root, kClusterFloor);
  const double loose = std::max(1e-2 * max_root, tight);

  std::vector<Group> groups;
  for (auto z : raw) groups.push_back(Group{{z}, z});

  // Geometric pass.
  {
    std::vector<Group> next;
    for (const auto& comp : components(groups, tight)) {
      if (comp.size() == 1) {
        next.push_back(groups[comp[0]]);
      } else {
        auto m = merge(groups, comp);
        next.push_back(std::move(m[0]));
      }
    }
    groups = std::move(next);
  }

  // Verified consolidation, coarse radii first so that a whole m-fold
  // cluster is tried before its sub-pairs.
  for (double r = loose; r > tight; r *= 0.1) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& comp : components(groups, r)) {
        if (comp.size() < 2) continue;
        Group g = merge(groups, comp)[0];
        double spread = 0.0;
        for (auto z : g.members) spread = std::max(spread, std::abs(z - g.center));
        const cplx polished = polish(p, g.center, g.mult(), std::max(spread, tight));
        if (!is_multiple_root(p, polished, g.mult())) continue;
        g.center = polished;
        std::vector<Group> next;
        for (size_t i = 0; i < groups.size(); ++i)
          if (std::find(comp.begin(), comp.end(), i) == comp.end()) next.push_back(groups[i]);
        next.push_back(std::move(g));
        groups = std::move(next);
        changed = true;
        break;
      }
    }
  }

  std::vector<RootCluster> out;
  for (auto& g : groups) {
    double spread = 0.0;
    for (auto z : g.members) spread = std::max(spread, std::abs(z - g.center));
    const double move = std::max({spread, tight, 1e-8 * std::abs(g.center)});
    const cplx loc = (g.mult() == 1 || spread > 0.0) ? polish(p, g.center, g.mult(), move) : g.center;
    out.push_back({loc, g.mult()});
  }
  std::sort(out.begin(), out.end(), [](const RootCluster& a, const RootCluster& b) {
    if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
    return a.location.imag() < b.location.imag();
  });
  return out;
}

// ---------------------------------------------------------------- CRational

cplx CRational::derivative_at(cplx z) const {
  const cplx d = den_(z);
  return (poly_derivative(num_)(z) * d - num_(z) * poly_derivative(den_)(z)) / (d * d);
}

std::vector<RootCluster> CRational::zeros() const {
  return num_.degree() >= 1 ? poly_roots(num_) : std::vector<RootCluster>{};
}

std::vector<RootCluster> CRational::poles() const {
  return den_.degree() >= 1 ? poly_roots(den_) : std::vector<RootCluster>{};
}

CRational rat_normalize(const CPoly& num, const CPoly& den) {
  if (den.is_zero()) fail(ErrorKind::ZeroDenominator, "rational function with zero denominator");
  if (num.is_zero()) return CRational();
  CPoly n = num, d = den;
  if (d.degree() >= 1 && n.degree() >= 1) {
    auto dz = poly_roots(d);
    auto nz = poly_roots(n);
    for (const auto& dc : dz) {
      long best = -1;
      double best_dist = kCancelTol * std::max(1.0, std::abs(dc.location));
      for (size_t i = 0; i < nz.size(); ++i) {
        if (nz[i].multiplicity == 0) continue;
        const double dist = std::abs(nz[i].location - dc.location);
        if (dist <= best_dist) {
          best_dist = dist;
          best = static_cast<long>(i);
        }
      }
      if (best < 0) continue;
      auto& nc = nz[static_cast<size_t>(best)];
      const int k = std::min(nc.multiplicity, dc.multiplicity);
      n = deflate(n, nc.location, k);
      d = deflate(d, dc.location, k);
      nc.multiplicity -= k;
    }
  }
  const cplx lead = d.leading();
  std::vector<cplx> dc(d.coeffs().begin(), d.coeffs().end());
  for (auto& x : dc) x /= lead;
  dc.back() = 1.0;
  return CRational(n * (1.0 / lead), CPoly(std::move(dc)), 0);
}

namespace {

bool same_poly(const CPoly& a, const CPoly& b) {
  if (a.degree() != b.degree()) return false;
  const double scale = std::max(a.max_abs(), b.max_abs());
  for (int k = 0; k <= a.degree(); ++k)
    if (std::abs(a[k] - b[k]) > 1e-14 * scale) return false;
  return true;
}

// Sum of two numerators with cancellation noise removed coefficient-wise.
CPoly chopped_sum(const CPoly& x, const CPoly& y, double sign) {
  const double scale = std::max(x.max_abs(), y.max_abs());
  const int deg = std::max(x.degree(), y.degree());
  std::vector<cplx> c(static_cast<size_t>(std::max(deg + 1, 0)));
  for (int k = 0; k <= deg; ++k) {
    cplx v = x[k] + sign * y[k];
    if (std::abs(v) <= 4.0 * kEps * scale) v = 0.0;
    c[static_cast<size_t>(k)] = v;
  }
  return CPoly(std::move(c));
}

}  // namespace

CRational rat_arith(const CRational& a, const CRational& b, RatOp op) {
  switch (op) {
    case RatOp::add:
    case RatOp::sub: {
      const double sign = op == RatOp::add ? 1.0 : -1.0;
      if (a.is_zero()) return sign * b;
      if (b.is_zero()) return a;
      if (same_poly(a.den(), b.den())) return rat_normalize(chopped_sum(a.num(), b.num(), sign), a.den());
      return rat_normalize(chopped_sum(a.num() * b.den(), b.num() * a.den(), sign), a.den() * b.den());
    }
    case RatOp::mul:
      if (a.is_zero() || b.is_zero()) return CRational();
      return rat_normalize(a.num() * b.num(), a.den() * b.den());
    case RatOp::div:
      if (b.is_zero()) fail(ErrorKind::ZeroDenominator, "division by the zero rational function");
      if (a.is_zero()) return CRational();
      return rat_normalize(a.num() * b.den(), a.den() * b.num());
  }
  return CRational();
}

CRational operator*(cplx s, const CRational& a) {
  if (s == cplx{} || a.is_zero()) return CRational();
  return rat_normalize(a.num() * s, a.den());
}

CRational operator-(const CRational& a) { return -1.0 * a; }

CRational inverse(const CRational& a) { return CRational::constant(1.0) / a; }

CRational rat_derivative(const CRational& a) {
  const CPoly n = poly_derivative(a.num()) * a.den() - a.num() * poly_derivative(a.den());
  return rat_normalize(n, a.den() * a.den());
}

ValueAtInfinity rat_eval_infinity(const CRational& r) {
  if (r.is_zero()) return {false, 0.0};
  const int dn = r.num().degree(), dd = r.den().degree();
  if (dn < dd) return {false, 0.0};
  if (dn == dd) return {false, r.num().leading() / r.den().leading()};
  return {true, cplx{std::numeric_limits<double>::infinity(), 0.0}};
}

namespace {

std::vector<cplx> series_divide(const std::vector<cplx>& n, const std::vector<cplx>& d, int count) {
  std::vector<cplx> out(static_cast<size_t>(count), cplx{});
  if (d.empty() || d[0] == cplx{}) fail(ErrorKind::InvalidArgument, "series division by a series vanishing at the origin");
  for (int k = 0; k < count; ++k) {
    cplx s = k < static_cast<int>(n.size()) ? n[static_cast<size_t>(k)] : cplx{};
    for (int j = 1; j <= k && j < static_cast<int>(d.size()); ++j)
      s -= d[static_cast<size_t>(j)] * out[static_cast<size_t>(k - j)];
    out[static_cast<size_t>(k)] = s / d[0];
  }
  return out;
}

}  // namespace

std::vector<cplx> rat_taylor(const CRational& r, cplx z0, int count) {
  auto n = poly_taylor(r.num(), z0, count);
  auto d = poly_taylor(r.den(), z0, std::max(count, r.den().degree() + 1));
  return series_divide(n, d, count);
}

std::vector<cplx> rat_laurent_at_infinity(const CRational& r, int count) {
  if (!r.bounded_at_infinity()) fail(ErrorKind::UnboundedAtInfinity, "Laurent expansion of a function with a pole at infinity");
  if (r.is_zero()) return std::vector<cplx>(static_cast<size_t>(count), cplx{});
  const int dd = r.den().degree();
  const int shift = dd - r.num().degree();
  // With w = 1/tau: r = w^shift * revnum(w) / revden(w).
  std::vector<cplx> rn, rd;
  for (int k = r.num().degree(); k >= 0; --k) rn.push_back(r.num()[k]);
  for (int k = dd; k >= 0; --k) rd.push_back(r.den()[k]);
  auto s = series_divide(rn, rd, std::max(count - shift, 0));
  std::vector<cplx> out(static_cast<size_t>(count), cplx{});
  for (int j = shift; j < count; ++j) out[static_cast<size_t>(j)] = s[static_cast<size_t>(j - shift)];
  return out;
}

double max_sample_deviation(const CRational& a, const CRational& b, std::span<const cplx> points) {
  double worst = 0.0;
  for (auto z : points) {
    const cplx bz = b(z);
    worst = std::max(worst, std::abs(a(z) - bz) / std::max(1.0, std::abs(bz)));
  }
  return worst;
}

std::string to_string(const CPoly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  for (int k = 0; k <= p.degree(); ++k) {
    if (k) os << " + ";
    os << "(" << p[k].real() << (p[k].imag() < 0 ? "-" : "+") << std::abs(p[k].imag()) << "i)t^" << k;
  }
  return os.str();
}

}  // namespace whf
