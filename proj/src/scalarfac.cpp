#include "whf/scalarfac.hpp"

#include <string>

#include "whf/error.hpp"

namespace whf {

namespace {

struct Split {
  std::vector<RootCluster> inside;
  std::vector<RootCluster> outside;
  int inside_count = 0;
};

Split split(const Contour& c, const std::vector<RootCluster>& clusters, const char* what) {
  require_off_contour(c, clusters, what);
  Split s;
  for (const auto& rc : clusters) {
    if (classify_point(c, rc.location) == Region::Interior) {
      s.inside.push_back(rc);
      s.inside_count += rc.multiplicity;
    } else {
      s.outside.push_back(rc);
    }
  }
  return s;
}

}  // namespace

int winding_number(const CRational& r, const Contour& c) {
  if (r.is_zero()) fail(ErrorKind::ZeroOnContour, "winding number of the zero function");
  const auto zeros = split(c, r.zeros(), "zero");
  const auto poles = split(c, r.poles(), "pole");
  return zeros.inside_count - poles.inside_count;
}

ScalarFactorization scalar_canonical_factorize(const CRational& r, const Contour& c) {
  if (r.is_zero()) fail(ErrorKind::ZeroOnContour, "cannot factorise the zero function");
  const auto zeros = split(c, r.zeros(), "zero");
  const auto poles = split(c, r.poles(), "pole");
  const int winding = zeros.inside_count - poles.inside_count;
  if (winding != 0)
    fail(ErrorKind::NonZeroWinding, "winding number " + std::to_string(winding) + " obstructs a canonical factorisation");

  const CPoly plus_num = CPoly::from_roots(zeros.outside);
  const CPoly plus_den = CPoly::from_roots(poles.outside);
  // Exterior zeros and poles are all nonzero, so plus(0) = k * num(0) / den(0) = 1.
  const cplx k = plus_den(0.0) / plus_num(0.0);

  ScalarFactorization out;
  out.winding = 0;
  out.plus = rat_normalize(plus_num * k, plus_den);
  const cplx lead = r.num().leading() / k;
  out.minus = rat_normalize(CPoly::from_roots(zeros.inside, lead), CPoly::from_roots(poles.inside));
  return out;
}

}  // namespace whf
