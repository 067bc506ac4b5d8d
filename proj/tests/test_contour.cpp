#include <doctest.h>

#include <numbers>

#include "fixtures.hpp"

using namespace whf;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("make_contour") {
  CHECK(std::abs(make_contour(-1).involution(2.0) - 0.5) < 1e-15);
  CHECK(std::abs(make_contour(1).involution(2.0) + 0.5) < 1e-15);
  CHECK(kind_of([] { make_contour(2); }) == ErrorKind::BadLambda);
}

TEST_CASE("classify_point") {
  const Contour c = make_contour(1);
  CHECK(classify_point(c, -0.5) == Region::Interior);
  CHECK(classify_point(c, 2.0) == Region::Exterior);
  CHECK(classify_point(c, 1.0) == Region::OnContour);
}

TEST_CASE("sample") {
  const Contour c = make_contour(1);
  const auto s4 = sample(c, 4);
  const cplx expect[4] = {1.0, cplx(0, 1), -1.0, cplx(0, -1)};
  for (int k = 0; k < 4; ++k) CHECK(std::abs(s4[static_cast<size_t>(k)] - expect[k]) < 1e-15);
  CHECK_THROWS_AS(sample(c, 2), Error);
  const auto s8 = sample(c, 8);
  CHECK(std::abs(s8[1] - std::polar(1.0, std::numbers::pi / 4)) < 1e-15);
}

TEST_CASE("check_branch_separation") {
  const Contour c = make_contour(1);
  CHECK_NOTHROW(check_branch_separation(c, -0.5, 2.0, 0.05));
  CHECK(kind_of([&] { check_branch_separation(c, 0.99, 1.0 / 0.99, 0.05); }) == ErrorKind::BranchPointNearContour);
  CHECK_NOTHROW(check_branch_separation(make_contour(-1), -1.0 / 3.0, -3.0, 0.05));
}

TEST_CASE("the involution preserves the circle and swaps the regions") {
  for (int lambda : {-1, 1}) {
    const Contour c = make_contour(lambda);
    for (auto z : sample(c, 16)) CHECK(std::abs(std::abs(c.involution(z)) - 1.0) < 1e-14);
    for (auto z : {cplx(0.3, 0.2), cplx(-0.5), cplx(0.0, 0.9)}) {
      REQUIRE(classify_point(c, z) == Region::Interior);
      CHECK(classify_point(c, c.involution(z)) == Region::Exterior);
    }
  }
}
