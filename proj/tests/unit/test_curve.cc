#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "coilopt/curve.h"
#include "coilopt/errors.h"
#include "coilopt/oracle.h"

using namespace coilopt;

namespace {

const QuadratureRule& rule16() {
  static const QuadratureRule r = gauss_legendre(16);
  return r;
}

const Vec3 kZ{0.0, 0.0, 1.0};

}  // namespace

TEST_CASE("circle and torus lengths") {
  const CoilCurve c = circle_coil({1.0, 0.0, 1.0}, 2.0, kZ, 32, 2, "C");
  CHECK(length(c, rule16()) == doctest::Approx(12.50594).epsilon(1e-4 / 12.5));
  // CPs on the circle give a curve strictly inside it.
  CHECK(length(c, rule16()) < 4.0 * std::numbers::pi);
  const CoilCurve t = torus_coil(2.0, 1.0, 16, 64, 2, "C1");
  CHECK(length(t, rule16()) == doctest::Approx(74.44167).epsilon(1e-3 / 74.4));
}

TEST_CASE("circle control points") {
  const CoilCurve c = circle_coil({0.0, 0.0, 0.0}, 1.0, kZ, 8, 2);
  CHECK(c.control_points()[0].x == doctest::Approx(1.0));
  CHECK(c.control_points()[0].y == doctest::Approx(0.0));
  CHECK(c.control_points()[2].y == doctest::Approx(1.0));  // counter-clockwise about +z
  const CoilCurve cx = circle_coil({0.0, 0.0, 0.0}, 1.0, {1.0, 0.0, 0.0}, 8, 2);
  CHECK(cx.control_points()[0].y == doctest::Approx(1.0));
  CHECK(cx.control_points()[2].z == doctest::Approx(1.0));
  CHECK_THROWS_AS(circle_coil({}, 0.0, kZ, 8, 2), InvalidArgument);
  CHECK_THROWS_AS(circle_coil({}, 1.0, {0.0, 0.0, 2.0}, 8, 2), InvalidArgument);
  CHECK_THROWS_AS(torus_coil(1.0, 1.0, 3, 16, 2), InvalidArgument);
}

TEST_CASE("realized circle is nearly round and tangent") {
  const CoilCurve c = circle_coil({0.0, 0.0, 0.0}, 1.0, kZ, 32, 2);
  double worst = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double t = i / 1000.0;
    const Vec3 s = c.point(t);
    const Vec3 v = c.velocity(t);
    worst = std::max(worst, std::abs(dot(s, v)) / (norm(s) * norm(v)));
    CHECK(norm(s) < 1.0 + 1e-12);
    CHECK(norm(s) > 0.99);
    CHECK(std::abs(s.z) == 0.0);
  }
  CHECK(worst <= 1e-3);
}

TEST_CASE("closedness and C1 continuity of quadratic curves") {
  const CoilCurve t = torus_coil(2.0, 1.0, 5, 40, 2);
  CHECK(norm(t.point(0.0) - t.point(1.0)) <= 1e-13);
  CHECK(norm(t.velocity(0.0) - t.velocity(1.0)) <= 1e-10);
  for (int k = 1; k < 40; ++k) {
    const double knot = k / 40.0;
    CHECK(norm(t.velocity(knot - 1e-12) - t.velocity(knot + 1e-12)) <= 1e-6);
  }
}

TEST_CASE("velocity matches differences of position") {
  const CoilCurve t = torus_coil(2.0, 1.0, 3, 24, 3);
  const double h = 1e-6;
  for (double s : {0.11, 0.42, 0.77}) {
    const Vec3 fd = (1.0 / (2 * h)) * (t.point(s + h) - t.point(s - h));
    CHECK(norm(fd - t.velocity(s)) <= 1e-6 * norm(fd));
  }
}

TEST_CASE("affine invariance: translating CPs translates the curve") {
  CoilCurve c = torus_coil(2.0, 0.5, 4, 20, 2);
  const Vec3 shift{0.3, -1.2, 2.5};
  const Vec3 before = c.point(0.37);
  std::vector<Vec3> cps = c.control_points();
  for (Vec3& p : cps) {
    p += shift;
  }
  c.set_control_points(cps);
  CHECK(norm(c.point(0.37) - (before + shift)) <= 1e-13);
}

TEST_CASE("sample weights integrate the parameter interval") {
  const CoilCurve c = circle_coil({}, 1.0, kZ, 12, 2);
  const CurveSamples s = sample(c, rule16());
  CHECK(s.size() == 12 * 16);
  double total = 0.0;
  for (double w : s.weight) {
    total += w;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("length gradient matches finite differences") {
  const CoilCurve base = torus_coil(2.0, 1.0, 3, 18, 2);
  const std::vector<Vec3> g = length_gradient(base, rule16());
  std::vector<double> x;
  for (const Vec3& p : base.control_points()) {
    x.insert(x.end(), {p.x, p.y, p.z});
  }
  const auto f = [&](const std::vector<double>& v) {
    std::vector<Vec3> cps(base.count());
    for (int m = 0; m < base.count(); ++m) {
      cps[m] = {v[3 * m], v[3 * m + 1], v[3 * m + 2]};
    }
    return length(CoilCurve(base.basis(), cps), rule16());
  };
  const std::vector<double> fd = oracle::finite_difference_gradient4(f, x, 1e-3);
  std::vector<double> a;
  for (const Vec3& v : g) {
    a.insert(a.end(), {v.x, v.y, v.z});
  }
  CHECK(oracle::max_relative_error(a, fd) <= 1e-7);
}

TEST_CASE("length gradient of a circle points outward and sums to zero") {
  const CoilCurve c = circle_coil({}, 1.5, kZ, 16, 2);
  const std::vector<Vec3> g = length_gradient(c, rule16());
  Vec3 sum;
  for (int m = 0; m < 16; ++m) {
    sum += g[m];
    CHECK(dot(g[m], c.control_points()[m]) > 0.0);
  }
  CHECK(norm(sum) <= 1e-13);
}

TEST_CASE("degenerate velocity is reported") {
  const CoilCurve point(PeriodicBasis(2, 8), std::vector<Vec3>(8, Vec3{1.0, 2.0, 3.0}));
  CHECK(length(point, rule16()) <= 1e-12);
  CHECK_THROWS_AS(length_gradient(point, rule16()), DegenerateVelocity);
}

TEST_CASE("control point validation") {
  CoilCurve c = circle_coil({}, 1.0, kZ, 8, 2, "ring");
  CHECK_THROWS_AS(c.set_control_points(std::vector<Vec3>(7)), InvalidArgument);
  std::vector<Vec3> bad(8);
  bad[3].y = std::nan("");
  CHECK_THROWS_AS(c.set_control_points(bad), InvalidArgument);
}

TEST_CASE("reversal keeps the shape and flips the direction") {
  const CoilCurve c = torus_coil(2.0, 1.0, 2, 16, 2);
  const CoilCurve r = reversed(c);
  CHECK(length(r, rule16()) == doctest::Approx(length(c, rule16())).epsilon(1e-14));
  // s_r(t) = s(1 - t + p/N): the same points traversed backwards.
  for (double t : {0.05, 0.3, 0.61, 0.9}) {
    const double tau = std::fmod(1.0 - t + 2.0 / 16.0, 1.0);
    CHECK(norm(r.point(t) - c.point(tau)) <= 1e-13);
    CHECK(norm(r.velocity(t) + c.velocity(tau)) <= 1e-11);
  }
}

TEST_CASE("polyline CSV export") {
  const CoilCurve c = circle_coil({}, 1.0, kZ, 8, 2);
  std::ostringstream out;
  write_polyline_csv(out, c, 4);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,x,y,z");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
  }
  CHECK(rows == 5);
  CHECK_THROWS_AS(write_polyline_csv(out, c, 0), InvalidArgument);
}
