#include <doctest.h>

#include <cmath>
#include <numbers>

#include "coilopt/coaxial.h"
#include "coilopt/curve.h"
#include "coilopt/em.h"
#include "coilopt/errors.h"
#include "coilopt/oracle.h"

using namespace coilopt;
using namespace coilopt::oracle;

namespace {

constexpr double kPi = std::numbers::pi;

// 64-point Gauss-Legendre on [0, pi/2], split in 4 panels.
double definition(double m, bool first_kind) {
  const QuadratureRule r = gauss_legendre(64);
  double total = 0.0;
  for (int panel = 0; panel < 4; ++panel) {
    total += integrate_interval(r, panel * kPi / 8, (panel + 1) * kPi / 8, [&](double phi) {
      const double s = std::sin(phi);
      const double root = std::sqrt(1.0 - m * s * s);
      return first_kind ? 1.0 / root : root;
    });
  }
  return total;
}

}  // namespace

TEST_CASE("elliptic integrals: special values") {
  CHECK(elliptic_K(0.0) == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(elliptic_E(0.0) == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(elliptic_E(1.0) == 1.0);
  CHECK_THROWS_AS(elliptic_K(1.0), InvalidArgument);
  CHECK_THROWS_AS(elliptic_K(-0.1), InvalidArgument);
  CHECK_THROWS_AS(elliptic_E(1.1), InvalidArgument);
}

TEST_CASE("elliptic integrals match quadrature of the definition") {
  for (double m : {0.05, 0.3, 0.5, 0.8, 0.95}) {
    CHECK(std::abs(elliptic_K(m) - definition(m, true)) <= 1e-12);
    CHECK(std::abs(elliptic_E(m) - definition(m, false)) <= 1e-12);
  }
}

TEST_CASE("Legendre relation") {
  for (double m : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const double lhs = elliptic_E(m) * elliptic_K(1 - m) + elliptic_E(1 - m) * elliptic_K(m) -
                       elliptic_K(m) * elliptic_K(1 - m);
    CHECK(std::abs(lhs - kPi / 2) <= 1e-12);
  }
}

TEST_CASE("coaxial mutual inductance closed form") {
  CHECK(coaxial_mi(1.0, 1.77, 1.0) == doctest::Approx(0.5640263).epsilon(1e-6 / 0.564));
  // Cross-checked with scipy.special.ellipk/ellipe and a 2-D adaptive quadrature
  // of the Neumann integral of two unit circles one unit apart.
  CHECK(coaxial_mi(1.0, 1.0, 1.0) == doctest::Approx(0.39317514837200).epsilon(1e-12));
  CHECK(std::abs(coaxial_mi(1.0, 1.0, 100.0)) <= 1e-4);
  CHECK(coaxial_mi(2.0, 1.0, 2.0, 3.0) == doctest::Approx(3.0 * coaxial_mi(2.0, 1.0, 2.0)));
  for (double b : {0.3, 1.5, 4.0}) {
    CHECK(std::abs(coaxial_mi(1.0, b, 0.7) - coaxial_mi(b, 1.0, 0.7)) <=
          1e-13 * coaxial_mi(1.0, b, 0.7));
  }
  CHECK_THROWS_AS(coaxial_mi(1.0, 1.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(coaxial_mi(-1.0, 1.0, 1.0), InvalidArgument);
  // Example 1 optimum of the continuous problem: J* = M(1.77)^2 / 2.
  const double m = coaxial_mi(1.0, 1.77, 1.0);
  CHECK(0.5 * m * m == doctest::Approx(0.159063).epsilon(1e-6 / 0.159));
}

TEST_CASE("closed-form radius derivative") {
  for (double b : {0.2, 0.5, 1.0, 1.77, 2.5, 3.0}) {
    const auto m = [](const std::vector<double>& x) { return coaxial_mi(1.0, x[0], 1.0); };
    const double fd = finite_difference_gradient4(m, {b}, 1e-3)[0];
    CHECK(std::abs(coaxial_mi_db(1.0, b, 1.0) - fd) <= 1e-8 * std::max(std::abs(fd), 1e-2));
  }
  CHECK(coaxial_mi_db(1.0, 1.7, 1.0) > 0.0);
  CHECK(coaxial_mi_db(1.0, 1.8, 1.0) < 0.0);
  const double small = coaxial_mi_db(1.0, 1e-3, 1.0);
  CHECK(small > 0.0);
  CHECK(small < 1e-2);
}

TEST_CASE("radial sensitivity against the closed form") {
  const QuadratureRule rule = gauss_legendre(16);
  const CoilCurve c = circle_coil({}, 1.0, {0.0, 0.0, 1.0}, 8, 2);
  const std::vector<Vec3> zero(8);
  CHECK(radial_sensitivity(c, zero, {}, 1.0) == 0.0);
  CHECK_THROWS_AS(radial_sensitivity(c, zero, {}, 0.0), InvalidArgument);

  // Frozen values of the N = 32 discretization; the remaining gap is the
  // O(N^-2) inset of the realized curve and shrinks with N.
  const CoaxialSample s1 = coaxial_sample(1.0, 1.0, 1.0, 32, 2, rule);
  CHECK(s1.dmdb == doctest::Approx(0.47761201).epsilon(1e-7));
  CHECK(s1.dmdb_error() <= 1e-2);
  CHECK(coaxial_sample(1.0, 2.0, 1.0, 32, 2, rule).dmdb == doctest::Approx(-0.060954384).epsilon(1e-7));
  for (double b : {0.5, 1.0, 2.0, 3.0}) {
    const CoaxialSample fine = coaxial_sample(1.0, b, 1.0, 128, 2, rule);
    CHECK(fine.dmdb_error() <= 1e-2);
  }
}

TEST_CASE("sensitivity error decays like N^-2") {
  const QuadratureRule rule = gauss_legendre(16);
  std::vector<double> ns, errors;
  for (int n : {8, 16, 32, 64, 128}) {
    ns.push_back(n);
    errors.push_back(coaxial_sample(1.0, 1.0, 1.0, n, 2, rule).dmdb_error());
  }
  const double slope = loglog_slope(ns, errors);
  CHECK(slope >= -2.4);
  CHECK(slope <= -1.6);
  CHECK(loglog_slope(std::vector<double>{1, 10}, std::vector<double>{1, 100}) ==
        doctest::Approx(2.0));
}

TEST_CASE("finite-difference gradients") {
  const auto linear = [](const std::vector<double>& x) { return 3 * x[0] - 2 * x[1] + 0.5 * x[2]; };
  const auto g = finite_difference_gradient(linear, {1.0, 2.0, 3.0}, 0.1);
  CHECK(g[0] == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(g[1] == doctest::Approx(-2.0).epsilon(1e-13));
  CHECK(g[2] == doctest::Approx(0.5).epsilon(1e-13));
  const auto sq = [](const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += 0.5 * v * v;
    return s;
  };
  const std::vector<double> x{0.3, -1.2, 4.0};
  const auto gs = finite_difference_gradient(sq, x, 1e-5);
  const auto g4 = finite_difference_gradient4(sq, x, 1e-2);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(gs[i] - x[i]) <= 1e-10);
    CHECK(std::abs(g4[i] - x[i]) <= 1e-12);
  }
  CHECK_THROWS_AS(finite_difference_gradient(sq, x, 0.0), InvalidArgument);
  CHECK(max_relative_error(std::vector<double>{1.0, 1e-14}, std::vector<double>{1.0, 0.0}) == 0.0);
  CHECK(max_relative_error(std::vector<double>{1.0, 2.0}, std::vector<double>{1.1, 2.0}) ==
        doctest::Approx(0.1 / 1.1));
}

TEST_CASE("dense polyline oracle agrees with quadrature") {
  const QuadratureRule rule = gauss_legendre(16);
  const Vec3 z{0.0, 0.0, 1.0};
  struct Pair {
    CoilCurve a, b;
  };
  const Pair pairs[] = {
      {circle_coil({}, 1.0, z, 32, 2), circle_coil({0.0, 0.0, -1.0}, 1.0, z, 32, 2)},
      {circle_coil({1.0, 0.0, 1.0}, 2.0, z, 32, 2), circle_coil({}, 1.0, z, 32, 2)},
      {torus_coil(2.0, 1.0, 4, 32, 2), circle_coil({0.0, 0.0, -1.5}, 3.0, z, 32, 2)},
  };
  for (const Pair& p : pairs) {
    const double q = mutual_inductance(p.a, p.b, rule);
    const double poly = polyline_mutual_inductance(p.a, p.b, 10000);
    CHECK(std::abs(q - poly) <= 1e-4 * std::abs(poly));
  }
  CHECK_THROWS_AS(polyline_mutual_inductance(pairs[0].a, pairs[0].b, 2), InvalidArgument);
}

TEST_CASE("length difference") {
  const QuadratureRule rule = gauss_legendre(16);
  const CoilCurve a = torus_coil(2.0, 1.0, 3, 24, 2);
  std::vector<Vec3> cps = a.control_points();
  cps[5].z += 0.3;
  const CoilCurve b(a.basis(), cps);
  CHECK(oracle::length_difference(a, a, rule) == 0.0);
  CHECK(oracle::length_difference(b, a, rule) ==
        doctest::Approx(length(b, rule) - length(a, rule)).epsilon(1e-12));
  CHECK(oracle::length_difference(a, b, rule) == -oracle::length_difference(b, a, rule));
  CHECK_THROWS_AS(oracle::length_difference(a, circle_coil({}, 1.0, {0, 0, 1}, 8, 2), rule),
                  InvalidArgument);
}
