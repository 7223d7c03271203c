#include <doctest.h>

#include <cmath>
#include <random>

#include "coilopt/em.h"
#include "coilopt/errors.h"
#include "coilopt/objective.h"
#include "coilopt/oracle.h"
#include "coilopt/scene_io.h"

using namespace coilopt;

namespace {

double gradient_error(const Scene& scene, const std::vector<double>& x, double h) {
  const auto f = [&](const std::vector<double>& y) { return objective(scene, y); };
  return oracle::max_relative_error(objective_gradient(scene, x),
                                    oracle::finite_difference_gradient4(f, x, h));
}

std::vector<double> perturbed(const std::vector<double>& x, double amplitude, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-amplitude, amplitude);
  std::vector<double> y = x;
  for (double& v : y) v += u(rng);
  return y;
}

}  // namespace

TEST_CASE("design layout") {
  const Scene s1 = fixtures::example1(1.0);
  const Scene s2 = fixtures::example2();
  const Scene s3 = fixtures::example3(fixtures::ToroidalCase::kI);
  CHECK(design_size(s1) == 1);
  CHECK(design_size(s2) == 96);
  CHECK(design_size(s3) == 192);
  CHECK(design_offset(s2, 0) == 0);
  CHECK(design_offset(s2, 1) == -1);
  CHECK(pack(s1) == std::vector<double>{1.0});

  Scene copy = s3;
  const std::vector<double> x = perturbed(pack(s3), 0.05, 1);
  unpack(copy, x);
  CHECK(pack(copy) == x);
  CHECK(copy.coils[1].curve.control_points() == s3.coils[1].curve.control_points());
  const std::vector<double> short_x(10);
  CHECK_THROWS_AS(unpack(copy, short_x), InvalidArgument);
  CHECK_THROWS_AS(objective(copy, short_x), InvalidArgument);

  // realize leaves the scene untouched.
  const auto curves = realize(s3, x);
  CHECK(curves[0].control_points()[5].x == doctest::Approx(x[15]));
  CHECK(pack(s3) != x);
}

TEST_CASE("radial coupling scales about the center") {
  const Scene s = fixtures::example1(1.0);
  const auto curves = realize(s, std::vector<double>{2.5});
  const auto& p0 = s.coils[0].curve.control_points();
  const auto& p = curves[0].control_points();
  for (std::size_t m = 0; m < p.size(); ++m) {
    CHECK(norm(p[m] - s.coils[0].radial_center - 2.5 * (p0[m] - s.coils[0].radial_center)) <=
          1e-14);
  }
}

TEST_CASE("objective values") {
  Scene s = fixtures::example2();
  const std::vector<double> x = pack(s);
  const double m = mutual_inductance(s.coils[0].curve, s.coils[1].curve, s.rule, s.mu);
  CHECK(objective(s, x) == doctest::Approx(0.5 * (m - 0.1) * (m - 0.1)).epsilon(1e-13));

  const ObjectiveEvaluation e = evaluate_objective(s, x);
  CHECK(e.value == doctest::Approx(objective(s, x)).epsilon(1e-14));
  REQUIRE(e.mutual_inductances.size() == 1);
  CHECK(e.mutual_inductances[0] == doctest::Approx(m).epsilon(1e-14));
  CHECK(e.gradient == objective_gradient(s, x));

  // Targets already met: J and its gradient vanish.
  s.pairs[0].target = e.mutual_inductances[0];
  CHECK(objective(s, x) == 0.0);
  for (double g : objective_gradient(s, x)) CHECK(g == 0.0);

  const Scene s1 = fixtures::example1(1.0);
  const double m1 = pair_mutual_inductances(s1, pack(s1))[0];
  CHECK(m1 == doctest::Approx(0.38854715).epsilon(1e-7));
  CHECK(objective(s1, pack(s1)) == doctest::Approx(0.5 * m1 * m1).epsilon(1e-14));
}

TEST_CASE("pairs enter additively and order-independently") {
  const Scene s = fixtures::example3(fixtures::ToroidalCase::kI);
  const std::vector<double> x = perturbed(pack(s), 0.05, 2);
  Scene first = s, second = s, swapped = s;
  first.pairs.pop_back();
  second.pairs.erase(second.pairs.begin());
  for (PairSpec& p : swapped.pairs) std::swap(p.alpha, p.beta);

  CHECK(objective(s, x) ==
        doctest::Approx(objective(first, x) + objective(second, x)).epsilon(1e-14));
  CHECK(std::abs(objective(swapped, x) - objective(s, x)) <= 1e-12 * objective(s, x));

  const auto g = objective_gradient(s, x);
  const auto g1 = objective_gradient(first, x);
  const auto g2 = objective_gradient(second, x);
  const auto gs = objective_gradient(swapped, x);
  double scale = 0.0;
  for (double v : g) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(std::abs(g[i] - g1[i] - g2[i]) <= 1e-13 * scale);
    CHECK(std::abs(g[i] - gs[i]) <= 1e-12 * scale);
  }
}

TEST_CASE("gradient matches finite differences") {
  const Scene s1 = fixtures::example1(1.0);
  CHECK(gradient_error(s1, pack(s1), 2.5e-4) <= 1e-6);
  CHECK(gradient_error(s1, std::vector<double>{2.7}, 2.5e-4) <= 1e-6);

  const Scene s2 = fixtures::example2();
  const double h2 = 2.5e-4 * s2.coils[0].curve.bounding_box_diagonal();
  CHECK(gradient_error(s2, pack(s2), h2) <= 1e-6);
  CHECK(gradient_error(s2, perturbed(pack(s2), 0.1, 3), h2) <= 1e-6);

  const Scene s3 = fixtures::example3(fixtures::ToroidalCase::kII);
  const double h3 = 2.5e-4 * s3.coils[0].curve.bounding_box_diagonal();
  CHECK(gradient_error(s3, perturbed(pack(s3), 0.05, 4), h3) <= 1e-6);
}

TEST_CASE("radial gradient vanishes near the coaxial optimum") {
  const Scene s = fixtures::example1(1.0);
  const auto dj = [&](double b) { return objective_gradient(s, std::vector<double>{b})[0]; };
  CHECK(dj(1.0) > 0.0);
  CHECK(dj(3.0) < 0.0);
  double lo = 1.0, hi = 3.0;
  for (int k = 0; k < 60; ++k) {
    const double mid = 0.5 * (lo + hi);
    (dj(mid) > 0.0 ? lo : hi) = mid;
  }
  CHECK(lo == doctest::Approx(1.7757).epsilon(2e-3 / 1.7757));
}
