#include "coilopt/quadrature.h"

#include <cmath>
#include <numbers>
#include <string>

#include "coilopt/errors.h"

namespace coilopt {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
void legendre(int n, double x, double& p, double& dp) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  p = n == 0 ? 1.0 : p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace

QuadratureRule gauss_legendre(int order) {
  if (order < 1 || order > kMaxQuadratureOrder) {
    throw InvalidArgument("gauss_legendre: order must be in [1, " +
                          std::to_string(kMaxQuadratureOrder) + "], got " +
                          std::to_string(order));
  }
  QuadratureRule rule;
  rule.order = order;
  rule.nodes.assign(order, 0.0);
  rule.weights.assign(order, 0.0);

  if (order == 1) {
    rule.weights[0] = 2.0;
    return rule;
  }

  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // i-th largest root.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double p = 0.0;
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      legendre(order, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-16) {
        break;
      }
    }
    legendre(order, x, p, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[order - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[order - 1 - i] = w;
    rule.weights[i] = w;
  }
  if (order % 2 == 1) {
    rule.nodes[order / 2] = 0.0;
  }
  return rule;
}

double integrate_interval(const QuadratureRule& rule, double lo, double hi,
                          const std::function<double(double)>& f) {
  if (!(lo < hi)) {
    throw InvalidArgument("integrate_interval: empty or reversed interval");
  }
  const double half = 0.5 * (hi - lo);
  double sum = 0.0;
  for (int q = 0; q < rule.order; ++q) {
    sum += rule.weights[q] * f(lo + (rule.nodes[q] + 1.0) * half);
  }
  return half * sum;
}

}  // namespace coilopt
