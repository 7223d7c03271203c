#ifndef COILOPT_QUADRATURE_H_
#define COILOPT_QUADRATURE_H_

#include <functional>
#include <vector>

namespace coilopt {

// Gauss-Legendre rule on the reference interval [-1, 1].
struct QuadratureRule {
  int order = 0;
  std::vector<double> nodes;    // strictly increasing, symmetric about 0
  std::vector<double> weights;  // positive, summing to 2
};

inline constexpr int kDefaultQuadratureOrder = 16;
inline constexpr int kMaxQuadratureOrder = 64;

// Nodes are roots of P_Q found by Newton iteration from Chebyshev guesses.
QuadratureRule gauss_legendre(int order);

// Integral of f over [lo, hi] with the rule mapped affinely onto the interval.
double integrate_interval(const QuadratureRule& rule, double lo, double hi,
                          const std::function<double(double)>& f);

}  // namespace coilopt

#endif  // COILOPT_QUADRATURE_H_
