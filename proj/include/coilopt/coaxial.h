#ifndef COILOPT_COAXIAL_H_
#define COILOPT_COAXIAL_H_

#include <span>

#include "coilopt/quadrature.h"

namespace coilopt {

// Coaxial verification setup: receiver of radius b on z = 0 and transmitter of
// radius a on z = -d, both with N control points placed on the circles.
struct CoaxialSample {
  double b = 0.0;
  int count = 0;
  double mi = 0.0;          // quadrature Neumann M
  double mi_exact = 0.0;    // closed form
  double dmdb = 0.0;        // radial projection of the CP sensitivities
  double dmdb_exact = 0.0;  // closed form

  double mi_error() const;
  double dmdb_error() const;
};

CoaxialSample coaxial_sample(double a, double b, double d, int count, int degree,
                             const QuadratureRule& rule, double mu = 1.0);

// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace coilopt

#endif  // COILOPT_COAXIAL_H_
