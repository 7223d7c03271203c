#include "coilopt/coaxial.h"

#include <cmath>

#include "coilopt/curve.h"
#include "coilopt/em.h"
#include "coilopt/errors.h"
#include "coilopt/oracle.h"

namespace coilopt {

double CoaxialSample::mi_error() const { return std::abs(mi - mi_exact) / std::abs(mi_exact); }

double CoaxialSample::dmdb_error() const {
  return std::abs(dmdb - dmdb_exact) / std::abs(dmdb_exact);
}

CoaxialSample coaxial_sample(double a, double b, double d, int count, int degree,
                             const QuadratureRule& rule, double mu) {
  const Vec3 axis{0.0, 0.0, 1.0};
  const CoilCurve receiver = circle_coil({0.0, 0.0, 0.0}, b, axis, count, degree, "C");
  const CoilCurve transmitter = circle_coil({0.0, 0.0, -d}, a, axis, count, degree, "Cprime");
  const OneSidedSensitivity s =
      mi_sensitivity_of(discretize(receiver, rule), discretize(transmitter, rule), mu);
  CoaxialSample out;
  out.b = b;
  out.count = count;
  out.mi = s.mutual_inductance;
  out.mi_exact = oracle::coaxial_mi(a, b, d, mu);
  out.dmdb = oracle::radial_sensitivity(receiver, s.d, {0.0, 0.0, 0.0}, b);
  out.dmdb_exact = oracle::coaxial_mi_db(a, b, d, mu);
  return out;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidArgument("loglog_slope: need at least two matching samples");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) {
      throw InvalidArgument("loglog_slope: samples must be positive");
    }
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace coilopt
