#ifndef COILOPT_ORACLE_H_
#define COILOPT_ORACLE_H_

#include <functional>
#include <span>
#include <vector>

#include "coilopt/curve.h"
#include "coilopt/quadrature.h"
#include "coilopt/vec3.h"

// Independent references used to verify the quadrature path: closed forms for
// coaxial circular loops, brute-force polyline integrals and finite differences.
namespace coilopt::oracle {

// Complete elliptic integrals in the PARAMETER convention m = k^2:
//   K(m) = int_0^{pi/2} dphi / sqrt(1 - m sin^2 phi)
//   E(m) = int_0^{pi/2} sqrt(1 - m sin^2 phi) dphi
// Evaluated with the arithmetic-geometric mean. K needs 0 <= m < 1, E 0 <= m <= 1.
double elliptic_K(double m);
double elliptic_E(double m);

// Exact M between coaxial circles of radii a and b at axial distance d.
double coaxial_mi(double a, double b, double d, double mu = 1.0);
// dM/db of the same configuration.
double coaxial_mi_db(double a, double b, double d, double mu = 1.0);

// Projection of control-point sensitivities on a uniform radial scaling about
// `center`: sum_m d_m . (P_m - center) / b.
double radial_sensitivity(const CoilCurve& curve, std::span<const Vec3> d, const Vec3& center,
                          double b);

// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h.
std::vector<double> finite_difference_gradient(
    const std::function<double(const std::vector<double>&)>& f, const std::vector<double>& x,
    double h);

// Fourth-order central differences
//   (f(x - 2h e_i) - 8 f(x - h e_i) + 8 f(x + h e_i) - f(x + 2h e_i)) / 12h.
// The higher order allows a larger h, which keeps rounding noise in f below
// the absolute floor used by the gradient checks.
std::vector<double> finite_difference_gradient4(
    const std::function<double(const std::vector<double>&)>& f, const std::vector<double>& x,
    double h);

// length(a) - length(b) for two curves on the same basis, summed node by node
// as (|v_a|^2 - |v_b|^2) / (|v_a| + |v_b|). Nodes where the curves agree
// contribute exactly zero, so finite differences of this quantity do not
// carry the rounding noise of the full length.
double length_difference(const CoilCurve& a, const CoilCurve& b, const QuadratureRule& rule);

// Largest componentwise |a_i - b_i| / max(|a_i|, |b_i|); components whose
// absolute difference is at most `abs_floor` count as exact.
double max_relative_error(std::span<const double> a, std::span<const double> b,
                          double abs_floor = 1e-12);

// Neumann integral over two polylines through `segments` uniform samples of
// each realized curve, one midpoint kernel evaluation per segment pair.
double polyline_mutual_inductance(const CoilCurve& c, const CoilCurve& cp, int segments,
                                  double mu = 1.0);

// Biot-Savart with the same polyline discretization.
Vec3 polyline_magnetic_field(const CoilCurve& coil, double current, const Vec3& x, int segments,
                             double mu = 1.0);

}  // namespace coilopt::oracle

#endif  // COILOPT_ORACLE_H_
