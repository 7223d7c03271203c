#ifndef COILOPT_EM_REFERENCE_H_
#define COILOPT_EM_REFERENCE_H_

#include <vector>

#include "coilopt/curve.h"
#include "coilopt/quadrature.h"
#include "coilopt/vec3.h"

// Serial reference implementations of the em kernels. They evaluate the curve
// and the basis functions directly at each node (no caches, no tables, no
// threads) and walk the sums in the order the formulas are written. Used by the
// tests and the benchmark to check the parallel kernels.
namespace coilopt::reference {

Vec3 magnetic_field(const CoilCurve& coil, double current, const Vec3& x, const QuadratureRule& rule,
                    double mu);

double mutual_inductance(const CoilCurve& c, const CoilCurve& cp, const QuadratureRule& rule,
                         double mu);

// d_m = dM/dP_m of `c`, summed over the support intervals of each R_m.
std::vector<Vec3> mi_sensitivity(const CoilCurve& c, const CoilCurve& cp,
                                 const QuadratureRule& rule, double mu);

// m_{a,b} entry by entry.
double mi_coefficient(const CoilCurve& c, const CoilCurve& cp, int a, int b,
                      const QuadratureRule& rule, double mu);

}  // namespace coilopt::reference

#endif  // COILOPT_EM_REFERENCE_H_
