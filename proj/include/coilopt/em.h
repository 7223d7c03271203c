#ifndef COILOPT_EM_H_
#define COILOPT_EM_H_

#include <string>
#include <vector>

#include "coilopt/curve.h"
#include "coilopt/quadrature.h"
#include "coilopt/vec3.h"

namespace coilopt {

// Magnetostatics of thin-wire coils. All integrals use the fixed per-interval
// Gauss-Legendre rule (tensor product for the double contour integrals).
//
// The interval-pair loops run under OpenMP. Each thread owns whole intervals of
// the first coil and writes one partial sum per interval; partials are then
// added in interval order, so results do not depend on the thread count.
// A serial, table-free implementation lives in em_reference.h for testing.

inline constexpr double kDefaultPermeability = 1.0;

// Relative near-singularity guard: coils (or a point and a coil) closer than
// this times the largest bounding-box diagonal raise NearSingular.
inline constexpr double kNearSingularFactor = 1e-6;

// A curve together with its basis table and quadrature-node geometry.
struct DiscreteCoil {
  const CoilCurve* curve = nullptr;
  BasisTable table;
  CurveSamples samples;
  double diagonal = 0.0;
};

DiscreteCoil discretize(const CoilCurve& curve, const QuadratureRule& rule);

// m_{a,b}: M = sum_{a,b} m_{a,b} P_a . P'_b.
struct MICoefficients {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;  // row-major rows x cols
  std::string label;
  std::string label_prime;

  double operator()(int a, int b) const { return values[static_cast<std::size_t>(a) * cols + b]; }
  // sum_{a,b} m_{a,b} P_a . P'_b
  double contract(const std::vector<Vec3>& cps, const std::vector<Vec3>& cps_prime) const;
};

// dM/dP_m for the first coil (d) and dM/dP'_n for the second (d_prime), in H/m.
struct SensitivitySet {
  double mutual_inductance = 0.0;
  std::vector<Vec3> d;
  std::vector<Vec3> d_prime;
};

// Sensitivities of one coil only, plus M (computed on the same pass).
struct OneSidedSensitivity {
  double mutual_inductance = 0.0;
  std::vector<Vec3> d;
};

// Biot-Savart field (tesla) of `coil` carrying `current` at x.
Vec3 magnetic_field(const CoilCurve& coil, double current, const Vec3& x, const QuadratureRule& rule,
                    double mu = kDefaultPermeability);
Vec3 magnetic_field(const DiscreteCoil& coil, double current, const Vec3& x,
                    double mu = kDefaultPermeability);

Vec3 vector_potential(const CoilCurve& coil, double current, const Vec3& x,
                      const QuadratureRule& rule, double mu = kDefaultPermeability);
Vec3 vector_potential(const DiscreteCoil& coil, double current, const Vec3& x,
                      double mu = kDefaultPermeability);

// Neumann formula over all N x N' interval pairs.
double mutual_inductance(const CoilCurve& c, const CoilCurve& cp, const QuadratureRule& rule,
                         double mu = kDefaultPermeability);
double mutual_inductance(const DiscreteCoil& c, const DiscreteCoil& cp,
                         double mu = kDefaultPermeability);

MICoefficients mi_coefficients(const CoilCurve& c, const CoilCurve& cp, const QuadratureRule& rule,
                               double mu = kDefaultPermeability);

SensitivitySet mi_sensitivity(const CoilCurve& c, const CoilCurve& cp, const QuadratureRule& rule,
                              double mu = kDefaultPermeability);

// d_m of `c` against `other`. Swapping the arguments yields d'_n of the pair.
OneSidedSensitivity mi_sensitivity_of(const DiscreteCoil& c, const DiscreteCoil& other,
                                      double mu = kDefaultPermeability);

// Contour integral of A . ds along `receiver` for the field of `source` (current I).
double flux_through(const CoilCurve& receiver, const CoilCurve& source, double current,
                    const QuadratureRule& rule, double mu = kDefaultPermeability);

// Thread control for the kernels (no-ops without OpenMP).
int max_threads();
void set_threads(int threads);

}  // namespace coilopt

#endif  // COILOPT_EM_H_
