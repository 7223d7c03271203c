#ifndef COILOPT_OBJECTIVE_H_
#define COILOPT_OBJECTIVE_H_

#include <span>
#include <vector>

#include "coilopt/scene.h"
#include "coilopt/vec3.h"

namespace coilopt {

// Design vector layout: designable coils in scene order. A free coil
// contributes (x, y, z) of each control point in index order; a radially
// coupled coil contributes its radius b.
int design_size(const Scene& scene);
// Offset of coil `coil` in the design vector, or -1 for a frozen coil.
int design_offset(const Scene& scene, int coil);

std::vector<double> pack(const Scene& scene);
// Writes x into the designable coils. Throws InvalidArgument on size mismatch.
void unpack(Scene& scene, std::span<const double> x);
// Copy of the coil curves with x applied; the scene itself is untouched.
std::vector<CoilCurve> realize(const Scene& scene, std::span<const double> x);

// Chain rule from per-control-point gradients of coil `coil` into its slots
// of `out` (accumulating). No-op for frozen coils.
void scatter_gradient(const Scene& scene, int coil, std::span<const Vec3> g,
                      std::span<double> out);

// J = 1/2 sum_k (M_k - target_k)^2 over the pairs of the scene.
double objective(const Scene& scene, std::span<const double> x);
std::vector<double> objective_gradient(const Scene& scene, std::span<const double> x);

struct ObjectiveEvaluation {
  double value = 0.0;
  std::vector<double> gradient;
  std::vector<double> mutual_inductances;  // one per pair
};
ObjectiveEvaluation evaluate_objective(const Scene& scene, std::span<const double> x);

// M of every pair, in pair order.
std::vector<double> pair_mutual_inductances(const Scene& scene, std::span<const double> x);

}  // namespace coilopt

#endif  // COILOPT_OBJECTIVE_H_
