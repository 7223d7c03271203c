#ifndef COILOPT_CONSTRAINTS_H_
#define COILOPT_CONSTRAINTS_H_

#include <span>
#include <vector>

#include "coilopt/scene.h"

namespace coilopt {

struct DesignBounds {
  std::vector<double> lower;
  std::vector<double> upper;
};

// Absolute bounds in the design layout: initial position plus offset for free
// coils, the radius window for radial coils. Missing limits are +-kUnbounded.
DesignBounds bound_vectors(const Scene& scene);

// Per length spec, in order: g_lower = f_lower l0 - l, g_upper = l - f_upper l0.
// Both are <= 0 exactly when the length is inside the window.
std::vector<double> length_constraints(const Scene& scene, std::span<const double> x);

// Gradients of the values above, one design-shaped vector per constraint.
// Throws DegenerateVelocity when a constrained coil has a stationary point.
std::vector<std::vector<double>> length_constraint_gradients(const Scene& scene,
                                                             std::span<const double> x);

// Current length of every coil.
std::vector<double> coil_lengths(const Scene& scene, std::span<const double> x);

}  // namespace coilopt

#endif  // COILOPT_CONSTRAINTS_H_
