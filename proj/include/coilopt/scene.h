#ifndef COILOPT_SCENE_H_
#define COILOPT_SCENE_H_

#include <optional>
#include <string>
#include <vector>

#include "coilopt/curve.h"
#include "coilopt/quadrature.h"
#include "coilopt/solver.h"
#include "coilopt/vec3.h"

namespace coilopt {

// Unbounded design-variable limits are stored as +-kUnbounded.
inline constexpr double kUnbounded = 1e19;

// How a designable coil's control points map to design variables.
enum class Coupling {
  kFree,    // three variables per control point
  kRadial,  // one variable: the radius b, P_m = o + (b / b0) (P0_m - o)
};

struct SceneCoil {
  CoilCurve curve;
  std::vector<Vec3> initial_control_points;
  bool designable = false;
  double current = 0.0;  // amperes; only used for field export
  Coupling coupling = Coupling::kFree;
  Vec3 radial_center;
  double initial_radius = 0.0;
  double radius = 0.0;

  const std::string& label() const { return curve.label(); }
};

// One measured pair of the objective: M between coils alpha and beta should reach `target`.
struct PairSpec {
  int alpha = 0;
  int beta = 0;
  double target = 0.0;
};

// Per-control-point offsets L_m <= P_m - P0_m <= U_m of one free coil, or the
// absolute radius window of a radial coil.
struct BoundSpec {
  int coil = 0;
  std::vector<Vec3> lower;
  std::vector<Vec3> upper;
  double radius_lower = -kUnbounded;
  double radius_upper = kUnbounded;
};

// f_lower * l0 <= length <= f_upper * l0, with l0 the length at load time.
struct LengthSpec {
  int coil = 0;
  double f_lower = 1.0;
  double f_upper = 1.0;
  double initial_length = 0.0;
};

struct Scene {
  double mu = 1.0;
  int quadrature_order = kDefaultQuadratureOrder;
  QuadratureRule rule;
  std::vector<SceneCoil> coils;
  std::vector<PairSpec> pairs;
  std::vector<BoundSpec> bounds;
  std::vector<LengthSpec> length_constraints;
  SolverConfig solver;

  // Index of the coil with this label, or nullopt.
  std::optional<int> find_coil(const std::string& label) const;
  const BoundSpec* bounds_for(int coil) const;
};

// Builds the quadrature rule, fills missing initial lengths and validates
// (unique labels, pair indices, bound and length windows contain the start).
void finalize(Scene& scene);

// Additional checks before an optimization run: at least one designable coil
// and at least one pair.
void validate_for_optimization(const Scene& scene);

SceneCoil make_scene_coil(CoilCurve curve, bool designable, double current = 0.0);

}  // namespace coilopt

#endif  // COILOPT_SCENE_H_
