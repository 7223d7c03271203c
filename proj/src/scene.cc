#include "coilopt/scene.h"

#include <cmath>
#include <set>
#include <string>

#include "coilopt/errors.h"

namespace coilopt {

namespace {

std::string coil_name(const Scene& scene, int index) {
  return "coil " + std::to_string(index) + " ('" + scene.coils[index].label() + "')";
}

void check_coil_index(const Scene& scene, int index, const std::string& where) {
  if (index < 0 || index >= static_cast<int>(scene.coils.size())) {
    throw SceneError(where + ": coil index " + std::to_string(index) + " out of range");
  }
}

void check_bounds(const Scene& scene, const BoundSpec& spec, const std::string& where) {
  check_coil_index(scene, spec.coil, where);
  const SceneCoil& coil = scene.coils[spec.coil];
  if (!coil.designable) {
    throw SceneError(where + ": " + coil_name(scene, spec.coil) + " is not designable");
  }
  if (coil.coupling == Coupling::kRadial) {
    if (!(spec.radius_lower <= coil.radius && coil.radius <= spec.radius_upper)) {
      throw SceneError(where + ": radius window does not contain the initial radius");
    }
    return;
  }
  const auto n = static_cast<std::size_t>(coil.curve.count());
  if (spec.lower.size() != n || spec.upper.size() != n) {
    throw SceneError(where + ": expected " + std::to_string(n) + " lower/upper offsets");
  }
  for (std::size_t m = 0; m < n; ++m) {
    for (int c = 0; c < 3; ++c) {
      const double lo = spec.lower[m][c];
      const double hi = spec.upper[m][c];
      if (std::isnan(lo) || std::isnan(hi) || lo > hi) {
        throw SceneError(where + ": lower offset exceeds upper offset at control point " +
                         std::to_string(m));
      }
      if (lo > 0.0 || hi < 0.0) {
        throw SceneError(where + ": initial position infeasible at control point " +
                         std::to_string(m));
      }
    }
  }
}

}  // namespace

std::optional<int> Scene::find_coil(const std::string& label) const {
  for (std::size_t i = 0; i < coils.size(); ++i) {
    if (coils[i].label() == label) {
      return static_cast<int>(i);
    }
  }
  return std::nullopt;
}

const BoundSpec* Scene::bounds_for(int coil) const {
  for (const BoundSpec& b : bounds) {
    if (b.coil == coil) {
      return &b;
    }
  }
  return nullptr;
}

SceneCoil make_scene_coil(CoilCurve curve, bool designable, double current) {
  SceneCoil coil{std::move(curve), {}, false, 0.0, Coupling::kFree, {}, 0.0, 0.0};
  coil.initial_control_points = coil.curve.control_points();
  coil.designable = designable;
  coil.current = current;
  return coil;
}

void finalize(Scene& scene) {
  if (!(scene.mu > 0.0) || !std::isfinite(scene.mu)) {
    throw SceneError("mu must be positive");
  }
  if (scene.quadrature_order < 1 || scene.quadrature_order > kMaxQuadratureOrder) {
    throw SceneError("quadrature order must be in [1, " + std::to_string(kMaxQuadratureOrder) + "]");
  }
  scene.rule = gauss_legendre(scene.quadrature_order);

  std::set<std::string> labels;
  for (std::size_t i = 0; i < scene.coils.size(); ++i) {
    SceneCoil& coil = scene.coils[i];
    if (coil.label().empty()) {
      throw SceneError("coil " + std::to_string(i) + " has no label");
    }
    if (!labels.insert(coil.label()).second) {
      throw SceneError("duplicate coil label '" + coil.label() + "'");
    }
    if (coil.initial_control_points.empty()) {
      coil.initial_control_points = coil.curve.control_points();
    }
    if (static_cast<int>(coil.initial_control_points.size()) != coil.curve.count()) {
      throw SceneError(coil_name(scene, static_cast<int>(i)) +
                       ": initial control point count mismatch");
    }
    if (coil.coupling == Coupling::kRadial) {
      if (!(coil.initial_radius > 0.0)) {
        throw SceneError(coil_name(scene, static_cast<int>(i)) +
                         ": radial coupling needs a positive radius");
      }
      if (!(coil.radius > 0.0)) {
        coil.radius = coil.initial_radius;
      }
    }
  }

  for (std::size_t k = 0; k < scene.pairs.size(); ++k) {
    const PairSpec& pair = scene.pairs[k];
    const std::string where = "pair " + std::to_string(k);
    check_coil_index(scene, pair.alpha, where);
    check_coil_index(scene, pair.beta, where);
    if (pair.alpha == pair.beta) {
      throw SceneError(where + ": alpha and beta must differ");
    }
    if (!std::isfinite(pair.target)) {
      throw SceneError(where + ": target must be finite");
    }
  }

  std::set<int> bounded;
  for (std::size_t k = 0; k < scene.bounds.size(); ++k) {
    const std::string where = "bounds " + std::to_string(k);
    check_bounds(scene, scene.bounds[k], where);
    if (!bounded.insert(scene.bounds[k].coil).second) {
      throw SceneError(where + ": coil already has bounds");
    }
  }

  for (std::size_t k = 0; k < scene.length_constraints.size(); ++k) {
    LengthSpec& spec = scene.length_constraints[k];
    const std::string where = "length constraint " + std::to_string(k);
    check_coil_index(scene, spec.coil, where);
    if (!(spec.f_lower > 0.0 && spec.f_lower <= 1.0 && spec.f_upper >= 1.0) ||
        !std::isfinite(spec.f_upper)) {
      throw SceneError(where + ": need 0 < f_lower <= 1 <= f_upper");
    }
    if (!(spec.initial_length > 0.0)) {
      spec.initial_length = length(scene.coils[spec.coil].curve, scene.rule);
    }
  }

  if (scene.solver.max_iters < 1 || !(scene.solver.rel_tol_J > 0.0)) {
    throw SceneError("solver: need max_iters >= 1 and rel_tol > 0");
  }
}

void validate_for_optimization(const Scene& scene) {
  bool any = false;
  for (const SceneCoil& coil : scene.coils) {
    any = any || coil.designable;
  }
  if (!any) {
    throw SceneError("no designable coil: the design vector is empty");
  }
  if (scene.pairs.empty()) {
    throw SceneError("no coil pairs: the objective is empty");
  }
}

}  // namespace coilopt
