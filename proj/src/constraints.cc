#include "coilopt/constraints.h"

#include "coilopt/objective.h"

namespace coilopt {

namespace {

double offset_bound(double base, double offset) {
  if (offset <= -kUnbounded) {
    return -kUnbounded;
  }
  if (offset >= kUnbounded) {
    return kUnbounded;
  }
  return base + offset;
}

}  // namespace

DesignBounds bound_vectors(const Scene& scene) {
  DesignBounds out;
  const int n = design_size(scene);
  out.lower.assign(n, -kUnbounded);
  out.upper.assign(n, kUnbounded);
  for (int c = 0; c < static_cast<int>(scene.coils.size()); ++c) {
    const int offset = design_offset(scene, c);
    const BoundSpec* spec = scene.bounds_for(c);
    if (offset < 0 || spec == nullptr) {
      continue;
    }
    const SceneCoil& coil = scene.coils[c];
    if (coil.coupling == Coupling::kRadial) {
      out.lower[offset] = spec->radius_lower;
      out.upper[offset] = spec->radius_upper;
      continue;
    }
    for (int m = 0; m < coil.curve.count(); ++m) {
      for (int k = 0; k < 3; ++k) {
        const double base = coil.initial_control_points[m][k];
        out.lower[offset + 3 * m + k] = offset_bound(base, spec->lower[m][k]);
        out.upper[offset + 3 * m + k] = offset_bound(base, spec->upper[m][k]);
      }
    }
  }
  return out;
}

std::vector<double> length_constraints(const Scene& scene, std::span<const double> x) {
  const std::vector<CoilCurve> curves = realize(scene, x);
  std::vector<double> out;
  out.reserve(2 * scene.length_constraints.size());
  for (const LengthSpec& spec : scene.length_constraints) {
    const double l = length(curves[spec.coil], scene.rule);
    out.push_back(-l + spec.f_lower * spec.initial_length);
    out.push_back(l - spec.f_upper * spec.initial_length);
  }
  return out;
}

std::vector<std::vector<double>> length_constraint_gradients(const Scene& scene,
                                                             std::span<const double> x) {
  const std::vector<CoilCurve> curves = realize(scene, x);
  std::vector<std::vector<double>> out;
  out.reserve(2 * scene.length_constraints.size());
  for (const LengthSpec& spec : scene.length_constraints) {
    std::vector<double> upper(x.size(), 0.0);
    scatter_gradient(scene, spec.coil, length_gradient(curves[spec.coil], scene.rule), upper);
    std::vector<double> lower(upper);
    for (double& v : lower) {
      v = -v;
    }
    out.push_back(std::move(lower));
    out.push_back(std::move(upper));
  }
  return out;
}

std::vector<double> coil_lengths(const Scene& scene, std::span<const double> x) {
  const std::vector<CoilCurve> curves = realize(scene, x);
  std::vector<double> out;
  out.reserve(curves.size());
  for (const CoilCurve& c : curves) {
    out.push_back(length(c, scene.rule));
  }
  return out;
}

}  // namespace coilopt
