#include "coilopt/objective.h"

#include <string>

#include "coilopt/em.h"
#include "coilopt/errors.h"

namespace coilopt {

namespace {

int coil_slots(const SceneCoil& coil) {
  if (!coil.designable) {
    return 0;
  }
  return coil.coupling == Coupling::kRadial ? 1 : 3 * coil.curve.count();
}

std::vector<Vec3> radial_points(const SceneCoil& coil, double b) {
  std::vector<Vec3> cps(coil.initial_control_points.size());
  const double scale = b / coil.initial_radius;
  for (std::size_t m = 0; m < cps.size(); ++m) {
    cps[m] = coil.radial_center + scale * (coil.initial_control_points[m] - coil.radial_center);
  }
  return cps;
}

void check_size(const Scene& scene, std::span<const double> x) {
  const int expected = design_size(scene);
  if (static_cast<int>(x.size()) != expected) {
    throw InvalidArgument("design vector has " + std::to_string(x.size()) +
                          " entries, scene expects " + std::to_string(expected));
  }
}

std::vector<Vec3> coil_points(const SceneCoil& coil, std::span<const double> slots) {
  if (coil.coupling == Coupling::kRadial) {
    return radial_points(coil, slots[0]);
  }
  std::vector<Vec3> cps(coil.curve.count());
  for (std::size_t m = 0; m < cps.size(); ++m) {
    cps[m] = {slots[3 * m], slots[3 * m + 1], slots[3 * m + 2]};
  }
  return cps;
}

}  // namespace

int design_size(const Scene& scene) {
  int total = 0;
  for (const SceneCoil& coil : scene.coils) {
    total += coil_slots(coil);
  }
  return total;
}

int design_offset(const Scene& scene, int coil) {
  if (!scene.coils.at(coil).designable) {
    return -1;
  }
  int offset = 0;
  for (int i = 0; i < coil; ++i) {
    offset += coil_slots(scene.coils[i]);
  }
  return offset;
}

std::vector<double> pack(const Scene& scene) {
  std::vector<double> x;
  x.reserve(design_size(scene));
  for (const SceneCoil& coil : scene.coils) {
    if (!coil.designable) {
      continue;
    }
    if (coil.coupling == Coupling::kRadial) {
      x.push_back(coil.radius);
      continue;
    }
    for (const Vec3& p : coil.curve.control_points()) {
      x.push_back(p.x);
      x.push_back(p.y);
      x.push_back(p.z);
    }
  }
  return x;
}

void unpack(Scene& scene, std::span<const double> x) {
  check_size(scene, x);
  std::size_t offset = 0;
  for (SceneCoil& coil : scene.coils) {
    const int slots = coil_slots(coil);
    if (slots == 0) {
      continue;
    }
    const auto part = x.subspan(offset, slots);
    coil.curve.set_control_points(coil_points(coil, part));
    if (coil.coupling == Coupling::kRadial) {
      coil.radius = part[0];
    }
    offset += slots;
  }
}

std::vector<CoilCurve> realize(const Scene& scene, std::span<const double> x) {
  check_size(scene, x);
  std::vector<CoilCurve> curves;
  curves.reserve(scene.coils.size());
  std::size_t offset = 0;
  for (const SceneCoil& coil : scene.coils) {
    curves.push_back(coil.curve);
    const int slots = coil_slots(coil);
    if (slots > 0) {
      curves.back().set_control_points(coil_points(coil, x.subspan(offset, slots)));
      offset += slots;
    }
  }
  return curves;
}

void scatter_gradient(const Scene& scene, int coil, std::span<const Vec3> g,
                      std::span<double> out) {
  const int offset = design_offset(scene, coil);
  if (offset < 0) {
    return;
  }
  const SceneCoil& c = scene.coils[coil];
  if (c.coupling == Coupling::kRadial) {
    // dP_m/db = (P0_m - o) / b0
    double acc = 0.0;
    for (std::size_t m = 0; m < g.size(); ++m) {
      acc += dot(g[m], c.initial_control_points[m] - c.radial_center);
    }
    out[offset] += acc / c.initial_radius;
    return;
  }
  for (std::size_t m = 0; m < g.size(); ++m) {
    out[offset + 3 * m] += g[m].x;
    out[offset + 3 * m + 1] += g[m].y;
    out[offset + 3 * m + 2] += g[m].z;
  }
}

std::vector<double> pair_mutual_inductances(const Scene& scene, std::span<const double> x) {
  const std::vector<CoilCurve> curves = realize(scene, x);
  std::vector<DiscreteCoil> disc;
  disc.reserve(curves.size());
  for (const CoilCurve& c : curves) {
    disc.push_back(discretize(c, scene.rule));
  }
  std::vector<double> out;
  out.reserve(scene.pairs.size());
  for (const PairSpec& pair : scene.pairs) {
    out.push_back(mutual_inductance(disc[pair.alpha], disc[pair.beta], scene.mu));
  }
  return out;
}

double objective(const Scene& scene, std::span<const double> x) {
  const std::vector<double> mi = pair_mutual_inductances(scene, x);
  double j = 0.0;
  for (std::size_t k = 0; k < mi.size(); ++k) {
    const double r = mi[k] - scene.pairs[k].target;
    j += 0.5 * r * r;
  }
  return j;
}

ObjectiveEvaluation evaluate_objective(const Scene& scene, std::span<const double> x) {
  const std::vector<CoilCurve> curves = realize(scene, x);
  std::vector<DiscreteCoil> disc;
  disc.reserve(curves.size());
  for (const CoilCurve& c : curves) {
    disc.push_back(discretize(c, scene.rule));
  }
  ObjectiveEvaluation out;
  out.gradient.assign(x.size(), 0.0);
  for (const PairSpec& pair : scene.pairs) {
    const bool alpha_free = scene.coils[pair.alpha].designable;
    const bool beta_free = scene.coils[pair.beta].designable;
    const DiscreteCoil& a = disc[pair.alpha];
    const DiscreteCoil& b = disc[pair.beta];

    OneSidedSensitivity sa;
    double mi = 0.0;
    if (alpha_free) {
      sa = mi_sensitivity_of(a, b, scene.mu);
      mi = sa.mutual_inductance;
    } else {
      mi = mutual_inductance(a, b, scene.mu);
    }
    const double residual = mi - pair.target;
    out.value += 0.5 * residual * residual;
    out.mutual_inductances.push_back(mi);

    if (alpha_free) {
      for (Vec3& d : sa.d) {
        d *= residual;
      }
      scatter_gradient(scene, pair.alpha, sa.d, out.gradient);
    }
    if (beta_free) {
      OneSidedSensitivity sb = mi_sensitivity_of(b, a, scene.mu);
      for (Vec3& d : sb.d) {
        d *= residual;
      }
      scatter_gradient(scene, pair.beta, sb.d, out.gradient);
    }
  }
  return out;
}

std::vector<double> objective_gradient(const Scene& scene, std::span<const double> x) {
  return evaluate_objective(scene, x).gradient;
}

}  // namespace coilopt
