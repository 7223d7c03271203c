#include "coilopt/problem.h"

#include <algorithm>

#include "coilopt/constraints.h"
#include "coilopt/objective.h"

namespace coilopt {

NlpProblem make_problem(const Scene& scene, bool maximize) {
  validate_for_optimization(scene);
  NlpProblem p;
  p.dimension = design_size(scene);
  p.num_constraints = 2 * static_cast<int>(scene.length_constraints.size());
  const double sign = maximize ? -1.0 : 1.0;

  p.objective = [&scene, sign](std::span<const double> x, std::span<double> grad) {
    if (grad.empty()) {
      return sign * objective(scene, x);
    }
    const ObjectiveEvaluation e = evaluate_objective(scene, x);
    for (std::size_t i = 0; i < grad.size(); ++i) {
      grad[i] = sign * e.gradient[i];
    }
    return sign * e.value;
  };
  p.constraints = [&scene](std::span<const double> x, std::span<double> values,
                           std::span<double> jacobian) {
    const std::vector<double> g = length_constraints(scene, x);
    std::copy(g.begin(), g.end(), values.begin());
    if (!jacobian.empty()) {
      const std::vector<std::vector<double>> rows = length_constraint_gradients(scene, x);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        std::copy(rows[i].begin(), rows[i].end(), jacobian.begin() + i * x.size());
      }
    }
  };

  DesignBounds bounds = bound_vectors(scene);
  p.lower = std::move(bounds.lower);
  p.upper = std::move(bounds.upper);

  std::vector<int> designable;
  for (int c = 0; c < static_cast<int>(scene.coils.size()); ++c) {
    if (scene.coils[c].designable) {
      designable.push_back(c);
      p.monitor_names.push_back("length_" + scene.coils[c].label());
    }
  }
  p.monitor = [&scene, designable](std::span<const double> x) {
    const std::vector<double> all = coil_lengths(scene, x);
    std::vector<double> out;
    for (int c : designable) {
      out.push_back(all[c]);
    }
    return out;
  };
  return p;
}

}  // namespace coilopt
