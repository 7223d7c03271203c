#ifndef COILOPT_PROBLEM_H_
#define COILOPT_PROBLEM_H_

#include "coilopt/scene.h"
#include "coilopt/solver.h"

namespace coilopt {

// NLP for a scene: objective J (or -J when `maximize`), the length
// constraints and the design bounds. The trace monitor records the length of
// every designable coil as `length_<label>`. The scene must outlive the problem.
NlpProblem make_problem(const Scene& scene, bool maximize = false);

}  // namespace coilopt

#endif  // COILOPT_PROBLEM_H_
