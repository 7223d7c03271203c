#ifndef COILOPT_SOLVER_H_
#define COILOPT_SOLVER_H_

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace coilopt {

// Sequential quadratic programming for
//   minimize f(x)  s.t.  g_i(x) <= 0,  lower <= x <= upper.
//
// Each iteration solves a strictly convex QP built from a damped-BFGS model of
// the Lagrangian Hessian and the linearized constraints (dual active-set
// method, see qp.h), then backtracks on the L1 merit function
//   f(x) + sum_i rho_i max(0, g_i(x)).
// Bounds enter the QP as simple constraints on the step, so every accepted
// iterate lies inside the box. Variables with lower == upper are held fixed.

struct NlpProblem {
  int dimension = 0;
  int num_constraints = 0;
  // Returns f(x); fills `grad` (size dimension) unless it is empty.
  std::function<double(std::span<const double> x, std::span<double> grad)> objective;
  // Fills `values` (size num_constraints) and, unless empty, the row-major
  // num_constraints x dimension Jacobian.
  std::function<void(std::span<const double> x, std::span<double> values,
                     std::span<double> jacobian)>
      constraints;
  std::vector<double> lower;
  std::vector<double> upper;
  // Optional extra per-iterate columns for the trace (e.g. coil lengths).
  std::function<std::vector<double>(std::span<const double> x)> monitor;
  std::vector<std::string> monitor_names;
};

struct SolverConfig {
  double rel_tol_J = 1e-5;
  int max_iters = 1000;
  double constraint_tol = 1e-8;
  // Armijo constant and backtracking limits of the merit line search.
  double armijo = 1e-4;
  double min_step = 1e-12;
  int max_backtracks = 40;
  // BFGS is reset to a scaled identity when y.s <= reset_curvature |y| |s|.
  double reset_curvature = 1e-12;
  // Powell damping threshold on s.y / s.Bs.
  double damping = 0.2;
};

enum class SolverStatus {
  kConverged,
  kMaxIters,
  kSolverFailure,
};

const char* to_string(SolverStatus status);

struct TraceRecord {
  int iteration = 0;
  double objective = 0.0;
  double max_violation = 0.0;
  double step_norm = 0.0;
  std::vector<double> extras;
};

struct OptimizationTrace {
  std::vector<TraceRecord> records;
  std::vector<std::string> extra_names;
  SolverStatus status = SolverStatus::kSolverFailure;
  std::vector<std::string> notes;

  // CSV with header iter,J,max_violation,<extras>,step_norm.
  void write_csv(std::ostream& out) const;
};

struct SolverResult {
  std::vector<double> x;
  OptimizationTrace trace;
};

// x0 outside the bounds is clamped (and noted in the trace). Errors while
// evaluating x0 propagate; later NumericalErrors end the run as kSolverFailure.
SolverResult minimize(const NlpProblem& problem, std::span<const double> x0,
                      const SolverConfig& config = {});

}  // namespace coilopt

#endif  // COILOPT_SOLVER_H_
