#ifndef COILOPT_QP_H_
#define COILOPT_QP_H_

#include <Eigen/Dense>
#include <vector>

namespace coilopt {

// Strictly convex QP with inequality constraints:
//   minimize 0.5 x' G x + g' x   s.t.  C' x + c >= 0   (one column of C per constraint)
struct QpProblem {
  Eigen::MatrixXd G;
  Eigen::VectorXd g;
  Eigen::MatrixXd C;
  Eigen::VectorXd c;
};

struct QpSolution {
  bool feasible = false;
  Eigen::VectorXd x;
  Eigen::VectorXd multipliers;  // one per constraint, zero when inactive
  double objective = 0.0;
  int iterations = 0;
};

// Goldfarb-Idnani dual active-set method: starts from the unconstrained
// minimizer and adds the most violated constraint each step, keeping the dual
// feasible. Works on an upper-triangular R and an orthogonal-times-inverse-
// Cholesky factor J, updated with Givens rotations. G must be positive definite.
QpSolution solve_qp(const QpProblem& problem);

}  // namespace coilopt

#endif  // COILOPT_QP_H_
