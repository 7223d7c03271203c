#include "coilopt/solver.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "coilopt/errors.h"
#include "coilopt/qp.h"

namespace coilopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Bounds at or beyond this magnitude are treated as absent.
constexpr double kInactiveBound = 1e18;
constexpr double kRelaxation[] = {1.0, 0.5, 0.1, 0.0};

struct Point {
  std::vector<double> x;
  double f = 0.0;
  std::vector<double> grad;
  std::vector<double> g;
  std::vector<double> jac;  // row-major m x n
};

double max_violation(const std::vector<double>& g) {
  double v = 0.0;
  for (double gi : g) {
    v = std::max(v, gi);
  }
  return v;
}

void evaluate_full(const NlpProblem& problem, Point& p) {
  const int n = problem.dimension;
  const int m = problem.num_constraints;
  p.grad.assign(n, 0.0);
  p.f = problem.objective(p.x, p.grad);
  p.g.assign(m, 0.0);
  p.jac.assign(static_cast<std::size_t>(m) * n, 0.0);
  if (m > 0) {
    problem.constraints(p.x, p.g, p.jac);
  }
}

// Merit value at x, or +inf when the callbacks fail there.
double merit_at(const NlpProblem& problem, const std::vector<double>& x,
                const std::vector<double>& rho, double* f_out, std::vector<double>* g_out) {
  try {
    const double f = problem.objective(x, {});
    std::vector<double> g(problem.num_constraints, 0.0);
    if (problem.num_constraints > 0) {
      problem.constraints(x, g, {});
    }
    double phi = f;
    for (std::size_t i = 0; i < g.size(); ++i) {
      phi += rho[i] * std::max(0.0, g[i]);
    }
    if (!std::isfinite(phi)) {
      return kInf;
    }
    *f_out = f;
    *g_out = std::move(g);
    return phi;
  } catch (const NumericalError&) {
    return kInf;
  }
}

}  // namespace

const char* to_string(SolverStatus status) {
  switch (status) {
    case SolverStatus::kConverged:
      return "Converged";
    case SolverStatus::kMaxIters:
      return "MaxIters";
    case SolverStatus::kSolverFailure:
      return "SolverFailure";
  }
  return "Unknown";
}

void OptimizationTrace::write_csv(std::ostream& out) const {
  const auto precision = out.precision(17);
  out << "iter,J,max_violation";
  for (const auto& name : extra_names) {
    out << ',' << name;
  }
  out << ",step_norm\n";
  for (const auto& r : records) {
    out << r.iteration << ',' << r.objective << ',' << r.max_violation;
    for (double e : r.extras) {
      out << ',' << e;
    }
    out << ',' << r.step_norm << '\n';
  }
  out.precision(precision);
}

SolverResult minimize(const NlpProblem& problem, std::span<const double> x0,
                      const SolverConfig& config) {
  const int n = problem.dimension;
  const int m = problem.num_constraints;
  if (n < 0 || m < 0 || static_cast<int>(x0.size()) != n) {
    throw InvalidArgument("minimize: x0 does not match the problem dimension");
  }
  if (!problem.objective || (m > 0 && !problem.constraints)) {
    throw InvalidArgument("minimize: missing callback");
  }
  if (!(config.rel_tol_J > 0.0) || config.max_iters < 1) {
    throw InvalidArgument("minimize: rel_tol_J must be positive and max_iters >= 1");
  }
  std::vector<double> lower = problem.lower;
  std::vector<double> upper = problem.upper;
  if (lower.empty()) {
    lower.assign(n, -kInf);
  }
  if (upper.empty()) {
    upper.assign(n, kInf);
  }
  if (static_cast<int>(lower.size()) != n || static_cast<int>(upper.size()) != n) {
    throw InvalidArgument("minimize: bound vectors do not match the problem dimension");
  }
  for (int j = 0; j < n; ++j) {
    if (!(lower[j] <= upper[j])) {
      throw InvalidArgument("minimize: lower bound exceeds upper bound at index " +
                            std::to_string(j));
    }
  }

  SolverResult result;
  OptimizationTrace& trace = result.trace;
  trace.extra_names = problem.monitor_names;

  Point cur;
  cur.x.assign(x0.begin(), x0.end());
  bool clamped = false;
  for (int j = 0; j < n; ++j) {
    const double c = std::clamp(cur.x[j], lower[j], upper[j]);
    clamped = clamped || c != cur.x[j];
    cur.x[j] = c;
  }
  if (clamped) {
    trace.notes.push_back("x0 clamped into the bounds");
  }

  std::vector<int> free_idx;
  for (int j = 0; j < n; ++j) {
    if (upper[j] > lower[j]) {
      free_idx.push_back(j);
    }
  }
  const int nf = static_cast<int>(free_idx.size());

  const auto record = [&](int iteration, const Point& p, double step) {
    TraceRecord r;
    r.iteration = iteration;
    r.objective = p.f;
    r.max_violation = max_violation(p.g);
    r.step_norm = step;
    if (problem.monitor) {
      r.extras = problem.monitor(p.x);
    }
    trace.records.push_back(std::move(r));
  };
  const auto finish = [&](SolverStatus status) {
    trace.status = status;
    result.x = cur.x;
    return result;
  };

  evaluate_full(problem, cur);
  record(0, cur, 0.0);
  if (nf == 0) {
    trace.notes.push_back("no free variables");
    return finish(max_violation(cur.g) <= config.constraint_tol ? SolverStatus::kConverged
                                                               : SolverStatus::kSolverFailure);
  }

  // Bound rows enter the QP as d_j >= lo_j - x_j and -d_j >= x_j - hi_j.
  std::vector<int> lower_rows;
  std::vector<int> upper_rows;
  for (int a = 0; a < nf; ++a) {
    if (lower[free_idx[a]] > -kInactiveBound) {
      lower_rows.push_back(a);
    }
    if (upper[free_idx[a]] < kInactiveBound) {
      upper_rows.push_back(a);
    }
  }
  const int nqp = m + static_cast<int>(lower_rows.size() + upper_rows.size());

  Eigen::MatrixXd B = Eigen::MatrixXd::Identity(nf, nf);
  bool scale_pending = true;
  std::vector<double> rho(m, 0.0);
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m);

  for (int iter = 1; iter <= config.max_iters; ++iter) {
    QpProblem qp;
    qp.G = B;
    qp.g.resize(nf);
    for (int a = 0; a < nf; ++a) {
      qp.g[a] = cur.grad[free_idx[a]];
    }
    qp.C = Eigen::MatrixXd::Zero(nf, nqp);
    qp.c = Eigen::VectorXd::Zero(nqp);
    for (int i = 0; i < m; ++i) {
      for (int a = 0; a < nf; ++a) {
        qp.C(a, i) = -cur.jac[static_cast<std::size_t>(i) * n + free_idx[a]];
      }
    }
    int col = m;
    for (int a : lower_rows) {
      qp.C(a, col) = 1.0;
      qp.c[col++] = cur.x[free_idx[a]] - lower[free_idx[a]];
    }
    for (int a : upper_rows) {
      qp.C(a, col) = -1.0;
      qp.c[col++] = upper[free_idx[a]] - cur.x[free_idx[a]];
    }

    QpSolution sol;
    double theta = 1.0;
    try {
      for (double t : kRelaxation) {
        theta = t;
        for (int i = 0; i < m; ++i) {
          qp.c[i] = cur.g[i] > 0.0 ? -t * cur.g[i] : -cur.g[i];
        }
        sol = solve_qp(qp);
        if (sol.feasible) {
          break;
        }
      }
    } catch (const NumericalError& e) {
      trace.notes.push_back(std::string("QP subproblem failed: ") + e.what());
      return finish(SolverStatus::kSolverFailure);
    }
    if (!sol.feasible) {
      trace.notes.push_back("QP subproblem infeasible");
      return finish(SolverStatus::kSolverFailure);
    }
    if (theta < 1.0) {
      trace.notes.push_back("iteration " + std::to_string(iter) +
                            ": linearized constraints relaxed by " + std::to_string(theta));
    }
    const Eigen::VectorXd d = sol.x;
    lambda = sol.multipliers.head(m);

    double x_scale = 1.0;
    for (int a = 0; a < nf; ++a) {
      x_scale = std::max(x_scale, std::abs(cur.x[free_idx[a]]));
    }
    const double viol0 = max_violation(cur.g);
    if (d.norm() <= 1e-15 * x_scale) {
      record(iter, cur, 0.0);
      if (viol0 <= config.constraint_tol) {
        trace.notes.push_back("stationary point: zero search direction");
        return finish(SolverStatus::kConverged);
      }
      trace.notes.push_back("zero search direction at an infeasible point");
      return finish(SolverStatus::kSolverFailure);
    }

    for (int i = 0; i < m; ++i) {
      rho[i] = std::max(std::abs(lambda[i]), 0.5 * (rho[i] + std::abs(lambda[i])));
    }
    double penalty0 = 0.0;
    for (int i = 0; i < m; ++i) {
      penalty0 += rho[i] * std::max(0.0, cur.g[i]);
    }
    const double phi0 = cur.f + penalty0;
    double slope = theta * -penalty0;
    for (int a = 0; a < nf; ++a) {
      slope += cur.grad[free_idx[a]] * d[a];
    }
    const double descent = std::min(slope, 0.0);

    double alpha = 1.0;
    bool accepted = false;
    std::vector<double> x_trial(n);
    double f_trial = 0.0;
    std::vector<double> g_trial;
    for (int bt = 0; bt <= config.max_backtracks && alpha >= config.min_step; ++bt) {
      x_trial = cur.x;
      for (int a = 0; a < nf; ++a) {
        const int j = free_idx[a];
        x_trial[j] = std::clamp(cur.x[j] + alpha * d[a], lower[j], upper[j]);
      }
      const double phi = merit_at(problem, x_trial, rho, &f_trial, &g_trial);
      if (phi <= phi0 + config.armijo * alpha * descent && (descent < 0.0 || phi < phi0)) {
        accepted = true;
        break;
      }
      double next = 0.1 * alpha;
      if (std::isfinite(phi) && descent < 0.0) {
        const double curv = phi - phi0 - alpha * descent;
        if (curv > 0.0) {
          next = std::clamp(-descent * alpha * alpha / (2.0 * curv), 0.1 * alpha, 0.5 * alpha);
        }
      }
      alpha = next;
    }
    if (!accepted) {
      const double floor = 1e-10 * std::max(1.0, std::abs(cur.f));
      if (viol0 <= config.constraint_tol && std::abs(slope) <= floor) {
        record(iter, cur, 0.0);
        trace.notes.push_back("line search stalled at the rounding floor of the merit function");
        return finish(SolverStatus::kConverged);
      }
      trace.notes.push_back("line search failed");
      return finish(SolverStatus::kSolverFailure);
    }

    Point next;
    next.x = x_trial;
    try {
      evaluate_full(problem, next);
    } catch (const NumericalError& e) {
      trace.notes.push_back(std::string("gradient evaluation failed: ") + e.what());
      return finish(SolverStatus::kSolverFailure);
    }

    Eigen::VectorXd s(nf);
    Eigen::VectorXd y(nf);
    for (int a = 0; a < nf; ++a) {
      const int j = free_idx[a];
      s[a] = next.x[j] - cur.x[j];
      double gl_new = next.grad[j];
      double gl_old = cur.grad[j];
      for (int i = 0; i < m; ++i) {
        gl_new += lambda[i] * next.jac[static_cast<std::size_t>(i) * n + j];
        gl_old += lambda[i] * cur.jac[static_cast<std::size_t>(i) * n + j];
      }
      y[a] = gl_new - gl_old;
    }
    const double sy = s.dot(y);
    if (sy <= config.reset_curvature * s.norm() * y.norm()) {
      B.setIdentity();
      scale_pending = true;
    } else {
      if (scale_pending) {
        B = (y.squaredNorm() / sy) * Eigen::MatrixXd::Identity(nf, nf);
        scale_pending = false;
      }
      const Eigen::VectorXd Bs = B * s;
      const double sBs = s.dot(Bs);
      Eigen::VectorXd r = y;
      double sr = sy;
      if (sy < config.damping * sBs) {
        const double t = (1.0 - config.damping) * sBs / (sBs - sy);
        r = t * y + (1.0 - t) * Bs;
        sr = s.dot(r);
      }
      B += r * r.transpose() / sr - Bs * Bs.transpose() / sBs;
      B = 0.5 * (B + B.transpose());
    }

    const double f_prev = cur.f;
    const double step = s.norm();
    cur = std::move(next);
    record(iter, cur, step);

    const double rel = std::abs(cur.f - f_prev) / std::max(std::abs(cur.f), 1e-30);
    if (rel < config.rel_tol_J && max_violation(cur.g) <= config.constraint_tol) {
      return finish(SolverStatus::kConverged);
    }
  }
  return finish(SolverStatus::kMaxIters);
}

}  // namespace coilopt
