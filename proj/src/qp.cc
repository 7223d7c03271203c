#include "coilopt/qp.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "coilopt/errors.h"

namespace coilopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Working factorization: the first q columns of J span the active normals
// (through R), the remaining columns the null space.
struct ActiveSet {
  Eigen::MatrixXd J;
  Eigen::MatrixXd R;
  std::vector<int> index;   // active constraint indices, q entries
  Eigen::VectorXd u;        // multipliers, q + 1 slots (last is the candidate)
  int q = 0;
  double r_norm = 1.0;
};

// Appends the constraint whose transformed normal is d = J' n. Rotates J so
// that d has zeros below position q, then stores d[0..q] as a new column of R.
bool add_constraint(ActiveSet& set, Eigen::VectorXd& d) {
  const int n = static_cast<int>(d.size());
  for (int j = n - 1; j >= set.q + 1; --j) {
    double cc = d[j - 1];
    double ss = d[j];
    const double h = std::hypot(cc, ss);
    if (h < kEps) {
      continue;
    }
    d[j] = 0.0;
    ss /= h;
    cc /= h;
    if (cc < 0.0) {
      cc = -cc;
      ss = -ss;
      d[j - 1] = -h;
    } else {
      d[j - 1] = h;
    }
    const double xny = ss / (1.0 + cc);
    for (int k = 0; k < n; ++k) {
      const double t1 = set.J(k, j - 1);
      const double t2 = set.J(k, j);
      set.J(k, j - 1) = t1 * cc + t2 * ss;
      set.J(k, j) = xny * (t1 + set.J(k, j - 1)) - t2;
    }
  }
  ++set.q;
  for (int i = 0; i < set.q; ++i) {
    set.R(i, set.q - 1) = d[i];
  }
  if (std::abs(d[set.q - 1]) <= kEps * set.r_norm) {
    return false;
  }
  set.r_norm = std::max(set.r_norm, std::abs(d[set.q - 1]));
  return true;
}

// Removes active constraint `constraint`, shifting the multipliers (including
// the candidate slot q) and restoring the triangular form of R.
void delete_constraint(ActiveSet& set, int constraint) {
  const int n = static_cast<int>(set.J.rows());
  int qq = -1;
  for (int i = 0; i < set.q; ++i) {
    if (set.index[i] == constraint) {
      qq = i;
      break;
    }
  }
  if (qq < 0) {
    return;
  }
  for (int i = qq; i < set.q - 1; ++i) {
    set.index[i] = set.index[i + 1];
    set.u[i] = set.u[i + 1];
    set.R.col(i) = set.R.col(i + 1);
  }
  set.u[set.q - 1] = set.u[set.q];
  set.u[set.q] = 0.0;
  set.index.pop_back();
  for (int j = 0; j < set.q; ++j) {
    set.R(j, set.q - 1) = 0.0;
  }
  --set.q;
  if (set.q == 0) {
    return;
  }
  for (int j = qq; j < set.q; ++j) {
    double cc = set.R(j, j);
    double ss = set.R(j + 1, j);
    const double h = std::hypot(cc, ss);
    if (h < kEps) {
      continue;
    }
    cc /= h;
    ss /= h;
    set.R(j + 1, j) = 0.0;
    if (cc < 0.0) {
      set.R(j, j) = -h;
      cc = -cc;
      ss = -ss;
    } else {
      set.R(j, j) = h;
    }
    const double xny = ss / (1.0 + cc);
    for (int k = j + 1; k < set.q; ++k) {
      const double t1 = set.R(j, k);
      const double t2 = set.R(j + 1, k);
      set.R(j, k) = t1 * cc + t2 * ss;
      set.R(j + 1, k) = xny * (t1 + set.R(j, k)) - t2;
    }
    for (int k = 0; k < n; ++k) {
      const double t1 = set.J(k, j);
      const double t2 = set.J(k, j + 1);
      set.J(k, j) = t1 * cc + t2 * ss;
      set.J(k, j + 1) = xny * (set.J(k, j) + t1) - t2;
    }
  }
}

}  // namespace

QpSolution solve_qp(const QpProblem& problem) {
  const int n = static_cast<int>(problem.g.size());
  const int m = static_cast<int>(problem.c.size());
  if (problem.G.rows() != n || problem.G.cols() != n || problem.C.rows() != n ||
      problem.C.cols() != m) {
    throw InvalidArgument("solve_qp: inconsistent dimensions");
  }

  QpSolution out;
  out.multipliers = Eigen::VectorXd::Zero(m);

  Eigen::LLT<Eigen::MatrixXd> llt(problem.G);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("solve_qp: Hessian model is not positive definite");
  }
  ActiveSet set;
  const Eigen::MatrixXd L = llt.matrixL();
  set.J = L.transpose().triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(n, n));
  set.R = Eigen::MatrixXd::Zero(n, n);
  set.u = Eigen::VectorXd::Zero(n + 1);
  const double c1 = problem.G.trace();
  const double c2 = set.J.trace();

  Eigen::VectorXd x = -llt.solve(problem.g);
  double f = 0.5 * problem.g.dot(x);

  std::vector<char> active(m, 0);
  std::vector<char> excluded(m, 0);
  Eigen::VectorXd s(m);
  Eigen::VectorXd d(n);
  Eigen::VectorXd z(n);
  Eigen::VectorXd r(n);

  const auto finish = [&](bool feasible) {
    out.feasible = feasible;
    out.x = x;
    out.objective = f;
    for (int i = 0; i < set.q; ++i) {
      out.multipliers[set.index[i]] = set.u[i];
    }
    return out;
  };

  const int max_iterations = 50 * (n + m) + 100;
  while (true) {
    // Step 1: choose the most violated constraint.
    double psi = 0.0;
    for (int i = 0; i < m; ++i) {
      s[i] = problem.C.col(i).dot(x) + problem.c[i];
      psi += std::min(0.0, s[i]);
      excluded[i] = 0;
    }
    if (std::abs(psi) <= m * kEps * c1 * c2 * 100.0) {
      return finish(true);
    }
    const Eigen::VectorXd u_old = set.u.head(set.q);
    const std::vector<int> index_old = set.index;
    const Eigen::VectorXd x_old = x;

  choose:
    int ip = -1;
    double worst = 0.0;
    for (int i = 0; i < m; ++i) {
      if (!active[i] && !excluded[i] && s[i] < worst) {
        worst = s[i];
        ip = i;
      }
    }
    if (ip < 0) {
      return finish(true);
    }
    const Eigen::VectorXd np = problem.C.col(ip);
    set.u[set.q] = 0.0;

    // Step 2: move primal and dual variables until ip becomes active.
    while (true) {
      if (++out.iterations > max_iterations) {
        throw NumericalError("solve_qp: iteration limit reached (cycling)");
      }
      d = set.J.transpose() * np;
      z = set.J.rightCols(n - set.q) * d.tail(n - set.q);
      if (set.q > 0) {
        r.head(set.q) = set.R.topLeftCorner(set.q, set.q)
                            .triangularView<Eigen::Upper>()
                            .solve(d.head(set.q));
      }

      double t1 = kInf;
      int drop = -1;
      for (int k = 0; k < set.q; ++k) {
        if (r[k] > 0.0 && set.u[k] / r[k] < t1) {
          t1 = set.u[k] / r[k];
          drop = set.index[k];
        }
      }
      double t2 = kInf;
      if (std::abs(z.dot(z)) > kEps) {
        t2 = -s[ip] / z.dot(np);
        if (t2 < 0.0) {
          t2 = kInf;
        }
      }
      const double t = std::min(t1, t2);
      if (t >= kInf) {
        return finish(false);
      }

      if (t2 >= kInf) {
        // Dual step only.
        for (int k = 0; k < set.q; ++k) {
          set.u[k] -= t * r[k];
        }
        set.u[set.q] += t;
        active[drop] = 0;
        delete_constraint(set, drop);
        continue;
      }

      x += t * z;
      f += t * z.dot(np) * (0.5 * t + set.u[set.q]);
      for (int k = 0; k < set.q; ++k) {
        set.u[k] -= t * r[k];
      }
      set.u[set.q] += t;

      if (std::abs(t - t2) < kEps) {
        // Full step: ip joins the active set.
        set.index.push_back(ip);
        if (!add_constraint(set, d)) {
          // Linearly dependent on the active set; restore and skip it.
          excluded[ip] = 1;
          std::fill(active.begin(), active.end(), 0);
          set.index = index_old;
          for (int i = 0; i < static_cast<int>(index_old.size()); ++i) {
            set.u[i] = u_old[i];
            active[index_old[i]] = 1;
          }
          x = x_old;
          // Rebuild the factorization for the restored active set.
          set.J = L.transpose().triangularView<Eigen::Upper>().solve(
              Eigen::MatrixXd::Identity(n, n));
          set.R.setZero();
          set.q = 0;
          set.r_norm = 1.0;
          const std::vector<int> restore = set.index;
          const Eigen::VectorXd u_restore = set.u.head(restore.size());
          set.index.clear();
          for (int a : restore) {
            set.index.push_back(a);
            Eigen::VectorXd da = set.J.transpose() * problem.C.col(a);
            add_constraint(set, da);
          }
          set.u.head(restore.size()) = u_restore;
          for (int i = 0; i < m; ++i) {
            s[i] = problem.C.col(i).dot(x) + problem.c[i];
          }
          goto choose;
        }
        active[ip] = 1;
        break;
      }

      // Partial step: drop the blocking constraint and keep pushing on ip.
      active[drop] = 0;
      delete_constraint(set, drop);
      s[ip] = problem.C.col(ip).dot(x) + problem.c[ip];
    }
  }
}

}  // namespace coilopt
