#include "coilopt/em.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "coilopt/errors.h"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace coilopt {

namespace {

constexpr double kInvFourPi = 0.25 / std::numbers::pi;

void check_separation(double min_dist2, double guard, const std::string& what) {
  if (!(min_dist2 > guard * guard)) {
    throw NearSingular(what + ": minimum node distance " + std::to_string(std::sqrt(min_dist2)) +
                       " is within the singularity guard " + std::to_string(guard));
  }
}

double pair_guard(const DiscreteCoil& a, const DiscreteCoil& b) {
  return kNearSingularFactor * std::max(a.diagonal, b.diagonal);
}

}  // namespace

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) {
    omp_set_num_threads(threads);
  }
#else
  (void)threads;
#endif
}

DiscreteCoil discretize(const CoilCurve& curve, const QuadratureRule& rule) {
  DiscreteCoil out;
  out.curve = &curve;
  out.table = tabulate(curve.basis(), rule);
  out.samples = sample(curve, rule, out.table);
  out.diagonal = curve.bounding_box_diagonal();
  return out;
}

double MICoefficients::contract(const std::vector<Vec3>& cps,
                                const std::vector<Vec3>& cps_prime) const {
  if (static_cast<int>(cps.size()) != rows || static_cast<int>(cps_prime.size()) != cols) {
    throw InvalidArgument("MICoefficients::contract: control point count mismatch");
  }
  double total = 0.0;
  for (int a = 0; a < rows; ++a) {
    double row = 0.0;
    for (int b = 0; b < cols; ++b) {
      row += (*this)(a, b) * dot(cps[a], cps_prime[b]);
    }
    total += row;
  }
  return total;
}

Vec3 magnetic_field(const DiscreteCoil& coil, double current, const Vec3& x, double mu) {
  const CurveSamples& s = coil.samples;
  const double guard = kNearSingularFactor * coil.diagonal;
  double min_dist2 = std::numeric_limits<double>::infinity();
  Vec3 b;
  for (int i = 0; i < s.size(); ++i) {
    const Vec3 r = x - s.point[i];
    const double r2 = dot(r, r);
    min_dist2 = std::min(min_dist2, r2);
    const double inv = 1.0 / std::sqrt(r2);
    b += (s.weight[i] * inv * inv * inv) * cross(s.velocity[i], r);
  }
  check_separation(min_dist2, guard, "magnetic_field");
  return (mu * current * kInvFourPi) * b;
}

Vec3 magnetic_field(const CoilCurve& coil, double current, const Vec3& x, const QuadratureRule& rule,
                    double mu) {
  return magnetic_field(discretize(coil, rule), current, x, mu);
}

Vec3 vector_potential(const DiscreteCoil& coil, double current, const Vec3& x, double mu) {
  const CurveSamples& s = coil.samples;
  const double guard = kNearSingularFactor * coil.diagonal;
  double min_dist2 = std::numeric_limits<double>::infinity();
  Vec3 a;
  for (int i = 0; i < s.size(); ++i) {
    const Vec3 r = x - s.point[i];
    const double r2 = dot(r, r);
    min_dist2 = std::min(min_dist2, r2);
    a += (s.weight[i] / std::sqrt(r2)) * s.velocity[i];
  }
  check_separation(min_dist2, guard, "vector_potential");
  return (mu * current * kInvFourPi) * a;
}

Vec3 vector_potential(const CoilCurve& coil, double current, const Vec3& x,
                      const QuadratureRule& rule, double mu) {
  return vector_potential(discretize(coil, rule), current, x, mu);
}

double mutual_inductance(const DiscreteCoil& c, const DiscreteCoil& cp, double mu) {
  const CurveSamples& s = c.samples;
  const CurveSamples& sp = cp.samples;
  const int order = s.order;
  std::vector<double> partial(s.intervals, 0.0);
  double min_dist2 = std::numeric_limits<double>::infinity();

#pragma omp parallel for schedule(static) reduction(min : min_dist2)
  for (int k = 0; k < s.intervals; ++k) {
    double acc = 0.0;
    for (int q = 0; q < order; ++q) {
      const int i = k * order + q;
      const Vec3 si = s.point[i];
      const Vec3 vi = s.velocity[i];
      Vec3 u;
      for (int j = 0; j < sp.size(); ++j) {
        const Vec3 r = si - sp.point[j];
        const double r2 = dot(r, r);
        min_dist2 = std::min(min_dist2, r2);
        const double inv = 1.0 / std::sqrt(r2);
        u += (sp.weight[j] * inv) * sp.velocity[j];
      }
      acc += s.weight[i] * dot(vi, u);
    }
    partial[k] = acc;
  }
  check_separation(min_dist2, pair_guard(c, cp), "mutual_inductance");

  double total = 0.0;
  for (double v : partial) {
    total += v;
  }
  return mu * kInvFourPi * total;
}

double mutual_inductance(const CoilCurve& c, const CoilCurve& cp, const QuadratureRule& rule,
                         double mu) {
  return mutual_inductance(discretize(c, rule), discretize(cp, rule), mu);
}

OneSidedSensitivity mi_sensitivity_of(const DiscreteCoil& c, const DiscreteCoil& other, double mu) {
  const CurveSamples& s = c.samples;
  const CurveSamples& so = other.samples;
  const PeriodicBasis& basis = c.curve->basis();
  const int order = s.order;
  const int p = basis.degree();

  // Per interval k: the M partial sum and the (p+1) piece contributions
  //   sum_q w_q [R'_j(q) U_q - R_j(q) V_q],
  // with U_q = sum_j' w ds'/r and V_q = sum_j' w (ds . ds') (s - s') / r^3.
  std::vector<double> partial_mi(s.intervals, 0.0);
  std::vector<Vec3> partial_piece(static_cast<std::size_t>(s.intervals) * (p + 1));
  double min_dist2 = std::numeric_limits<double>::infinity();

#pragma omp parallel for schedule(static) reduction(min : min_dist2)
  for (int k = 0; k < s.intervals; ++k) {
    double acc_mi = 0.0;
    std::vector<Vec3> acc(p + 1);
    for (int q = 0; q < order; ++q) {
      const int i = k * order + q;
      const Vec3 si = s.point[i];
      const Vec3 vi = s.velocity[i];
      Vec3 u;
      Vec3 v;
      for (int j = 0; j < so.size(); ++j) {
        const Vec3 r = si - so.point[j];
        const double r2 = dot(r, r);
        min_dist2 = std::min(min_dist2, r2);
        const double inv = 1.0 / std::sqrt(r2);
        const double w = so.weight[j];
        u += (w * inv) * so.velocity[j];
        v += (w * dot(vi, so.velocity[j]) * inv * inv * inv) * r;
      }
      const double wi = s.weight[i];
      acc_mi += wi * dot(vi, u);
      for (int jp = 0; jp <= p; ++jp) {
        acc[jp] += wi * (c.table.derivative[jp][q] * u - c.table.value[jp][q] * v);
      }
    }
    partial_mi[k] = acc_mi;
    for (int jp = 0; jp <= p; ++jp) {
      partial_piece[static_cast<std::size_t>(k) * (p + 1) + jp] = acc[jp];
    }
  }
  check_separation(min_dist2, pair_guard(c, other), "mi_sensitivity");

  const double scale = mu * kInvFourPi;
  OneSidedSensitivity out;
  out.d.assign(basis.count(), Vec3{});
  double total = 0.0;
  for (int k = 0; k < s.intervals; ++k) {
    total += partial_mi[k];
    for (int jp = 0; jp <= p; ++jp) {
      out.d[basis.function_on_interval(k, jp)] +=
          scale * partial_piece[static_cast<std::size_t>(k) * (p + 1) + jp];
    }
  }
  out.mutual_inductance = scale * total;
  return out;
}

SensitivitySet mi_sensitivity(const CoilCurve& c, const CoilCurve& cp, const QuadratureRule& rule,
                              double mu) {
  const DiscreteCoil dc = discretize(c, rule);
  const DiscreteCoil dcp = discretize(cp, rule);
  OneSidedSensitivity first = mi_sensitivity_of(dc, dcp, mu);
  OneSidedSensitivity second = mi_sensitivity_of(dcp, dc, mu);
  SensitivitySet out;
  out.mutual_inductance = first.mutual_inductance;
  out.d = std::move(first.d);
  out.d_prime = std::move(second.d);
  return out;
}

MICoefficients mi_coefficients(const CoilCurve& c, const CoilCurve& cp, const QuadratureRule& rule,
                               double mu) {
  const DiscreteCoil dc = discretize(c, rule);
  const DiscreteCoil dcp = discretize(cp, rule);
  const CurveSamples& s = dc.samples;
  const CurveSamples& sp = dcp.samples;
  const PeriodicBasis& basis = c.basis();
  const PeriodicBasis& basis_p = cp.basis();
  const int order = s.order;
  const int order_p = sp.order;
  const int p = basis.degree();
  const int pp = basis_p.degree();

  MICoefficients out;
  out.rows = basis.count();
  out.cols = basis_p.count();
  out.values.assign(static_cast<std::size_t>(out.rows) * out.cols, 0.0);
  out.label = c.label();
  out.label_prime = cp.label();
  const double scale = mu * kInvFourPi;
  double min_dist2 = std::numeric_limits<double>::infinity();

  // Row a only receives contributions from the p+1 intervals of supp(R_a), so
  // rows are independent and can be filled in parallel without sharing.
#pragma omp parallel for schedule(static) reduction(min : min_dist2)
  for (int a = 0; a < out.rows; ++a) {
    std::vector<double> row(out.cols, 0.0);
    for (int ja = 0; ja <= p; ++ja) {
      const int k = (a + ja) % out.rows;
      for (int l = 0; l < sp.intervals; ++l) {
        std::vector<double> local(pp + 1, 0.0);
        for (int q = 0; q < order; ++q) {
          const int i = k * order + q;
          const double ra = dc.table.derivative[ja][q] * s.weight[i];
          for (int qp = 0; qp < order_p; ++qp) {
            const int j = l * order_p + qp;
            const Vec3 r = s.point[i] - sp.point[j];
            const double r2 = dot(r, r);
            min_dist2 = std::min(min_dist2, r2);
            const double kern = ra * sp.weight[j] / std::sqrt(r2);
            for (int jb = 0; jb <= pp; ++jb) {
              local[jb] += kern * dcp.table.derivative[jb][qp];
            }
          }
        }
        for (int jb = 0; jb <= pp; ++jb) {
          row[basis_p.function_on_interval(l, jb)] += local[jb];
        }
      }
    }
    for (int b = 0; b < out.cols; ++b) {
      out.values[static_cast<std::size_t>(a) * out.cols + b] = scale * row[b];
    }
  }
  check_separation(min_dist2, pair_guard(dc, dcp), "mi_coefficients");
  return out;
}

double flux_through(const CoilCurve& receiver, const CoilCurve& source, double current,
                    const QuadratureRule& rule, double mu) {
  const DiscreteCoil dr = discretize(receiver, rule);
  const DiscreteCoil ds = discretize(source, rule);
  double total = 0.0;
  for (int k = 0; k < dr.samples.intervals; ++k) {
    double acc = 0.0;
    for (int q = 0; q < dr.samples.order; ++q) {
      const int i = k * dr.samples.order + q;
      acc += dr.samples.weight[i] *
             dot(vector_potential(ds, current, dr.samples.point[i], mu), dr.samples.velocity[i]);
    }
    total += acc;
  }
  return total;
}

}  // namespace coilopt
