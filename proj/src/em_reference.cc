#include "coilopt/em_reference.h"

#include <cmath>
#include <numbers>

namespace coilopt::reference {

namespace {

constexpr double kInvFourPi = 0.25 / std::numbers::pi;

// Node t and weight (including the interval Jacobian) of node q in interval k.
double node(const PeriodicBasis& basis, const QuadratureRule& rule, int k, int q, double& weight) {
  const double half = 0.5 * basis.knot_span();
  weight = rule.weights[q] * half;
  return basis.knot(k) + (rule.nodes[q] + 1.0) * half;
}

}  // namespace

Vec3 magnetic_field(const CoilCurve& coil, double current, const Vec3& x, const QuadratureRule& rule,
                    double mu) {
  Vec3 b;
  for (int k = 0; k < coil.count(); ++k) {
    for (int q = 0; q < rule.order; ++q) {
      double w = 0.0;
      const double t = node(coil.basis(), rule, k, q, w);
      const Vec3 r = x - coil.point(t);
      const double d = norm(r);
      b += (w / (d * d * d)) * cross(coil.velocity(t), r);
    }
  }
  return (mu * current * kInvFourPi) * b;
}

double mutual_inductance(const CoilCurve& c, const CoilCurve& cp, const QuadratureRule& rule,
                         double mu) {
  double total = 0.0;
  for (int k = 0; k < c.count(); ++k) {
    for (int q = 0; q < rule.order; ++q) {
      double w = 0.0;
      const double t = node(c.basis(), rule, k, q, w);
      const Vec3 s = c.point(t);
      const Vec3 v = c.velocity(t);
      for (int l = 0; l < cp.count(); ++l) {
        for (int qp = 0; qp < rule.order; ++qp) {
          double wp = 0.0;
          const double tp = node(cp.basis(), rule, l, qp, wp);
          total += w * wp * dot(v, cp.velocity(tp)) / norm(s - cp.point(tp));
        }
      }
    }
  }
  return mu * kInvFourPi * total;
}

std::vector<Vec3> mi_sensitivity(const CoilCurve& c, const CoilCurve& cp,
                                 const QuadratureRule& rule, double mu) {
  std::vector<Vec3> d(c.count());
  for (int m = 0; m < c.count(); ++m) {
    for (int k : c.basis().support_intervals(m)) {
      for (int q = 0; q < rule.order; ++q) {
        double w = 0.0;
        const double t = node(c.basis(), rule, k, q, w);
        const double r_val = c.basis().value(m, t);
        const double r_der = c.basis().derivative(m, t);
        const Vec3 s = c.point(t);
        const Vec3 v = c.velocity(t);
        for (int l = 0; l < cp.count(); ++l) {
          for (int qp = 0; qp < rule.order; ++qp) {
            double wp = 0.0;
            const double tp = node(cp.basis(), rule, l, qp, wp);
            const Vec3 sp = cp.point(tp);
            const Vec3 vp = cp.velocity(tp);
            const Vec3 r = s - sp;
            const double dist = norm(r);
            d[m] += (w * wp) * ((r_der / dist) * vp - (r_val * dot(v, vp) / (dist * dist * dist)) * r);
          }
        }
      }
    }
    d[m] *= mu * kInvFourPi;
  }
  return d;
}

double mi_coefficient(const CoilCurve& c, const CoilCurve& cp, int a, int b,
                      const QuadratureRule& rule, double mu) {
  double total = 0.0;
  for (int k : c.basis().support_intervals(a)) {
    for (int l : cp.basis().support_intervals(b)) {
      for (int q = 0; q < rule.order; ++q) {
        double w = 0.0;
        const double t = node(c.basis(), rule, k, q, w);
        const double ra = c.basis().derivative(a, t);
        const Vec3 s = c.point(t);
        for (int qp = 0; qp < rule.order; ++qp) {
          double wp = 0.0;
          const double tp = node(cp.basis(), rule, l, qp, wp);
          total += w * wp * ra * cp.basis().derivative(b, tp) / norm(s - cp.point(tp));
        }
      }
    }
  }
  return mu * kInvFourPi * total;
}

}  // namespace coilopt::reference
