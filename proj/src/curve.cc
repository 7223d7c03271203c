#include "coilopt/curve.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include "coilopt/errors.h"

namespace coilopt {

CoilCurve::CoilCurve(PeriodicBasis basis, std::vector<Vec3> control_points, std::string label)
    : basis_(basis), label_(std::move(label)) {
  set_control_points(std::move(control_points));
}

void CoilCurve::set_control_points(std::vector<Vec3> control_points) {
  if (static_cast<int>(control_points.size()) != basis_.count()) {
    throw InvalidArgument("CoilCurve '" + label_ + "': expected " +
                          std::to_string(basis_.count()) + " control points, got " +
                          std::to_string(control_points.size()));
  }
  for (const Vec3& p : control_points) {
    if (!is_finite(p)) {
      throw InvalidArgument("CoilCurve '" + label_ + "': non-finite control point");
    }
  }
  control_points_ = std::move(control_points);
}

Vec3 CoilCurve::point(double t) const {
  const KnotLocation loc = basis_.locate(t);
  Vec3 s;
  for (int j = 0; j <= basis_.degree(); ++j) {
    const int m = basis_.function_on_interval(loc.interval, j);
    s += basis_.piece_value(j, loc.local) * control_points_[m];
  }
  return s;
}

Vec3 CoilCurve::velocity(double t) const {
  const KnotLocation loc = basis_.locate(t);
  Vec3 v;
  for (int j = 0; j <= basis_.degree(); ++j) {
    const int m = basis_.function_on_interval(loc.interval, j);
    v += basis_.piece_derivative(j, loc.local) * control_points_[m];
  }
  return v;
}

double CoilCurve::bounding_box_diagonal() const {
  Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity()};
  Vec3 hi = -lo;
  for (const Vec3& p : control_points_) {
    for (int i = 0; i < 3; ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  }
  return norm(hi - lo);
}

BasisTable tabulate(const PeriodicBasis& basis, const QuadratureRule& rule) {
  BasisTable table;
  table.degree = basis.degree();
  table.order = rule.order;
  table.value.assign(basis.degree() + 1, std::vector<double>(rule.order));
  table.derivative.assign(basis.degree() + 1, std::vector<double>(rule.order));
  for (int j = 0; j <= basis.degree(); ++j) {
    for (int q = 0; q < rule.order; ++q) {
      const double x = 0.5 * (rule.nodes[q] + 1.0);
      table.value[j][q] = basis.piece_value(j, x);
      table.derivative[j][q] = basis.piece_derivative(j, x);
    }
  }
  return table;
}

CurveSamples sample(const CoilCurve& curve, const QuadratureRule& rule) {
  return sample(curve, rule, tabulate(curve.basis(), rule));
}

CurveSamples sample(const CoilCurve& curve, const QuadratureRule& rule, const BasisTable& table) {
  const PeriodicBasis& basis = curve.basis();
  const int n = basis.count();
  const int order = rule.order;
  const double half = 0.5 * basis.knot_span();
  const auto& cps = curve.control_points();

  CurveSamples out;
  out.intervals = n;
  out.order = order;
  out.param.resize(static_cast<std::size_t>(n) * order);
  out.weight.resize(out.param.size());
  out.point.resize(out.param.size());
  out.velocity.resize(out.param.size());
  for (int k = 0; k < n; ++k) {
    for (int q = 0; q < order; ++q) {
      const int i = k * order + q;
      out.param[i] = basis.knot(k) + (rule.nodes[q] + 1.0) * half;
      out.weight[i] = rule.weights[q] * half;
      Vec3 s;
      Vec3 v;
      for (int j = 0; j <= basis.degree(); ++j) {
        const Vec3& p = cps[basis.function_on_interval(k, j)];
        s += table.value[j][q] * p;
        v += table.derivative[j][q] * p;
      }
      out.point[i] = s;
      out.velocity[i] = v;
    }
  }
  return out;
}

double length(const CoilCurve& curve, const QuadratureRule& rule) {
  const CurveSamples samples = sample(curve, rule);
  double total = 0.0;
  for (int k = 0; k < samples.intervals; ++k) {
    double interval = 0.0;
    for (int q = 0; q < samples.order; ++q) {
      const int i = k * samples.order + q;
      interval += samples.weight[i] * norm(samples.velocity[i]);
    }
    total += interval;
  }
  return total;
}

std::vector<Vec3> length_gradient(const CoilCurve& curve, const QuadratureRule& rule) {
  const PeriodicBasis& basis = curve.basis();
  const BasisTable table = tabulate(basis, rule);
  const CurveSamples samples = sample(curve, rule, table);
  const int p = basis.degree();
  const auto& cps = curve.control_points();
  const double guard = 1e-12 * curve.bounding_box_diagonal();

  std::vector<double> inv_speed(samples.size());
  for (int i = 0; i < samples.size(); ++i) {
    const double speed = norm(samples.velocity[i]);
    if (!(speed > guard)) {
      throw DegenerateVelocity("length_gradient: |ds/dt| = " + std::to_string(speed) +
                               " at t = " + std::to_string(samples.param[i]) + " on coil '" +
                               curve.label() + "'");
    }
    inv_speed[i] = 1.0 / speed;
  }

  // dl/dP_k = sum_m [ integral over supp(R_m) ∩ supp(R_k) of R'_m R'_k / |s'| ] P_m.
  // On interval n the overlapping pairs are the (p+1)^2 pieces living there.
  std::vector<Vec3> grad(basis.count());
  for (int n = 0; n < samples.intervals; ++n) {
    for (int jm = 0; jm <= p; ++jm) {
      const int m = basis.function_on_interval(n, jm);
      for (int jk = 0; jk <= p; ++jk) {
        const int k = basis.function_on_interval(n, jk);
        double coeff = 0.0;
        for (int q = 0; q < samples.order; ++q) {
          const int i = n * samples.order + q;
          coeff += samples.weight[i] * table.derivative[jm][q] * table.derivative[jk][q] *
                   inv_speed[i];
        }
        grad[k] += coeff * cps[m];
      }
    }
  }
  return grad;
}

CoilCurve circle_coil(const Vec3& center, double radius, const Vec3& axis, int count, int degree,
                      std::string label) {
  if (!(radius > 0.0)) {
    throw InvalidArgument("circle_coil: radius must be positive");
  }
  if (std::abs(norm(axis) - 1.0) > 1e-9) {
    throw InvalidArgument("circle_coil: axis must be a unit vector");
  }
  PeriodicBasis basis(degree, count);
  // In-plane frame (u, v) with u x v = axis.
  Vec3 ref{1.0, 0.0, 0.0};
  if (std::abs(dot(ref, axis)) > 1.0 - 1e-9) {
    ref = {0.0, 1.0, 0.0};
  }
  Vec3 u = ref - dot(ref, axis) * axis;
  u = u / norm(u);
  const Vec3 v = cross(axis, u);

  std::vector<Vec3> cps(count);
  for (int j = 0; j < count; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / count;
    cps[j] = center + radius * (std::cos(theta) * u + std::sin(theta) * v);
  }
  return CoilCurve(basis, std::move(cps), std::move(label));
}

CoilCurve torus_coil(double a, double b, int turns, int count, int degree, std::string label) {
  if (!(a > b && b > 0.0)) {
    throw InvalidArgument("torus_coil: need a > b > 0");
  }
  if (turns < 1) {
    throw InvalidArgument("torus_coil: need at least one turn");
  }
  PeriodicBasis basis(degree, count);
  std::vector<Vec3> cps(count);
  for (int j = 0; j < count; ++j) {
    const double u = 2.0 * std::numbers::pi * j / count;
    const double rho = a - b * std::cos(turns * u);
    cps[j] = {rho * std::cos(u), rho * std::sin(u), b * std::sin(turns * u)};
  }
  return CoilCurve(basis, std::move(cps), std::move(label));
}

CoilCurve reversed(const CoilCurve& curve) {
  std::vector<Vec3> cps(curve.control_points().rbegin(), curve.control_points().rend());
  return CoilCurve(curve.basis(), std::move(cps), curve.label());
}

void write_polyline_csv(std::ostream& out, const CoilCurve& curve, int samples) {
  if (samples < 1) {
    throw InvalidArgument("write_polyline_csv: need at least one sample");
  }
  const auto old_precision = out.precision(17);
  out << "t,x,y,z\n";
  for (int i = 0; i <= samples; ++i) {
    const double t = static_cast<double>(i) / samples;
    const Vec3 s = curve.point(t);
    out << t << ',' << s.x << ',' << s.y << ',' << s.z << '\n';
  }
  out.precision(old_precision);
}

}  // namespace coilopt
