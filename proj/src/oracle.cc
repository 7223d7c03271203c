#include "coilopt/oracle.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "coilopt/errors.h"

namespace coilopt::oracle {

namespace {

constexpr double kInvFourPi = 0.25 / std::numbers::pi;
constexpr int kMaxAgmSteps = 64;
constexpr double kAgmTolerance = 4e-16;

struct Polyline {
  std::vector<Vec3> mid;
  std::vector<Vec3> chord;
};

Polyline polyline(const CoilCurve& curve, int segments) {
  if (segments < 3) {
    throw InvalidArgument("polyline oracle: need at least 3 segments");
  }
  Polyline out;
  out.mid.resize(segments);
  out.chord.resize(segments);
  Vec3 prev = curve.point(0.0);
  for (int i = 0; i < segments; ++i) {
    const Vec3 next = curve.point(static_cast<double>(i + 1) / segments);
    out.mid[i] = 0.5 * (prev + next);
    out.chord[i] = next - prev;
    prev = next;
  }
  return out;
}

void check_parameter(double m, bool allow_one, const char* what) {
  if (!(m >= 0.0) || m > 1.0 || (!allow_one && m == 1.0)) {
    throw InvalidArgument(std::string(what) + ": parameter m = " + std::to_string(m) +
                          " outside the domain");
  }
}

double coaxial_parameter(double a, double b, double d) {
  if (!(a > 0.0 && b > 0.0)) {
    throw InvalidArgument("coaxial_mi: radii must be positive");
  }
  const double k2 = 4.0 * a * b / ((a + b) * (a + b) + d * d);
  if (!(k2 < 1.0)) {
    throw InvalidArgument("coaxial_mi: coincident circles (k^2 >= 1)");
  }
  return k2;
}

}  // namespace

double elliptic_K(double m) {
  check_parameter(m, false, "elliptic_K");
  double a = 1.0;
  double b = std::sqrt(1.0 - m);
  for (int it = 0; it < kMaxAgmSteps && std::abs(a - b) > kAgmTolerance * a; ++it) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return std::numbers::pi / (2.0 * a);
}

double elliptic_E(double m) {
  check_parameter(m, true, "elliptic_E");
  if (m == 1.0) {
    return 1.0;
  }
  // E = K (1 - sum_n 2^(n-1) c_n^2), c_0^2 = m, c_{n+1} = (a_n - b_n) / 2.
  double a = 1.0;
  double b = std::sqrt(1.0 - m);
  double sum = 0.5 * m;
  double power = 0.5;
  for (int it = 0; it < kMaxAgmSteps && std::abs(a - b) > kAgmTolerance * a; ++it) {
    const double c = 0.5 * (a - b);
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
    power *= 2.0;
    sum += power * c * c;
  }
  return std::numbers::pi / (2.0 * a) * (1.0 - sum);
}

double coaxial_mi(double a, double b, double d, double mu) {
  const double k2 = coaxial_parameter(a, b, d);
  const double k = std::sqrt(k2);
  return 2.0 * mu * b / k * std::sqrt(a / b) *
         ((1.0 - 0.5 * k2) * elliptic_K(k2) - elliptic_E(k2));
}

double coaxial_mi_db(double a, double b, double d, double mu) {
  const double k2 = coaxial_parameter(a, b, d);
  const double gap = (a - b) * (a - b) + d * d;
  if (!(gap > 0.0)) {
    throw InvalidArgument("coaxial_mi_db: (a - b)^2 + d^2 must be positive");
  }
  const double k = std::sqrt(k2);
  return 0.5 * mu * k * std::sqrt(b / a) *
         ((a * a - b * b - d * d) / gap * elliptic_E(k2) + elliptic_K(k2));
}

double radial_sensitivity(const CoilCurve& curve, std::span<const Vec3> d, const Vec3& center,
                          double b) {
  if (!(b > 0.0)) {
    throw InvalidArgument("radial_sensitivity: radius must be positive");
  }
  if (static_cast<int>(d.size()) != curve.count()) {
    throw InvalidArgument("radial_sensitivity: sensitivity count mismatch");
  }
  double total = 0.0;
  for (int m = 0; m < curve.count(); ++m) {
    total += dot(d[m], curve.control_points()[m] - center);
  }
  return total / b;
}

std::vector<double> finite_difference_gradient(
    const std::function<double(const std::vector<double>&)>& f, const std::vector<double>& x,
    double h) {
  if (!(h > 0.0)) {
    throw InvalidArgument("finite_difference_gradient: step must be positive");
  }
  std::vector<double> grad(x.size());
  std::vector<double> probe = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double plus = f(probe);
    probe[i] = x[i] - h;
    const double minus = f(probe);
    probe[i] = x[i];
    grad[i] = (plus - minus) / (2.0 * h);
  }
  return grad;
}

std::vector<double> finite_difference_gradient4(
    const std::function<double(const std::vector<double>&)>& f, const std::vector<double>& x,
    double h) {
  if (!(h > 0.0)) {
    throw InvalidArgument("finite_difference_gradient4: step must be positive");
  }
  std::vector<double> grad(x.size());
  std::vector<double> probe = x;
  const auto at = [&](std::size_t i, double offset) {
    probe[i] = x[i] + offset;
    return f(probe);
  };
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double m2 = at(i, -2.0 * h);
    const double m1 = at(i, -h);
    const double p1 = at(i, h);
    const double p2 = at(i, 2.0 * h);
    probe[i] = x[i];
    grad[i] = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
  }
  return grad;
}

double length_difference(const CoilCurve& a, const CoilCurve& b, const QuadratureRule& rule) {
  if (a.degree() != b.degree() || a.count() != b.count()) {
    throw InvalidArgument("length_difference: curves use different bases");
  }
  const CurveSamples sa = sample(a, rule);
  const CurveSamples sb = sample(b, rule);
  double total = 0.0;
  for (int i = 0; i < sa.size(); ++i) {
    const Vec3& va = sa.velocity[i];
    const Vec3& vb = sb.velocity[i];
    const double denom = norm(va) + norm(vb);
    if (denom > 0.0) {
      total += sa.weight[i] * dot(va - vb, va + vb) / denom;
    }
  }
  return total;
}

double max_relative_error(std::span<const double> a, std::span<const double> b,
                          double abs_floor) {
  if (a.size() != b.size()) {
    throw InvalidArgument("max_relative_error: size mismatch");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = std::abs(a[i] - b[i]);
    if (diff <= abs_floor) {
      continue;
    }
    worst = std::max(worst, diff / std::max(std::abs(a[i]), std::abs(b[i])));
  }
  return worst;
}

double polyline_mutual_inductance(const CoilCurve& c, const CoilCurve& cp, int segments,
                                  double mu) {
  const Polyline a = polyline(c, segments);
  const Polyline b = polyline(cp, segments);
  std::vector<double> partial(segments, 0.0);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < segments; ++i) {
    double acc = 0.0;
    for (int j = 0; j < segments; ++j) {
      acc += dot(a.chord[i], b.chord[j]) / norm(a.mid[i] - b.mid[j]);
    }
    partial[i] = acc;
  }
  double total = 0.0;
  for (double v : partial) {
    total += v;
  }
  return mu * kInvFourPi * total;
}

Vec3 polyline_magnetic_field(const CoilCurve& coil, double current, const Vec3& x, int segments,
                             double mu) {
  const Polyline line = polyline(coil, segments);
  Vec3 b;
  for (int i = 0; i < segments; ++i) {
    const Vec3 r = x - line.mid[i];
    const double d = norm(r);
    b += (1.0 / (d * d * d)) * cross(line.chord[i], r);
  }
  return (mu * current * kInvFourPi) * b;
}

}  // namespace coilopt::oracle
