#ifndef COILOPT_CURVE_H_
#define COILOPT_CURVE_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "coilopt/bspline.h"
#include "coilopt/quadrature.h"
#include "coilopt/vec3.h"

namespace coilopt {

// Closed coil s(t) = sum_m R^p_m(t) P_m for t in [0, 1]. Orientation (the
// current direction) is the direction of increasing t.
class CoilCurve {
 public:
  CoilCurve(PeriodicBasis basis, std::vector<Vec3> control_points, std::string label = {});

  const PeriodicBasis& basis() const { return basis_; }
  int degree() const { return basis_.degree(); }
  int count() const { return basis_.count(); }
  const std::vector<Vec3>& control_points() const { return control_points_; }
  const std::string& label() const { return label_; }

  void set_control_points(std::vector<Vec3> control_points);

  Vec3 point(double t) const;
  Vec3 velocity(double t) const;

  // Diagonal of the axis-aligned box around the control points.
  double bounding_box_diagonal() const;

 private:
  PeriodicBasis basis_;
  std::vector<Vec3> control_points_;
  std::string label_;
};

// Basis pieces tabulated at the local nodes x_q = (xi_q + 1) / 2 of a rule.
// value[j][q] is the j-th piece at node q; every interval shares the table.
struct BasisTable {
  int degree = 0;
  int order = 0;
  std::vector<std::vector<double>> value;
  std::vector<std::vector<double>> derivative;
};

BasisTable tabulate(const PeriodicBasis& basis, const QuadratureRule& rule);

// Geometry at every quadrature node of a curve, node index i = k * Q + q for
// interval k. `weight` already contains the span/2 Jacobian of the interval map.
struct CurveSamples {
  int intervals = 0;
  int order = 0;
  std::vector<double> param;
  std::vector<double> weight;
  std::vector<Vec3> point;
  std::vector<Vec3> velocity;

  int size() const { return static_cast<int>(point.size()); }
};

CurveSamples sample(const CoilCurve& curve, const QuadratureRule& rule);
CurveSamples sample(const CoilCurve& curve, const QuadratureRule& rule, const BasisTable& table);

double length(const CoilCurve& curve, const QuadratureRule& rule);

// d(length)/dP_k for every control point. Throws DegenerateVelocity when
// |ds/dt| drops below 1e-12 times the bounding-box diagonal at some node.
std::vector<Vec3> length_gradient(const CoilCurve& curve, const QuadratureRule& rule);

// N control points on the circle (not fitted), CP_0 along the projection of
// +x (or +y when the axis is along x), counter-clockwise seen from +axis.
CoilCurve circle_coil(const Vec3& center, double radius, const Vec3& axis, int count, int degree,
                      std::string label = {});

// Control points on the toroidal winding
//   ((a - b cos(f u)) cos u, (a - b cos(f u)) sin u, b sin(f u)),  u_j = 2 pi j / N.
CoilCurve torus_coil(double a, double b, int turns, int count, int degree, std::string label = {});

// Same curve traversed backwards (control points in reverse order).
CoilCurve reversed(const CoilCurve& curve);

// K uniform samples t = i / K, i = 0..K, written as CSV rows `t,x,y,z`.
void write_polyline_csv(std::ostream& out, const CoilCurve& curve, int samples);

}  // namespace coilopt

#endif  // COILOPT_CURVE_H_
