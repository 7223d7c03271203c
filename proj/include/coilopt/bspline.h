#ifndef COILOPT_BSPLINE_H_
#define COILOPT_BSPLINE_H_

#include <span>
#include <vector>

namespace coilopt {

// Uniform cardinal B-spline of degree p on [0, p+1), evaluated by the
// Cox-de Boor recursion. Zero outside the support.
double cardinal_bspline(int degree, double u);
double cardinal_bspline_derivative(int degree, double u);

// Closed-form degree-2 pieces N^2_j(u) for u in [j, j+1], j = 0, 1, 2.
double quadratic_piece(int piece, double u);
double quadratic_piece_derivative(int piece, double u);

// Location of a curve parameter: the knot interval k holding t and the local
// coordinate x = (t - t_k) / span in [0, 1].
struct KnotLocation {
  int interval = 0;
  double local = 0.0;
};

// Periodic B-spline basis R^p_0 .. R^p_{N-1} on uniform knots t_m = m/N.
//
// R^p_m is supported on the p+1 intervals I_m, I_{m+1}, ..., I_{(m+p)%N};
// on I_{(m+j)%N} it equals the j-th polynomial piece evaluated at x + j,
// where x is the local coordinate inside that interval. The last p functions
// therefore have supports split across t = 0.
//
// Curve parameters are accepted in [0, 1]; t = 1 lands in the last interval
// at x = 1, which is the same point as t = 0 on the closed curve.
class PeriodicBasis {
 public:
  enum class Evaluation {
    kAuto,       // closed-form pieces for p = 2, recursion otherwise
    kRecursive,  // always Cox-de Boor
  };

  PeriodicBasis(int degree, int count, Evaluation eval = Evaluation::kAuto);

  // Validates that `knots` (N+1 values from 0 to 1) are uniform before building.
  static PeriodicBasis from_knots(int degree, std::span<const double> knots,
                                  Evaluation eval = Evaluation::kAuto);

  int degree() const { return degree_; }
  int count() const { return count_; }
  double knot_span() const { return span_; }
  double knot(int m) const { return m * span_; }

  double value(int m, double t) const;
  double derivative(int m, double t) const;

  // Interval indices making up supp(R^p_m), in the order m, m+1, ... (mod N).
  std::vector<int> support_intervals(int m) const;

  KnotLocation locate(double t) const;

  // j-th polynomial piece at local coordinate x in [0, 1] of an interval.
  // This is R^p_{k-j} restricted to I_k. Derivatives include the 1/span factor.
  double piece_value(int j, double x) const;
  double piece_derivative(int j, double x) const;

  // Index of the basis function that uses piece j on interval k.
  int function_on_interval(int k, int j) const { return ((k - j) % count_ + count_) % count_; }

 private:
  void check_index(int m) const;
  // Piece offset of function m on interval k, or -1 if I_k is outside its support.
  int piece_of(int m, int k) const;

  int degree_;
  int count_;
  double span_;
  bool explicit_quadratic_;
};

}  // namespace coilopt

#endif  // COILOPT_BSPLINE_H_
