#include "coilopt/bspline.h"

#include <cmath>
#include <string>

#include "coilopt/errors.h"

namespace coilopt {

namespace {

constexpr int kMaxDegree = 3;

}  // namespace

double cardinal_bspline(int degree, double u) {
  if (degree == 0) {
    return (u >= 0.0 && u < 1.0) ? 1.0 : 0.0;
  }
  if (u < 0.0 || u >= degree + 1) {
    return 0.0;
  }
  return (u * cardinal_bspline(degree - 1, u) +
          (degree + 1 - u) * cardinal_bspline(degree - 1, u - 1.0)) /
         degree;
}

double cardinal_bspline_derivative(int degree, double u) {
  if (degree == 0) {
    return 0.0;
  }
  return cardinal_bspline(degree - 1, u) - cardinal_bspline(degree - 1, u - 1.0);
}

double quadratic_piece(int piece, double u) {
  switch (piece) {
    case 0:
      return 0.5 * u * u;
    case 1:
      return 0.5 * (-2.0 * u * u + 6.0 * u - 3.0);
    case 2:
      return 0.5 * (u - 3.0) * (u - 3.0);
    default:
      return 0.0;
  }
}

double quadratic_piece_derivative(int piece, double u) {
  switch (piece) {
    case 0:
      return u;
    case 1:
      return -2.0 * u + 3.0;
    case 2:
      return u - 3.0;
    default:
      return 0.0;
  }
}

PeriodicBasis::PeriodicBasis(int degree, int count, Evaluation eval)
    : degree_(degree),
      count_(count),
      span_(count > 0 ? 1.0 / count : 0.0),
      explicit_quadratic_(degree == 2 && eval == Evaluation::kAuto) {
  if (degree < 1 || degree > kMaxDegree) {
    throw InvalidArgument("PeriodicBasis: degree must be in [1, " + std::to_string(kMaxDegree) +
                          "], got " + std::to_string(degree));
  }
  if (count <= degree) {
    throw InvalidArgument("PeriodicBasis: need more basis functions than the degree (N=" +
                          std::to_string(count) + ", p=" + std::to_string(degree) + ")");
  }
}

PeriodicBasis PeriodicBasis::from_knots(int degree, std::span<const double> knots,
                                        Evaluation eval) {
  if (knots.size() < 2) {
    throw InvalidArgument("PeriodicBasis: knot vector needs at least two entries");
  }
  const int count = static_cast<int>(knots.size()) - 1;
  const double span = 1.0 / count;
  for (int m = 0; m <= count; ++m) {
    if (std::abs(knots[m] - m * span) > 1e-12) {
      throw InvalidArgument("PeriodicBasis: only uniform knots t_m = m/N are supported (knot " +
                            std::to_string(m) + " deviates)");
    }
  }
  return PeriodicBasis(degree, count, eval);
}

void PeriodicBasis::check_index(int m) const {
  if (m < 0 || m >= count_) {
    throw InvalidArgument("PeriodicBasis: basis index " + std::to_string(m) + " outside [0, " +
                          std::to_string(count_) + ")");
  }
}

KnotLocation PeriodicBasis::locate(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw InvalidArgument("PeriodicBasis: curve parameter " + std::to_string(t) +
                          " outside [0, 1]");
  }
  int k = static_cast<int>(std::floor(t * count_));
  if (k >= count_) {
    k = count_ - 1;
  }
  double x = t * count_ - k;
  if (x > 1.0) {
    x = 1.0;
  } else if (x < 0.0) {
    x = 0.0;
  }
  return {k, x};
}

int PeriodicBasis::piece_of(int m, int k) const {
  const int j = ((k - m) % count_ + count_) % count_;
  return j <= degree_ ? j : -1;
}

double PeriodicBasis::piece_value(int j, double x) const {
  if (explicit_quadratic_) {
    return quadratic_piece(j, x + j);
  }
  // Right limit at x + j, so the knot at the top of the support (x = 1 on the
  // last piece) still returns the continuous value 0 rather than a jump.
  const double u = x + j;
  if (j == degree_ && x >= 1.0) {
    return 0.0;
  }
  return cardinal_bspline(degree_, u);
}

double PeriodicBasis::piece_derivative(int j, double x) const {
  if (explicit_quadratic_) {
    return quadratic_piece_derivative(j, x + j) * count_;
  }
  // At x = 1 the one-sided limit from inside the interval is used.
  double u = x + j;
  if (x >= 1.0) {
    u = std::nextafter(u, 0.0);
  }
  return cardinal_bspline_derivative(degree_, u) * count_;
}

double PeriodicBasis::value(int m, double t) const {
  check_index(m);
  const KnotLocation loc = locate(t);
  const int j = piece_of(m, loc.interval);
  return j < 0 ? 0.0 : piece_value(j, loc.local);
}

double PeriodicBasis::derivative(int m, double t) const {
  check_index(m);
  const KnotLocation loc = locate(t);
  const int j = piece_of(m, loc.interval);
  return j < 0 ? 0.0 : piece_derivative(j, loc.local);
}

std::vector<int> PeriodicBasis::support_intervals(int m) const {
  check_index(m);
  std::vector<int> out;
  out.reserve(degree_ + 1);
  for (int j = 0; j <= degree_; ++j) {
    out.push_back((m + j) % count_);
  }
  return out;
}

}  // namespace coilopt
