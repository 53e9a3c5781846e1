#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

// Geometry of the flat torus T^2 = [-pi, pi)^2 with -pi and pi identified:
// angle wrapping, the toroidal metric, circular means and Frechet
// means/variances. Everything here is pure and reentrant.

namespace trpca {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Wraps x onto [-pi, pi): (x + pi) mod 2pi - pi. Throws std::domain_error
/// for non-finite input.
double cmod(double x);

/// Shortest arc length between two angles on the circle, in [0, pi].
double circ_dist(double a, double b);

/// An angle in radians, always kept in [-pi, pi).
class Angle {
 public:
  Angle() = default;
  explicit Angle(double radians) : value_(cmod(radians)) {}

  double value() const { return value_; }
  operator double() const { return value_; }

 private:
  double value_ = 0.0;
};

/// A point on T^2.
struct TorusPoint {
  Angle theta1;
  Angle theta2;

  TorusPoint() = default;
  TorusPoint(double t1, double t2) : theta1(t1), theta2(t2) {}
  TorusPoint(Angle t1, Angle t2) : theta1(t1), theta2(t2) {}
};

/// Toroidal distance d_{T^2}: the Euclidean combination of per-coordinate
/// circular distances. Range [0, pi*sqrt(2)].
double torus_dist(const TorusPoint& a, const TorusPoint& b);

/// Extrinsic circular mean, atan2 of the mean sine and cosine.
/// Throws std::invalid_argument on an empty sample and std::runtime_error
/// when the resultant length is below 1e-12 (mean undefined).
Angle circular_mean(std::span<const double> sample);

/// Mean resultant length of an angle sample, in [0, 1].
double mean_resultant_length(std::span<const double> sample);

/// Circular (sample) variance 1 - Rbar, in [0, 1].
double circular_variance(std::span<const double> sample);

/// Marginal Frechet mean and minimized objective on the circle.
/// The variance is the unnormalized minimum of sum_i d(phi, theta_i)^2.
struct CircularFrechet {
  double mean = 0.0;
  double variance = 0.0;
  bool tie = false;  // minimizer non-unique within 1e-12; smallest angle kept
};

/// Minimizes sum_i d_T(phi, theta_i)^2 by scanning the sample values plus a
/// 1000-point uniform grid and refining the best bracket by golden section.
CircularFrechet frechet_circular(std::span<const double> sample);

struct FrechetSummary {
  TorusPoint mean;
  double total_variance = 0.0;
  std::array<double, 2> marginal_variances{0.0, 0.0};
  bool tie = false;
};

/// Frechet mean/variance on T^2, computed marginal-by-marginal through the
/// product structure of the squared toroidal distance.
FrechetSummary frechet_summary(std::span<const TorusPoint> sample);

// Coordinate extraction helpers.
std::vector<double> coord(std::span<const TorusPoint> pts, int which);

}  // namespace trpca
