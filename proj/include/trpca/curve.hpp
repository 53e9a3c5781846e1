#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "trpca/ridge.hpp"
#include "trpca/torus.hpp"

// Analytic handle on a connected ridge: a truncated Fourier parametrization
// of the zero-centered ridge function, its arc-length reparametrization
// scaled and centered to T, and projection of arbitrary torus points onto
// the resulting closed curve.

namespace trpca {

struct FourierRidge {
  std::vector<double> a;  // cosine coefficients, a[0..m]
  std::vector<double> b;  // sine coefficients, b[0] = 0
  int m = 15;
  int index_coord = 1;
  TorusPoint mu;
  double rho0 = 0.0;  // rho_m(0), subtracted so the curve passes through mu

  // Arc length over one index period, filled by arclength_param.
  double total_length_R = 0.0;
  std::vector<double> arclen_t;  // 1025 nodes on [0, 2pi]
  std::vector<double> arclen_L;  // strictly increasing, L[0] = 0
  std::vector<TorusPoint> alpha_cache;  // curve at 1024 uniform alphas
  bool arclength_ready = false;

  std::vector<TorusPoint> source_points;  // the ridge points fitted
  bool extended = false;  // carried over from the input ridge
};

/// Fits the truncated cosine/sine series of the zero-centered ridge by
/// 64-node Gauss-Legendre quadrature on a monotone piecewise-cubic
/// interpolant of the ridge points. Throws when the ridge is multivalued in
/// the index coordinate or has fewer than 2m + 2 points.
FourierRidge fourier_fit(const ConnectedRidge& ridge, int m = 15);

/// Truncated series C_m, S_m and the angle rho_m = atan2(S_m, C_m).
double fourier_rho(const FourierRidge& fr, double theta);
/// d rho_m / d theta.
double fourier_rho_deriv(const FourierRidge& fr, double theta);

/// Point of the curve at index-coordinate value phi.
TorusPoint eval_curve(const FourierRidge& fr, double phi);

/// Builds the arc-length table (1024 intervals, adaptive Simpson per cell)
/// and the cached alpha-grid; returns the curve ready for eval_scaled.
FourierRidge arclength_param(FourierRidge fr);

/// Scaled-centered arc-length curve r~(alpha), alpha in T.
TorusPoint eval_scaled(const FourierRidge& fr, double alpha);

/// Unit-speed direction of r~ at alpha, as a (theta1, theta2) vector.
Vec2 scaled_tangent(const FourierRidge& fr, double alpha);

struct Projection {
  double alpha = 0.0;
  TorusPoint foot;
  double dist = 0.0;
  bool tied = false;  // another minimum within 1e-9; smallest alpha kept
};

/// Closest point of the curve: 1024-point grid scan over alpha followed by
/// golden-section refinement to 1e-8.
Projection project(const FourierRidge& fr, const TorusPoint& p);

/// CSV export: `alpha,theta1,theta2`, 1024 rows, 17 significant digits.
void write_ridge_csv(const FourierRidge& fr, std::ostream& os);
void write_ridge_csv(const FourierRidge& fr, const std::string& path);

}  // namespace trpca
