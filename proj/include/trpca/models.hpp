#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "trpca/rng.hpp"
#include "trpca/torus.hpp"

// The three toroidal distributions backing TR-PCA: the bivariate sine von
// Mises (BSvM), the bivariate wrapped Cauchy (BWC), and the bivariate
// wrapped normal (BWN, simulation only). Density, log-density, the
// derivative components the ridge solver consumes, and seeded samplers.

namespace trpca {

struct BsvmParams {
  Angle mu1, mu2;
  double kappa1 = 0.0, kappa2 = 0.0, lambda = 0.0;
  double log_norm = 0.0;  // log integral of the exponential kernel, cached

  BsvmParams() : BsvmParams(0.0, 0.0, 0.0, 0.0, 0.0) {}
  BsvmParams(double mu1, double mu2, double kappa1, double kappa2,
             double lambda);

  /// Sufficient condition for a single mode.
  bool unimodal() const { return kappa1 * kappa2 > lambda * lambda; }
};

struct BwcParams {
  Angle mu1, mu2;
  double xi1 = 0.0, xi2 = 0.0, rho = 0.0;
  // Derived constants of the density, cached on construction. c0..c3 use
  // |rho|; c4 carries the sign of rho.
  double c = 0.0, c0 = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;

  BwcParams(double mu1, double mu2, double xi1, double xi2, double rho);
};

struct BwnParams {
  TorusPoint mu;
  double sigma1_sq = 1.0, sigma2_sq = 1.0, rho = 0.0;

  BwnParams(double mu1, double mu2, double sigma1_sq, double sigma2_sq,
            double rho);
};

using ModelParams = std::variant<BsvmParams, BwcParams, BwnParams>;

/// Density value plus first/second derivative components at a point.
/// d1, d2 hold grad f / f and u, v, w hold Hess f / f: the positive factor
/// shared by the raw derivatives is divided out, which leaves the implicit
/// ridge equation and the eigenvalue condition unchanged and makes the
/// normalized projected gradient of the Euler method directly computable.
struct DensityDerivatives {
  double f = 0.0;
  double d1 = 0.0, d2 = 0.0;
  double u = 0.0, v = 0.0, w = 0.0;
};

/// Normalizing prefactor of the BSvM density (reciprocal of the integral of
/// the exponential kernel over T^2), so that the density integrates to 1.
double bsvm_norm_const(double kappa1, double kappa2, double lambda);

/// log of the kernel integral itself (the series 4pi^2 sum_m ...).
double bsvm_log_norm_series(double kappa1, double kappa2, double lambda);

/// (I_{m+1}(x)/I_m(x))/x for m = 0..count-1; finite at x = 0.
std::vector<double> ratio_over_x_ladder(double x, int count);

DensityDerivatives bsvm_derivatives(const TorusPoint& p,
                                    const BsvmParams& params);
DensityDerivatives bwc_derivatives(const TorusPoint& p,
                                   const BwcParams& params);

double density(const TorusPoint& p, const ModelParams& params);
double log_density(const TorusPoint& p, const ModelParams& params);

/// Location parameter (mu1, mu2) of any model.
TorusPoint location(const ModelParams& params);

/// Seeded sampler. BSvM/BWC use envelope rejection against the uniform
/// density on T^2; BWN wraps correlated normal deviates. Throws when the
/// estimated acceptance rate falls below 1e-4.
std::vector<TorusPoint> sample(const ModelParams& params, std::size_t n,
                               std::uint64_t seed);

}  // namespace trpca
